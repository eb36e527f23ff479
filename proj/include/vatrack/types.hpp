#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "box.hpp"
#include "errors.hpp"

namespace vatrack {

enum class ClassLabel { Car, Pedestrian, Cyclist, Other };

inline const char* to_string(ClassLabel c) {
  switch (c) {
    case ClassLabel::Car: return "Car";
    case ClassLabel::Pedestrian: return "Pedestrian";
    case ClassLabel::Cyclist: return "Cyclist";
    default: return "Other";
  }
}

inline ClassLabel class_label_from_string(const std::string& s) {
  if (s == "Car") return ClassLabel::Car;
  if (s == "Pedestrian") return ClassLabel::Pedestrian;
  if (s == "Cyclist") return ClassLabel::Cyclist;
  return ClassLabel::Other;
}

struct Detection {
  int frame_index = 0;
  ClassLabel class_label = ClassLabel::Other;
  BBox bbox;
  double score = 1.0;
};

enum class AttentionKind { Objectness, Subjectness };

/// Scalar attention map, row-major, every value in [0, 1].
struct AttentionGrid {
  int width = 0;
  int height = 0;
  std::vector<float> values;
  AttentionKind kind = AttentionKind::Objectness;

  float at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  float& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  bool empty() const { return values.empty(); }

  static AttentionGrid filled(int w, int h, float value,
                              AttentionKind kind = AttentionKind::Objectness) {
    AttentionGrid g;
    g.width = w;
    g.height = h;
    g.kind = kind;
    g.values.assign(static_cast<std::size_t>(w) * h, value);
    return g;
  }
};

/// Interleaved 8-bit RGB raster, row-major.
struct ImageRGB {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  const std::uint8_t* at(int row, int col) const {
    return pixels.data() + 3 * (static_cast<std::size_t>(row) * width + col);
  }
  std::uint8_t* at(int row, int col) {
    return pixels.data() + 3 * (static_cast<std::size_t>(row) * width + col);
  }
  bool empty() const { return pixels.empty(); }

  static ImageRGB filled(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageRGB img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i + 2 < img.pixels.size(); i += 3) {
      img.pixels[i] = r;
      img.pixels[i + 1] = g;
      img.pixels[i + 2] = b;
    }
    return img;
  }

  void fill_rect(const BBox& box, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const PixelSpan s = pixel_span(box, width, height);
    for (int y = s.y0; y < s.y1; ++y) {
      for (int x = s.x0; x < s.x1; ++x) {
        std::uint8_t* p = at(y, x);
        p[0] = r;
        p[1] = g;
        p[2] = b;
      }
    }
  }
};

/// Everything the tracker sees for one frame.
struct FrameObservation {
  int frame_index = 0;
  std::vector<Detection> detections;
  std::optional<AttentionGrid> attention;
  std::optional<ImageRGB> image;
};

/// One row of tracker output (and of the ground-truth CSV).
struct TrackRecord {
  int frame = 0;
  std::uint64_t track_id = 0;
  ClassLabel class_label = ClassLabel::Other;
  BBox bbox;
  double score = 1.0;
};

}  // namespace vatrack
