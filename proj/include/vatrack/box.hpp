#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "errors.hpp"

namespace vatrack {

/// Axis-aligned box with continuous corner coordinates in pixels.
/// Valid boxes satisfy left < right and top < bottom with finite corners.
struct BBox {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  BBox() = default;
  BBox(double l, double t, double r, double b) : left(l), top(t), right(r), bottom(b) {}

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  double cx() const { return 0.5 * (left + right); }
  double cy() const { return 0.5 * (top + bottom); }
  double diagonal() const { return std::hypot(width(), height()); }

  bool valid() const {
    return std::isfinite(left) && std::isfinite(top) && std::isfinite(right) &&
           std::isfinite(bottom) && left < right && top < bottom;
  }

  static BBox from_cxcywh(double cx, double cy, double w, double h) {
    return BBox(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
  }

  BBox translated(double dx, double dy) const {
    return BBox(left + dx, top + dy, right + dx, bottom + dy);
  }

  /// Box with the same center scaled by `factor` along both axes.
  BBox scaled(double factor) const {
    return from_cxcywh(cx(), cy(), factor * width(), factor * height());
  }

  friend bool operator==(const BBox& a, const BBox& b) = default;
};

inline double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right, b.right) - std::max(a.left, b.left);
  if (iw <= 0.0) return 0.0;
  const double ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

inline std::pair<double, double> box_center(const BBox& b) { return {b.cx(), b.cy()}; }

/// Intersects `b` with the frame [0,w]x[0,h].
/// Throws DegenerateBox when the intersection has zero area.
inline BBox clamp_box(const BBox& b, double frame_w, double frame_h) {
  BBox c(std::clamp(b.left, 0.0, frame_w), std::clamp(b.top, 0.0, frame_h),
         std::clamp(b.right, 0.0, frame_w), std::clamp(b.bottom, 0.0, frame_h));
  if (!(c.left < c.right) || !(c.top < c.bottom)) {
    throw DegenerateBox("box lies outside the frame");
  }
  return c;
}

/// Integer pixel span [x0,x1) x [y0,y1) covered by a box inside a w x h raster.
/// A pixel (x, y) is covered when its cell [x,x+1) x [y,y+1) intersects the box.
struct PixelSpan {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  long long count() const {
    return empty() ? 0 : static_cast<long long>(x1 - x0) * (y1 - y0);
  }
};

inline PixelSpan pixel_span(const BBox& b, int raster_w, int raster_h) {
  PixelSpan s;
  s.x0 = std::max(0, static_cast<int>(std::floor(b.left)));
  s.y0 = std::max(0, static_cast<int>(std::floor(b.top)));
  s.x1 = std::min(raster_w, static_cast<int>(std::ceil(b.right)));
  s.y1 = std::min(raster_h, static_cast<int>(std::ceil(b.bottom)));
  return s;
}

}  // namespace vatrack
