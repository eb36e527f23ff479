#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "box.hpp"
#include "errors.hpp"
#include "types.hpp"

namespace vatrack {

struct HSV {
  double h = 0.0;  // [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

/// Standard hexcone RGB -> HSV conversion, channels in [0, 255].
inline HSV rgb_to_hsv(double r, double g, double b) {
  const double rn = r / 255.0, gn = g / 255.0, bn = b / 255.0;
  const double maxc = std::max({rn, gn, bn});
  const double minc = std::min({rn, gn, bn});
  const double delta = maxc - minc;
  HSV out;
  out.v = maxc;
  out.s = maxc > 0.0 ? delta / maxc : 0.0;
  if (delta > 0.0) {
    if (maxc == rn) {
      out.h = 60.0 * std::fmod((gn - bn) / delta, 6.0);
    } else if (maxc == gn) {
      out.h = 60.0 * ((bn - rn) / delta + 2.0);
    } else {
      out.h = 60.0 * ((rn - gn) / delta + 4.0);
    }
    if (out.h < 0.0) out.h += 360.0;
    if (out.h >= 360.0) out.h -= 360.0;
  }
  return out;
}

/// Concatenated hue/saturation histogram: 50 hue bins over [0, 360) followed
/// by 60 saturation bins over [0, 1], each segment independently L1-normalized.
struct AppearanceHistogram {
  static constexpr int kHueBins = 50;
  static constexpr int kSatBins = 60;
  static constexpr int kBins = kHueBins + kSatBins;
  static constexpr double kLowSaturation = 0.05;

  std::array<double, kBins> bins{};

  double hue_sum() const {
    double s = 0.0;
    for (int i = 0; i < kHueBins; ++i) s += bins[i];
    return s;
  }
  double sat_sum() const {
    double s = 0.0;
    for (int i = kHueBins; i < kBins; ++i) s += bins[i];
    return s;
  }
  bool normalized(double tol = 1e-6) const {
    return std::abs(hue_sum() - 1.0) <= tol && std::abs(sat_sum() - 1.0) <= tol;
  }
};

inline int hue_bin(double h) {
  int bin = static_cast<int>(h / (360.0 / AppearanceHistogram::kHueBins));
  return std::min(bin, AppearanceHistogram::kHueBins - 1);
}

inline int saturation_bin(double s) {
  int bin = static_cast<int>(s * AppearanceHistogram::kSatBins);
  return std::min(bin, AppearanceHistogram::kSatBins - 1);
}

/// HS histogram of the pixels covered by `region`. The region must intersect
/// the image; hue of near-gray pixels (s < 0.05) is numerically meaningless
/// and lands in hue bin 0.
inline AppearanceHistogram hs_histogram(const ImageRGB& image, const BBox& region) {
  const PixelSpan span = pixel_span(region, image.width, image.height);
  if (span.empty()) throw DegenerateRegion("histogram region covers no pixels");

  AppearanceHistogram hist;
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      const std::uint8_t* p = image.at(y, x);
      const HSV hsv = rgb_to_hsv(p[0], p[1], p[2]);
      const int hb = hsv.s < AppearanceHistogram::kLowSaturation ? 0 : hue_bin(hsv.h);
      hist.bins[hb] += 1.0;
      hist.bins[AppearanceHistogram::kHueBins + saturation_bin(hsv.s)] += 1.0;
    }
  }
  const double total = static_cast<double>(span.count());
  for (double& b : hist.bins) b /= total;
  return hist;
}

/// Bhattacharyya distance in the conventional image-histogram form,
/// sqrt(1 - sum(sqrt(a_i b_i)) / sqrt(sum(a) sum(b))). 0 for identical
/// histograms, 1 for disjoint support.
inline double bhattacharyya_raw(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("histogram sizes differ");
  double cross = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cross += std::sqrt(a[i] * b[i]);
    sum_a += a[i];
    sum_b += b[i];
  }
  if (sum_a <= 0.0 || sum_b <= 0.0) throw NonNormalized("histogram has zero mass");
  const double coeff = cross / std::sqrt(sum_a * sum_b);
  return std::sqrt(std::max(0.0, 1.0 - coeff));
}

inline double bhattacharyya(const AppearanceHistogram& h1, const AppearanceHistogram& h2) {
  if (!h1.normalized() || !h2.normalized()) {
    throw NonNormalized("appearance histogram segments must each sum to 1");
  }
  return bhattacharyya_raw(std::span<const double>(h1.bins),
                           std::span<const double>(h2.bins));
}

/// Appearance summary over a track's history.
struct TemporalHistogram {
  AppearanceHistogram histogram;
  int sample_count = 0;

  static TemporalHistogram from(const AppearanceHistogram& h) {
    return TemporalHistogram{h, 1};
  }
};

/// Exponential moving average of the track appearance, renormalized per
/// segment so the result stays a valid AppearanceHistogram.
inline TemporalHistogram temporal_update(const TemporalHistogram& t,
                                         const AppearanceHistogram& fresh,
                                         double alpha) {
  TemporalHistogram out;
  for (int i = 0; i < AppearanceHistogram::kBins; ++i) {
    out.histogram.bins[i] = (1.0 - alpha) * t.histogram.bins[i] + alpha * fresh.bins[i];
  }
  const double hs = out.histogram.hue_sum();
  const double ss = out.histogram.sat_sum();
  if (hs > 0.0) {
    for (int i = 0; i < AppearanceHistogram::kHueBins; ++i) out.histogram.bins[i] /= hs;
  }
  if (ss > 0.0) {
    for (int i = AppearanceHistogram::kHueBins; i < AppearanceHistogram::kBins; ++i) {
      out.histogram.bins[i] /= ss;
    }
  }
  out.sample_count = t.sample_count + 1;
  return out;
}

}  // namespace vatrack
