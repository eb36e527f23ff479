#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "box.hpp"
#include "errors.hpp"
#include "types.hpp"

namespace vatrack {

/// Raw RPN output: for each of h*w feature locations and each of `a` anchors,
/// an objectness score followed by four box-regression values.
/// Entries are location-major, anchor-minor.
struct ProposalTensor {
  int h = 0;
  int w = 0;
  int a = 0;
  std::vector<float> entries;  // h * w * a * 5 floats

  static constexpr int kDepth = 5;

  std::size_t locations() const { return static_cast<std::size_t>(h) * w; }
  std::size_t entry_count() const { return locations() * a; }

  float score(std::size_t location, int anchor) const {
    return entries[(location * a + anchor) * kDepth];
  }
  float& score(std::size_t location, int anchor) {
    return entries[(location * a + anchor) * kDepth];
  }
  std::array<float, 4> regression(std::size_t location, int anchor) const {
    const std::size_t base = (location * a + anchor) * kDepth + 1;
    return {entries[base], entries[base + 1], entries[base + 2], entries[base + 3]};
  }
  void set_regression(std::size_t location, int anchor, const std::array<float, 4>& r) {
    const std::size_t base = (location * a + anchor) * kDepth + 1;
    std::copy(r.begin(), r.end(), entries.begin() + base);
  }

  static ProposalTensor zeros(int h, int w, int a) {
    ProposalTensor t;
    t.h = h;
    t.w = w;
    t.a = a;
    t.entries.assign(static_cast<std::size_t>(h) * w * a * kDepth, 0.0f);
    return t;
  }
};

enum class FilterDirection { AtLeast, Below };

/// Condition D of the attention filter: which locations pass, and how many
/// proposals to keep at each passing location.
struct FilterCondition {
  double threshold = 0.4;
  FilterDirection direction = FilterDirection::AtLeast;
  int n = 1;
};

/// Top-n anchor indices per location, descending score, flat with stride n.
struct SelectionIndex {
  int n = 0;
  std::vector<int> indices;

  const int* at(std::size_t location) const { return indices.data() + location * n; }
};

struct AnchorSpec {
  std::vector<double> sizes;
  std::vector<double> ratios;
  double stride = 16.0;

  int anchor_count() const { return static_cast<int>(sizes.size() * ratios.size()); }

  static AnchorSpec standard(double stride = 16.0) {
    return AnchorSpec{{4.0, 8.0, 16.0, 32.0}, {0.5, 1.0, 2.0}, stride};
  }
};

struct Proposal {
  BBox bbox;
  double objectness = 0.0;
  int row = 0;
  int col = 0;
  int layer = 0;
};

/// Anchor j at feature cell (row, col): centered on the cell, area preserved
/// across ratios. j runs sizes-major, ratios-minor.
inline BBox anchor_box(const AnchorSpec& spec, int row, int col, int anchor_index) {
  const int nratios = static_cast<int>(spec.ratios.size());
  const double size = spec.sizes[anchor_index / nratios];
  const double ratio = spec.ratios[anchor_index % nratios];
  const double cx = (col + 0.5) * spec.stride;
  const double cy = (row + 0.5) * spec.stride;
  const double w = size * spec.stride * std::sqrt(ratio);
  const double h = size * spec.stride / std::sqrt(ratio);
  return BBox::from_cxcywh(cx, cy, w, h);
}

/// All anchors for an h x w feature map, location-major, anchor-minor.
inline std::vector<BBox> generate_anchors(const AnchorSpec& spec, int h, int w) {
  std::vector<BBox> anchors;
  anchors.reserve(static_cast<std::size_t>(h) * w * spec.anchor_count());
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      for (int j = 0; j < spec.anchor_count(); ++j) {
        anchors.push_back(anchor_box(spec, row, col, j));
      }
    }
  }
  return anchors;
}

/// Applies a center-offset / log-size regression to an anchor.
/// Throws NonFinite when the exponentials overflow.
inline BBox decode_bbox(const BBox& anchor, const std::array<float, 4>& regression) {
  const double w = anchor.width();
  const double h = anchor.height();
  const double cx = anchor.cx() + regression[0] * w;
  const double cy = anchor.cy() + regression[1] * h;
  const double nw = w * std::exp(static_cast<double>(regression[2]));
  const double nh = h * std::exp(static_cast<double>(regression[3]));
  BBox out = BBox::from_cxcywh(cx, cy, nw, nh);
  if (!out.valid()) throw NonFinite("decoded box is not finite");
  return out;
}

/// Per-location top-n anchors by objectness, descending; ties broken by the
/// lower anchor index so reruns are byte-identical.
inline SelectionIndex topn_indices(const ProposalTensor& tensor, int n) {
  if (n < 1 || n > tensor.a) throw InvalidN("top-n must satisfy 1 <= n <= A");
  SelectionIndex sel;
  sel.n = n;
  sel.indices.resize(tensor.locations() * n);
  std::vector<int> order(tensor.a);
  for (std::size_t loc = 0; loc < tensor.locations(); ++loc) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
      const float sl = tensor.score(loc, lhs);
      const float sr = tensor.score(loc, rhs);
      if (sl != sr) return sl > sr;
      return lhs < rhs;
    });
    std::copy(order.begin(), order.begin() + n, sel.indices.begin() + loc * n);
  }
  return sel;
}

inline bool condition_holds(float value, const FilterCondition& cond) {
  return cond.direction == FilterDirection::AtLeast ? value >= cond.threshold
                                                    : value < cond.threshold;
}

/// f(M, D): indices of the locations whose attention value meets the
/// condition, ascending row-major order.
inline std::vector<std::size_t> attention_select(const AttentionGrid& m,
                                                 const FilterCondition& cond) {
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (condition_holds(m.values[i], cond)) selected.push_back(i);
  }
  return selected;
}

/// I_filter = I[S*[f(M, D), :]] — keeps the top-n proposals of every location
/// whose attention value meets the condition. Emits exactly |selected| * n
/// proposals: boxes decoded from their anchors and clamped to the frame.
inline std::vector<Proposal> filter_proposals(const ProposalTensor& tensor,
                                              const AttentionGrid& m,
                                              const FilterCondition& cond,
                                              const AnchorSpec& anchors, double frame_w,
                                              double frame_h, int layer = 0) {
  if (m.width != tensor.w || m.height != tensor.h) {
    throw DimensionMismatch("attention grid does not match the feature map");
  }
  if (anchors.anchor_count() != tensor.a) {
    throw DimensionMismatch("anchor spec does not match the tensor anchor count");
  }
  const SelectionIndex sel = topn_indices(tensor, cond.n);
  const std::vector<std::size_t> locations = attention_select(m, cond);

  std::vector<Proposal> out;
  out.reserve(locations.size() * cond.n);
  for (std::size_t loc : locations) {
    const int row = static_cast<int>(loc) / tensor.w;
    const int col = static_cast<int>(loc) % tensor.w;
    const int* top = sel.at(loc);
    for (int k = 0; k < cond.n; ++k) {
      const int j = top[k];
      const BBox decoded = decode_bbox(anchor_box(anchors, row, col, j),
                                       tensor.regression(loc, j));
      out.push_back(Proposal{clamp_box(decoded, frame_w, frame_h),
                             tensor.score(loc, j), row, col, layer});
    }
  }
  return out;
}

/// Training-time union I_filter1 + I_filter2: top n_high where M >= tau,
/// top n_low where M < tau. The two conditions partition the locations, so
/// the union is duplicate-free.
inline std::vector<Proposal> combine_filters(const ProposalTensor& tensor,
                                             const AttentionGrid& m,
                                             const AnchorSpec& anchors, double frame_w,
                                             double frame_h, double tau = 0.4,
                                             int n_high = 4, int n_low = 2) {
  std::vector<Proposal> out = filter_proposals(
      tensor, m, FilterCondition{tau, FilterDirection::AtLeast, n_high}, anchors,
      frame_w, frame_h);
  std::vector<Proposal> low = filter_proposals(
      tensor, m, FilterCondition{tau, FilterDirection::Below, n_low}, anchors, frame_w,
      frame_h);
  out.insert(out.end(), low.begin(), low.end());
  return out;
}

/// Greedy non-maximum suppression by descending objectness. Any surviving
/// pair has iou < threshold; output keeps the descending-score order.
inline std::vector<Proposal> nms(const std::vector<Proposal>& proposals,
                                 double iou_threshold) {
  std::vector<std::size_t> order(proposals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    return proposals[lhs].objectness > proposals[rhs].objectness;
  });
  std::vector<Proposal> kept;
  for (std::size_t idx : order) {
    bool suppressed = false;
    for (const Proposal& k : kept) {
      if (iou(proposals[idx].bbox, k.bbox) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(proposals[idx]);
  }
  return kept;
}

/// Max-pools an image-resolution attention map down to feature-map size.
/// Block max rather than mean so small salient regions survive thresholding.
inline AttentionGrid downsample_attention(const AttentionGrid& m, int feature_h,
                                          int feature_w) {
  if (m.height < feature_h || m.width < feature_w || feature_h < 1 || feature_w < 1) {
    throw DimensionMismatch("attention map smaller than the feature map");
  }
  AttentionGrid out;
  out.width = feature_w;
  out.height = feature_h;
  out.kind = m.kind;
  out.values.resize(static_cast<std::size_t>(feature_w) * feature_h);
  for (int r = 0; r < feature_h; ++r) {
    const int y0 = static_cast<int>(static_cast<long long>(r) * m.height / feature_h);
    const int y1 =
        static_cast<int>(static_cast<long long>(r + 1) * m.height / feature_h);
    for (int c = 0; c < feature_w; ++c) {
      const int x0 = static_cast<int>(static_cast<long long>(c) * m.width / feature_w);
      const int x1 =
          static_cast<int>(static_cast<long long>(c + 1) * m.width / feature_w);
      float best = 0.0f;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          best = std::max(best, m.at(y, x));
        }
      }
      out.at(r, c) = best;
    }
  }
  return out;
}

}  // namespace vatrack
