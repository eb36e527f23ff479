#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "appearance.hpp"
#include "box.hpp"
#include "kalman.hpp"
#include "particles.hpp"
#include "types.hpp"

namespace vatrack {

/// One tracked target: identity, particle approximation of its intensity,
/// Kalman parameters, appearance history and the two-strike miss counter.
struct Track {
  std::uint64_t id = 0;
  ClassLabel class_label = ClassLabel::Other;
  ParticleSet particles;
  KalmanState kalman;
  TemporalHistogram appearance;
  bool has_appearance = false;
  std::vector<std::pair<int, BBox>> history;  // (frame, box) per emitted frame
  BBox last_box;       // most recent associated or estimated box
  BBox predicted_box;  // current-frame prediction, post refinement
  int miss_count = 0;
  double last_score = 1.0;
  bool matched_this_frame = false;
};

}  // namespace vatrack
