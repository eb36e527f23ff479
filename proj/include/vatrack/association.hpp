#pragma once

#include <optional>
#include <vector>

#include "appearance.hpp"
#include "box.hpp"
#include "hungarian.hpp"
#include "track.hpp"
#include "types.hpp"

namespace vatrack {

/// Equal-weight blend of box overlap and appearance distance:
/// cost = 0.5 * (1 - iou) + 0.5 * bhattacharyya. Without an image (or for
/// tracks with no appearance yet) the overlap term carries the full weight.
inline CostMatrix build_cost(const std::vector<Track>& tracks,
                             const std::vector<Detection>& detections,
                             const std::optional<ImageRGB>& image) {
  CostMatrix costs(static_cast<int>(tracks.size()), static_cast<int>(detections.size()));

  std::vector<std::optional<AppearanceHistogram>> det_hists(detections.size());
  if (image) {
    for (std::size_t d = 0; d < detections.size(); ++d) {
      det_hists[d] = hs_histogram(*image, detections[d].bbox);
    }
  }

  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double overlap = iou(tracks[t].predicted_box, detections[d].bbox);
      double cost;
      if (det_hists[d] && tracks[t].has_appearance) {
        const double dist =
            bhattacharyya(tracks[t].appearance.histogram, *det_hists[d]);
        cost = 0.5 * (1.0 - overlap) + 0.5 * dist;
      } else {
        cost = 1.0 - overlap;
      }
      costs.at(static_cast<int>(t), static_cast<int>(d)) = cost;
    }
  }
  return costs;
}

struct LifecycleResult {
  std::vector<Track> terminated;
  std::vector<int> born_detections;  // detection indices that start new tracks
};

/// Bookkeeping half of the association step: matched tracks reset their miss
/// counter and append the detection, unmatched tracks take a strike and are
/// terminated on the second consecutive miss, unmatched detections are handed
/// back for birth.
inline LifecycleResult lifecycle_step(std::vector<Track>& tracks,
                                      const Assignment& assignment,
                                      const std::vector<Detection>& detections,
                                      int frame_index) {
  LifecycleResult result;

  for (Track& t : tracks) t.matched_this_frame = false;
  for (const auto& [ti, di] : assignment.pairs) {
    Track& t = tracks[ti];
    t.matched_this_frame = true;
    t.miss_count = 0;
    t.last_box = detections[di].bbox;
    t.last_score = detections[di].score;
    t.history.emplace_back(frame_index, detections[di].bbox);
  }
  for (const int ti : assignment.unmatched_tracks) {
    tracks[ti].miss_count += 1;
  }

  std::vector<Track> survivors;
  survivors.reserve(tracks.size());
  for (Track& t : tracks) {
    if (t.miss_count >= 2) {
      result.terminated.push_back(std::move(t));
    } else {
      survivors.push_back(std::move(t));
    }
  }
  tracks.swap(survivors);

  result.born_detections = assignment.unmatched_detections;
  return result;
}

}  // namespace vatrack
