#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "association.hpp"
#include "config.hpp"
#include "track.hpp"
#include "types.hpp"

namespace vatrack {

/// Mean attention value over the pixels a box covers; 0 when the box misses
/// the grid entirely.
inline double mean_attention(const AttentionGrid& m, const BBox& box) {
  const PixelSpan span = pixel_span(box, m.width, m.height);
  if (span.empty()) return 0.0;
  double sum = 0.0;
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) sum += m.at(y, x);
  }
  return sum / static_cast<double>(span.count());
}

enum class RefineKind { Keep, Corrected, Reject };

struct RefineOutcome {
  RefineKind kind = RefineKind::Keep;
  BBox corrected;  // set when kind == Corrected
};

/// Occupancy rule over a binarized attention map: the fraction of covered
/// pixels with attention >= tau_bin. At least `occupancy_min` keeps the
/// prediction (boundary inclusive), zero rejects it, anything in between
/// snaps the box to the attention evidence inside a 1.5x search window with
/// the size clamped to +-20% of the prediction.
inline RefineOutcome attention_refine(const BBox& predicted, const AttentionGrid& m,
                                      double tau_bin, double occupancy_min = 0.3) {
  if (m.empty()) throw DimensionMismatch("attention grid is empty");
  const PixelSpan span = pixel_span(predicted, m.width, m.height);
  long long active = 0;
  for (int y = span.y0; y < span.y1; ++y) {
    for (int x = span.x0; x < span.x1; ++x) {
      if (m.at(y, x) >= tau_bin) ++active;
    }
  }
  const long long total = span.count();
  const double occupancy =
      total > 0 ? static_cast<double>(active) / static_cast<double>(total) : 0.0;

  if (occupancy >= occupancy_min) return {RefineKind::Keep, predicted};
  if (active == 0) return {RefineKind::Reject, predicted};

  const PixelSpan window = pixel_span(predicted.scaled(1.5), m.width, m.height);
  int min_x = window.x1, max_x = window.x0 - 1;
  int min_y = window.y1, max_y = window.y0 - 1;
  for (int y = window.y0; y < window.y1; ++y) {
    for (int x = window.x0; x < window.x1; ++x) {
      if (m.at(y, x) >= tau_bin) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  BBox tight(min_x, min_y, max_x + 1.0, max_y + 1.0);
  const double w = std::clamp(tight.width(), 0.8 * predicted.width(), 1.2 * predicted.width());
  const double h =
      std::clamp(tight.height(), 0.8 * predicted.height(), 1.2 * predicted.height());
  return {RefineKind::Corrected, BBox::from_cxcywh(tight.cx(), tight.cy(), w, h)};
}

/// Moves each particle by the Kalman-predicted velocity, rescores it with the
/// configured IoU / appearance / attention blend and returns the box of the
/// heaviest particle (ties to the lower index). Blend weights of terms that
/// cannot be computed (no image, no attention map) redistribute to the rest;
/// the set's total weight mass is preserved.
inline BBox predict_particles(Track& track, const std::optional<AttentionGrid>& attention,
                              const std::optional<ImageRGB>& image,
                              const TrackerConfig& cfg) {
  const double vx = track.kalman.mean(4);
  const double vy = track.kalman.mean(5);
  const double vw = track.kalman.mean(6);
  const double vh = track.kalman.mean(7);

  const bool use_appearance = image.has_value() && track.has_appearance;
  const bool use_attention = attention.has_value() && !attention->empty();
  double w_iou = cfg.weight_iou;
  double w_app = use_appearance ? cfg.weight_appearance : 0.0;
  double w_att = use_attention ? cfg.weight_attention : 0.0;
  const double w_sum = w_iou + w_app + w_att;
  w_iou /= w_sum;
  w_app /= w_sum;
  w_att /= w_sum;

  const double prior_mass = track.particles.total_weight();
  std::size_t best = 0;
  double best_weight = -1.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < track.particles.particles.size(); ++i) {
    Particle& p = track.particles.particles[i];
    const double pw = std::max(1e-3, p.state.width() + vw);
    const double ph = std::max(1e-3, p.state.height() + vh);
    p.state = BBox::from_cxcywh(p.state.cx() + vx, p.state.cy() + vy, pw, ph);

    double score = w_iou * iou(p.state, track.last_box);
    if (use_appearance) {
      const PixelSpan span = pixel_span(p.state, image->width, image->height);
      if (!span.empty()) {
        const double dist =
            bhattacharyya(track.appearance.histogram, hs_histogram(*image, p.state));
        score += w_app * (1.0 - dist);
      }
    }
    if (use_attention) {
      score += w_att * mean_attention(*attention, p.state);
    }
    p.weight *= score;
    mass += p.weight;
    if (p.weight > best_weight) {
      best_weight = p.weight;
      best = i;
    }
  }
  if (mass > 0.0) {
    const double scale = prior_mass / mass;
    for (Particle& p : track.particles.particles) p.weight *= scale;
  } else {
    // No particle scored: fall back to the prior weights.
    double prior_best = -1.0;
    for (std::size_t i = 0; i < track.particles.particles.size(); ++i) {
      if (track.particles.particles[i].weight > prior_best) {
        prior_best = track.particles.particles[i].weight;
        best = i;
      }
    }
  }
  return track.particles.particles[best].state;
}

/// Summary counters exposed for diagnostics and tests.
struct TrackerStats {
  std::uint64_t terminated = 0;
  std::uint64_t born = 0;
  std::uint64_t corrections = 0;
  std::uint64_t rejections = 0;
};

/// Tracking-by-detection driver: one instance per sequence, all randomness
/// from the seeded generator it owns.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(cfg), rng_(cfg.seed) {}

  const TrackerConfig& config() const { return cfg_; }
  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerStats& stats() const { return stats_; }

  double cardinality() const {
    std::vector<ParticleSet> sets;
    sets.reserve(tracks_.size());
    for (const Track& t : tracks_) sets.push_back(t.particles);
    return phd_cardinality(sets);
  }

  /// Runs the full per-frame pipeline and returns one record per live track.
  std::vector<TrackRecord> step(const FrameObservation& obs) {
    const int frame = obs.frame_index;

    // Predict + refine.
    for (Track& t : tracks_) {
      t.kalman = kalman_predict(t.kalman, kalman_params());
      BBox predicted = predict_particles(t, obs.attention, obs.image, cfg_);
      if (cfg_.refine_enabled && obs.attention && !obs.attention->empty()) {
        const RefineOutcome outcome =
            attention_refine(predicted, *obs.attention, cfg_.tau_bin, cfg_.occupancy_min);
        if (outcome.kind == RefineKind::Corrected) {
          recenter(t, predicted, outcome.corrected);
          predicted = outcome.corrected;
          ++stats_.corrections;
        } else if (outcome.kind == RefineKind::Reject) {
          predicted = t.kalman.box();
          ++stats_.rejections;
        }
      }
      t.predicted_box = predicted;
    }

    // Associate and update.
    const Assignment assignment =
        hungarian(build_cost(tracks_, obs.detections, obs.image), cfg_.assignment_gate);
    for (const auto& [ti, di] : assignment.pairs) {
      Track& t = tracks_[ti];
      const Detection& det = obs.detections[di];
      update_with_measurement(t.particles, det.bbox, cfg_.lambda_iou);
      t.kalman = kalman_correct(t.kalman, det.bbox, kalman_params());
      if (obs.image) {
        const AppearanceHistogram fresh = hs_histogram(*obs.image, det.bbox);
        t.appearance = t.has_appearance
                           ? temporal_update(t.appearance, fresh, cfg_.appearance_alpha)
                           : TemporalHistogram::from(fresh);
        t.has_appearance = true;
      }
    }
    for (const int ti : assignment.unmatched_tracks) {
      update_missed(tracks_[ti].particles, cfg_.survival);
    }

    LifecycleResult lifecycle =
        lifecycle_step(tracks_, assignment, obs.detections, frame);
    stats_.terminated += lifecycle.terminated.size();

    // Resample the measurement-updated tracks; coasting tracks keep their
    // decayed mass.
    for (Track& t : tracks_) {
      if (!t.matched_this_frame) continue;
      const MotionEstimate motion =
          estimate_motion(t.kalman.mean(4), t.kalman.mean(5));
      t.particles = residual_resample(
          t.particles, motion, cfg_.particles,
          ResampleQuotas{cfg_.quota_dominant, cfg_.quota_secondary, cfg_.quota_other},
          cfg_.step_scale);
    }

    // Birth from unassigned detections.
    for (const int di : lifecycle.born_detections) {
      tracks_.push_back(make_track(obs.detections[di], obs.image, frame));
      ++stats_.born;
    }

    // Emit: matched and newborn tracks report the detection box, coasting
    // tracks report the refined prediction.
    std::vector<TrackRecord> records;
    records.reserve(tracks_.size());
    for (Track& t : tracks_) {
      TrackRecord r;
      r.frame = frame;
      r.track_id = t.id;
      r.class_label = t.class_label;
      if (t.matched_this_frame) {
        r.bbox = t.last_box;
        r.score = t.last_score;
      } else {
        r.bbox = t.predicted_box;
        t.last_score *= cfg_.survival;
        r.score = t.last_score;
        t.last_box = t.predicted_box;
        t.history.emplace_back(frame, t.predicted_box);
      }
      records.push_back(r);
    }
    return records;
  }

 private:
  KalmanParams kalman_params() const {
    return KalmanParams{cfg_.kalman_sigma_pos, cfg_.kalman_sigma_vel,
                        cfg_.kalman_sigma_meas};
  }

  Track make_track(const Detection& det, const std::optional<ImageRGB>& image,
                   int frame) {
    Track t;
    t.id = next_id_++;
    t.class_label = det.class_label;
    t.particles = birth(
        det, BirthParams{cfg_.particles, cfg_.birth_sigma_pos, cfg_.birth_sigma_size},
        rng_);
    t.particles.owner_track = t.id;
    t.kalman = kalman_init(det.bbox, kalman_params());
    if (image) {
      const PixelSpan span = pixel_span(det.bbox, image->width, image->height);
      if (!span.empty()) {
        t.appearance = TemporalHistogram::from(hs_histogram(*image, det.bbox));
        t.has_appearance = true;
      }
    }
    t.last_box = det.bbox;
    t.predicted_box = det.bbox;
    t.last_score = det.score;
    t.matched_this_frame = true;
    t.history.emplace_back(frame, det.bbox);
    return t;
  }

  /// Re-anchors the particle cloud and the Kalman position on the corrected
  /// box so the next frame redistributes around it.
  void recenter(Track& t, const BBox& predicted, const BBox& corrected) {
    const double dx = corrected.cx() - predicted.cx();
    const double dy = corrected.cy() - predicted.cy();
    for (Particle& p : t.particles.particles) p.state = p.state.translated(dx, dy);
    t.kalman.mean(0) = corrected.cx();
    t.kalman.mean(1) = corrected.cy();
    t.kalman.mean(2) = corrected.width();
    t.kalman.mean(3) = corrected.height();
  }

  TrackerConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Track> tracks_;
  std::uint64_t next_id_ = 1;
  TrackerStats stats_;
};

/// Convenience wrapper: runs a tracker over a whole observation sequence.
inline std::vector<TrackRecord> run_sequence(Tracker& tracker,
                                             const std::vector<FrameObservation>& frames) {
  std::vector<TrackRecord> all;
  for (const FrameObservation& obs : frames) {
    std::vector<TrackRecord> records = tracker.step(obs);
    all.insert(all.end(), records.begin(), records.end());
  }
  return all;
}

}  // namespace vatrack
