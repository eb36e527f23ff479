#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "box.hpp"
#include "errors.hpp"
#include "types.hpp"

namespace vatrack {

struct Particle {
  BBox state;
  double weight = 0.0;
};

/// Weighted sample approximation of one target's intensity. The weight mass
/// of the set is its contribution to the expected target count.
struct ParticleSet {
  std::vector<Particle> particles;
  std::uint64_t owner_track = 0;

  double total_weight() const {
    double s = 0.0;
    for (const Particle& p : particles) s += p.weight;
    return s;
  }
};

struct BirthParams {
  int count = 100;
  double sigma_pos_frac = 0.1;    // of the box diagonal
  double sigma_size_frac = 0.05;  // of each dimension
};

/// Spawns a particle set around a detection from a five-peak Gaussian
/// mixture: the box center plus half-size offsets along each axis. Weights
/// are drawn uniform and normalized to sum 1. A zero sigma collapses the
/// mixture so every particle equals the detection box.
inline ParticleSet birth(const Detection& det, const BirthParams& params,
                         std::mt19937_64& rng) {
  const double w = det.bbox.width();
  const double h = det.bbox.height();
  const double cx = det.bbox.cx();
  const double cy = det.bbox.cy();
  const double sigma_pos = params.sigma_pos_frac * det.bbox.diagonal();
  const double sigma_w = params.sigma_size_frac * w;
  const double sigma_h = params.sigma_size_frac * h;

  const double peaks[5][2] = {
      {0.0, 0.0}, {0.5 * w, 0.0}, {-0.5 * w, 0.0}, {0.0, 0.5 * h}, {0.0, -0.5 * h}};

  std::uniform_int_distribution<int> pick_peak(0, 4);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> unit_weight(
      std::numeric_limits<double>::min(), 1.0);

  ParticleSet set;
  set.particles.reserve(params.count);
  double mass = 0.0;
  for (int i = 0; i < params.count; ++i) {
    double px = cx, py = cy;
    if (sigma_pos > 0.0) {
      const int peak = pick_peak(rng);
      px += peaks[peak][0] + sigma_pos * unit(rng);
      py += peaks[peak][1] + sigma_pos * unit(rng);
    }
    double pw = w, ph = h;
    if (sigma_w > 0.0) pw = std::max(1e-3, w + sigma_w * unit(rng));
    if (sigma_h > 0.0) ph = std::max(1e-3, h + sigma_h * unit(rng));
    const double weight = unit_weight(rng);
    mass += weight;
    set.particles.push_back(Particle{BBox::from_cxcywh(px, py, pw, ph), weight});
  }
  for (Particle& p : set.particles) p.weight /= mass;
  return set;
}

/// Measurement update: weight_i <- weight_i * exp(-lambda * (1 - iou)),
/// renormalized to unit mass.
inline void update_with_measurement(ParticleSet& set, const BBox& z, double lambda_iou) {
  double mass = 0.0;
  for (Particle& p : set.particles) {
    p.weight *= std::exp(-lambda_iou * (1.0 - iou(p.state, z)));
    mass += p.weight;
  }
  if (mass <= 0.0) throw ZeroMass("particle mass vanished in measurement update");
  for (Particle& p : set.particles) p.weight /= mass;
}

/// Missed-detection update: mass decays by the survival probability and is
/// deliberately left unnormalized.
inline void update_missed(ParticleSet& set, double survival) {
  for (Particle& p : set.particles) p.weight *= survival;
}

/// PHD mass = expected target count.
inline double phd_cardinality(std::span<const ParticleSet> sets) {
  double total = 0.0;
  for (const ParticleSet& s : sets) total += s.total_weight();
  return total;
}

enum class Heading { North, South, East, West };

struct MotionEstimate {
  double dx = 0.0;
  double dy = 0.0;
  double speed = 0.0;
  Heading dominant = Heading::East;
  Heading secondary = Heading::South;
};

/// Classifies per-frame displacement into a dominant and secondary compass
/// heading (image convention: North is -y).
inline MotionEstimate estimate_motion(double dx, double dy) {
  MotionEstimate m;
  m.dx = dx;
  m.dy = dy;
  m.speed = std::hypot(dx, dy);
  if (std::abs(dx) >= std::abs(dy)) {
    m.dominant = dx >= 0.0 ? Heading::East : Heading::West;
    m.secondary = dy >= 0.0 ? Heading::South : Heading::North;
  } else {
    m.dominant = dy >= 0.0 ? Heading::South : Heading::North;
    m.secondary = dx >= 0.0 ? Heading::East : Heading::West;
  }
  return m;
}

struct ResampleQuotas {
  double dominant = 0.5;
  double secondary = 0.2;
  double other = 0.15;
};

namespace detail {

/// Largest-remainder apportionment of `total` slots to `shares` (ties by
/// lower index), so counts are deterministic and sum exactly to total.
inline std::vector<int> apportion(std::span<const double> shares, int total) {
  std::vector<int> counts(shares.size(), 0);
  std::vector<double> remainders(shares.size(), 0.0);
  int assigned = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double exact = shares[i] * total;
    counts[i] = static_cast<int>(std::floor(exact));
    remainders[i] = exact - counts[i];
    assigned += counts[i];
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < total; ++k) {
    counts[order[k % order.size()]] += 1;
    ++assigned;
  }
  return counts;
}

inline void displace(BBox& b, Heading heading, double step) {
  switch (heading) {
    case Heading::North: b = b.translated(0.0, -step); break;
    case Heading::South: b = b.translated(0.0, step); break;
    case Heading::East: b = b.translated(step, 0.0); break;
    case Heading::West: b = b.translated(-step, 0.0); break;
  }
}

}  // namespace detail

/// Residual resampling restoring the set to `n_out` particles: every particle
/// receives at least floor(n * w) offspring, the remainder goes to the
/// largest residuals. Offspring are then displaced one step toward North,
/// South, East or West, with the quota share leaning into the motion heading.
/// Output weights are uniform 1/n.
inline ParticleSet residual_resample(const ParticleSet& set, const MotionEstimate& motion,
                                     int n_out, const ResampleQuotas& quotas = {},
                                     double step_scale = 0.25) {
  const double mass = set.total_weight();
  if (!(mass > 0.0)) throw ZeroMass("cannot resample a zero-mass particle set");

  std::vector<double> shares(set.particles.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    shares[i] = set.particles[i].weight / mass;
  }
  const std::vector<int> offspring = detail::apportion(shares, n_out);

  const Heading all[4] = {Heading::North, Heading::South, Heading::East, Heading::West};
  Heading directions[4] = {motion.dominant, motion.secondary, Heading::North,
                           Heading::North};
  double dir_shares[4] = {quotas.dominant, quotas.secondary, quotas.other, quotas.other};
  {
    int slot = 2;
    for (const Heading h : all) {
      if (h != motion.dominant && h != motion.secondary && slot < 4) {
        directions[slot++] = h;
      }
    }
    if (motion.dominant == motion.secondary) {
      // Degenerate heading split: fold the secondary quota into the others.
      dir_shares[1] = 0.0;
      dir_shares[2] = quotas.secondary / 2.0 + quotas.other;
      dir_shares[3] = quotas.secondary / 2.0 + quotas.other;
    }
  }
  const std::vector<int> dir_counts =
      detail::apportion(std::span<const double>(dir_shares, 4), n_out);

  const double step = std::max(1.0, step_scale * motion.speed);

  ParticleSet out;
  out.owner_track = set.owner_track;
  out.particles.reserve(n_out);
  int dir_slot = 0;
  int remaining_in_slot = dir_counts[0];
  for (std::size_t i = 0; i < set.particles.size(); ++i) {
    for (int c = 0; c < offspring[i]; ++c) {
      while (remaining_in_slot == 0 && dir_slot < 3) {
        ++dir_slot;
        remaining_in_slot = dir_counts[dir_slot];
      }
      Particle p = set.particles[i];
      detail::displace(p.state, directions[dir_slot], step);
      p.weight = 1.0 / n_out;
      out.particles.push_back(p);
      if (remaining_in_slot > 0) --remaining_in_slot;
    }
  }
  return out;
}

}  // namespace vatrack
