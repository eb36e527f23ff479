#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "box.hpp"
#include "errors.hpp"

namespace vatrack {

/// Constant-velocity linear-Gaussian model over (cx, cy, w, h) and their
/// per-frame velocities.
struct KalmanParams {
  double sigma_pos = 1.0;   // process noise on cx, cy, w, h (px/frame)
  double sigma_vel = 0.1;   // process noise on the velocities
  double sigma_meas = 2.0;  // measurement noise on cx, cy, w, h (px)
};

struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> cov = Eigen::Matrix<double, 8, 8>::Identity();

  double vx() const { return mean(4); }
  double vy() const { return mean(5); }

  BBox box() const {
    const double w = std::max(mean(2), 1e-3);
    const double h = std::max(mean(3), 1e-3);
    return BBox::from_cxcywh(mean(0), mean(1), w, h);
  }
};

namespace detail {

inline Eigen::Matrix<double, 8, 8> transition_matrix() {
  Eigen::Matrix<double, 8, 8> f = Eigen::Matrix<double, 8, 8>::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

inline Eigen::Matrix<double, 4, 8> measurement_matrix() {
  Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

inline void symmetrize(Eigen::Matrix<double, 8, 8>& m) {
  m = 0.5 * (m + m.transpose()).eval();
}

}  // namespace detail

inline KalmanState kalman_init(const BBox& z, const KalmanParams& params) {
  KalmanState s;
  s.mean << z.cx(), z.cy(), z.width(), z.height(), 0.0, 0.0, 0.0, 0.0;
  s.cov = Eigen::Matrix<double, 8, 8>::Zero();
  const double pos_var = std::max(params.sigma_meas * params.sigma_meas, 1e-6);
  for (int i = 0; i < 4; ++i) s.cov(i, i) = pos_var;
  for (int i = 4; i < 8; ++i) s.cov(i, i) = 1.0;
  return s;
}

inline KalmanState kalman_predict(const KalmanState& state, const KalmanParams& params) {
  const auto f = detail::transition_matrix();
  Eigen::Matrix<double, 8, 8> q = Eigen::Matrix<double, 8, 8>::Zero();
  for (int i = 0; i < 4; ++i) q(i, i) = params.sigma_pos * params.sigma_pos;
  for (int i = 4; i < 8; ++i) q(i, i) = params.sigma_vel * params.sigma_vel;

  KalmanState out;
  out.mean = f * state.mean;
  out.cov = f * state.cov * f.transpose() + q;
  detail::symmetrize(out.cov);
  return out;
}

/// Joseph-form measurement update against the box (cx, cy, w, h); the
/// posterior covariance stays symmetric PSD by construction.
inline KalmanState kalman_correct(const KalmanState& state, const BBox& z,
                                  const KalmanParams& params) {
  const auto h = detail::measurement_matrix();
  const Eigen::Matrix<double, 4, 4> r =
      params.sigma_meas * params.sigma_meas * Eigen::Matrix<double, 4, 4>::Identity();

  const Eigen::Matrix<double, 4, 4> innovation_cov =
      h * state.cov * h.transpose() + r;
  const Eigen::FullPivLU<Eigen::Matrix<double, 4, 4>> lu(innovation_cov);
  if (!lu.isInvertible()) {
    throw SingularInnovation("innovation covariance is numerically singular");
  }
  const Eigen::Matrix<double, 8, 4> gain = state.cov * h.transpose() * lu.inverse();

  Eigen::Matrix<double, 4, 1> meas;
  meas << z.cx(), z.cy(), z.width(), z.height();

  KalmanState out;
  out.mean = state.mean + gain * (meas - h * state.mean);
  const Eigen::Matrix<double, 8, 8> ikh =
      Eigen::Matrix<double, 8, 8>::Identity() - gain * h;
  out.cov = ikh * state.cov * ikh.transpose() + gain * r * gain.transpose();
  detail::symmetrize(out.cov);
  out.mean(2) = std::max(out.mean(2), 1e-3);
  out.mean(3) = std::max(out.mean(3), 1e-3);
  return out;
}

}  // namespace vatrack
