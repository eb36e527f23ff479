#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "errors.hpp"

namespace vatrack {

/// Every tunable of the tracking pipeline. Defaults are the values the rest
/// of the library was validated with; any key can be overridden from a
/// line-oriented `key = value` file.
struct TrackerConfig {
  int particles = 100;
  double survival = 0.95;
  double lambda_iou = 4.0;

  // Particle scoring blend during prediction.
  double weight_iou = 0.4;
  double weight_appearance = 0.3;
  double weight_attention = 0.3;

  // Multi-peak birth spread, as fractions of box diagonal / dimension.
  double birth_sigma_pos = 0.1;
  double birth_sigma_size = 0.05;

  // Directional resampling quotas and step = max(1, step_scale * speed).
  double quota_dominant = 0.5;
  double quota_secondary = 0.2;
  double quota_other = 0.15;
  double step_scale = 0.25;

  std::uint64_t seed = 0;

  // Attention binarization and the occupancy rule.
  double tau_bin = 0.4;
  double occupancy_min = 0.3;
  bool refine_enabled = true;

  // Association.
  double assignment_gate = 0.8;
  double appearance_alpha = 0.3;

  // Constant-velocity Kalman noise.
  double kalman_sigma_pos = 1.0;
  double kalman_sigma_vel = 0.1;
  double kalman_sigma_meas = 2.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace detail

inline TrackerConfig parse_config(std::istream& in, TrackerConfig base = {}) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw MalformedRow("expected key = value", line_number);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      if (key == "particles") base.particles = std::stoi(value);
      else if (key == "survival") base.survival = std::stod(value);
      else if (key == "lambda_iou") base.lambda_iou = std::stod(value);
      else if (key == "weight_iou") base.weight_iou = std::stod(value);
      else if (key == "weight_appearance") base.weight_appearance = std::stod(value);
      else if (key == "weight_attention") base.weight_attention = std::stod(value);
      else if (key == "birth_sigma_pos") base.birth_sigma_pos = std::stod(value);
      else if (key == "birth_sigma_size") base.birth_sigma_size = std::stod(value);
      else if (key == "quota_dominant") base.quota_dominant = std::stod(value);
      else if (key == "quota_secondary") base.quota_secondary = std::stod(value);
      else if (key == "quota_other") base.quota_other = std::stod(value);
      else if (key == "step_scale") base.step_scale = std::stod(value);
      else if (key == "seed") base.seed = std::stoull(value);
      else if (key == "tau_bin") base.tau_bin = std::stod(value);
      else if (key == "occupancy_min") base.occupancy_min = std::stod(value);
      else if (key == "refine_enabled") base.refine_enabled = std::stoi(value) != 0;
      else if (key == "assignment_gate") base.assignment_gate = std::stod(value);
      else if (key == "appearance_alpha") base.appearance_alpha = std::stod(value);
      else if (key == "kalman_sigma_pos") base.kalman_sigma_pos = std::stod(value);
      else if (key == "kalman_sigma_vel") base.kalman_sigma_vel = std::stod(value);
      else if (key == "kalman_sigma_meas") base.kalman_sigma_meas = std::stod(value);
      else throw MalformedRow("unknown config key '" + key + "'", line_number);
    } catch (const MalformedRow&) {
      throw;
    } catch (const std::exception&) {
      throw MalformedRow("bad value for '" + key + "'", line_number);
    }
  }
  return base;
}

inline TrackerConfig load_config(const std::string& path, TrackerConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw MissingPath("cannot open config file: " + path);
  return parse_config(in, base);
}

}  // namespace vatrack
