#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "appearance.hpp"
#include "box.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "types.hpp"

namespace vatrack {

struct SynthTarget {
  int birth_frame = 0;
  int death_frame = 0;  // exclusive
  BBox initial_box;
  double vx = 0.0;  // px/frame
  double vy = 0.0;
};

enum class AttentionMode { Perfect, Dilated, None };

/// Desk-scale scenario description: constant-velocity targets, corrupted
/// detections and synthetic attention, fully determined by the seed.
struct ScenarioSpec {
  int frames = 0;
  int width = 640;
  int height = 480;
  std::vector<SynthTarget> targets;
  double miss_prob = 0.0;
  double clutter_rate = 0.0;   // expected false boxes per frame
  double noise_sigma = 0.0;    // detection perturbation, px
  double motion_jitter = 0.0;  // ground-truth position jitter, px
  int dropout_period = 0;      // if > 0, drop every detection on frames
                               // where (frame + 1) % period == 0
  AttentionMode attention = AttentionMode::Perfect;
  bool render_images = false;  // flat-color patch per target id
  std::uint64_t seed = 0;
};

struct Scenario {
  std::vector<TrackRecord> ground_truth;
  std::vector<FrameObservation> observations;  // detections + attention + images
};

namespace detail {

inline void paint_box(AttentionGrid& grid, const BBox& box) {
  const PixelSpan s = pixel_span(box, grid.width, grid.height);
  for (int y = s.y0; y < s.y1; ++y) {
    for (int x = s.x0; x < s.x1; ++x) grid.at(y, x) = 1.0f;
  }
}

inline void target_color(std::uint64_t id, std::uint8_t out[3]) {
  const double hue = static_cast<double>((id * 47) % 360);
  const double c = 0.8;
  const double x = c * (1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hue < 60) { r = c; g = x; }
  else if (hue < 120) { r = x; g = c; }
  else if (hue < 180) { g = c; b = x; }
  else if (hue < 240) { g = x; b = c; }
  else if (hue < 300) { r = x; b = c; }
  else { r = c; b = x; }
  out[0] = static_cast<std::uint8_t>(std::lround((r + 0.2) * 255.0 / 1.2));
  out[1] = static_cast<std::uint8_t>(std::lround((g + 0.2) * 255.0 / 1.2));
  out[2] = static_cast<std::uint8_t>(std::lround((b + 0.2) * 255.0 / 1.2));
}

}  // namespace detail

/// Generates ground truth, detections and attention for a scenario.
/// Randomness comes from one generator seeded by the spec, consumed in a
/// fixed frame-major order, so equal specs produce identical scenarios.
inline Scenario generate(const ScenarioSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> uniform01(0.0, 1.0);

  double mean_w = 32.0, mean_h = 32.0;
  if (!spec.targets.empty()) {
    mean_w = mean_h = 0.0;
    for (const SynthTarget& t : spec.targets) {
      mean_w += t.initial_box.width();
      mean_h += t.initial_box.height();
    }
    mean_w /= spec.targets.size();
    mean_h /= spec.targets.size();
  }

  Scenario out;
  out.observations.resize(spec.frames);
  for (int frame = 0; frame < spec.frames; ++frame) {
    FrameObservation& obs = out.observations[frame];
    obs.frame_index = frame;

    std::vector<BBox> live_boxes;
    std::vector<std::uint64_t> live_ids;
    const bool dropout =
        spec.dropout_period > 0 && (frame + 1) % spec.dropout_period == 0;

    for (std::size_t t = 0; t < spec.targets.size(); ++t) {
      const SynthTarget& target = spec.targets[t];
      if (frame < target.birth_frame || frame >= target.death_frame) continue;
      const double age = static_cast<double>(frame - target.birth_frame);
      BBox box = target.initial_box.translated(age * target.vx, age * target.vy);
      if (spec.motion_jitter > 0.0) {
        box = box.translated(spec.motion_jitter * unit(rng),
                             spec.motion_jitter * unit(rng));
      }
      const std::uint64_t gt_id = static_cast<std::uint64_t>(t) + 1;
      out.ground_truth.push_back(
          TrackRecord{frame, gt_id, ClassLabel::Car, box, 1.0});
      live_boxes.push_back(box);
      live_ids.push_back(gt_id);

      const bool missed =
          dropout || (spec.miss_prob > 0.0 && uniform01(rng) < spec.miss_prob);
      if (missed) continue;
      BBox det_box = box;
      if (spec.noise_sigma > 0.0) {
        const double dcx = spec.noise_sigma * unit(rng);
        const double dcy = spec.noise_sigma * unit(rng);
        const double dw = spec.noise_sigma * unit(rng);
        const double dh = spec.noise_sigma * unit(rng);
        det_box = BBox::from_cxcywh(box.cx() + dcx, box.cy() + dcy,
                                    std::max(2.0, box.width() + dw),
                                    std::max(2.0, box.height() + dh));
      }
      obs.detections.push_back(Detection{frame, ClassLabel::Car, det_box, 1.0});
    }

    if (spec.clutter_rate > 0.0) {
      std::poisson_distribution<int> clutter_count(spec.clutter_rate);
      const int n = clutter_count(rng);
      for (int c = 0; c < n; ++c) {
        const double w = mean_w * (0.5 + uniform01(rng));
        const double h = mean_h * (0.5 + uniform01(rng));
        const double cx = uniform01(rng) * spec.width;
        const double cy = uniform01(rng) * spec.height;
        const BBox box = BBox::from_cxcywh(cx, cy, w, h);
        const double score = 0.3 + 0.6 * uniform01(rng);
        obs.detections.push_back(Detection{frame, ClassLabel::Car, box, score});
      }
    }

    if (spec.attention != AttentionMode::None) {
      AttentionGrid grid = AttentionGrid::filled(spec.width, spec.height, 0.0f);
      for (const BBox& box : live_boxes) {
        detail::paint_box(grid, spec.attention == AttentionMode::Dilated
                                    ? box.scaled(1.1)
                                    : box);
      }
      obs.attention = std::move(grid);
    }

    if (spec.render_images) {
      ImageRGB img = ImageRGB::filled(spec.width, spec.height, 64, 64, 64);
      for (std::size_t i = 0; i < live_boxes.size(); ++i) {
        std::uint8_t color[3];
        detail::target_color(live_ids[i], color);
        img.fill_rect(live_boxes[i], color[0], color[1], color[2]);
      }
      obs.image = std::move(img);
    }
  }
  return out;
}

/// Scenario spec file: the usual key = value lines plus one
/// `target = birth death left top right bottom vx vy` line per target.
inline ScenarioSpec parse_scenario_spec(std::istream& in) {
  ScenarioSpec spec;
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
      if (key == "frames") spec.frames = std::stoi(value);
      else if (key == "width") spec.width = std::stoi(value);
      else if (key == "height") spec.height = std::stoi(value);
      else if (key == "miss_prob") spec.miss_prob = std::stod(value);
      else if (key == "clutter_rate") spec.clutter_rate = std::stod(value);
      else if (key == "noise_sigma") spec.noise_sigma = std::stod(value);
      else if (key == "motion_jitter") spec.motion_jitter = std::stod(value);
      else if (key == "dropout_period") spec.dropout_period = std::stoi(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "render_images") spec.render_images = std::stoi(value) != 0;
      else if (key == "attention") {
        if (value == "perfect") spec.attention = AttentionMode::Perfect;
        else if (value == "dilated") spec.attention = AttentionMode::Dilated;
        else if (value == "none") spec.attention = AttentionMode::None;
        else throw MalformedRow("unknown attention mode '" + value + "'", line_number);
      } else if (key == "target") {
        std::istringstream fields(value);
        SynthTarget t;
        if (!(fields >> t.birth_frame >> t.death_frame >> t.initial_box.left >>
              t.initial_box.top >> t.initial_box.right >> t.initial_box.bottom >>
              t.vx >> t.vy)) {
          throw MalformedRow("bad target line", line_number);
        }
        if (t.death_frame <= t.birth_frame || !t.initial_box.valid()) {
          throw MalformedRow("target must die after birth with a valid box",
                             line_number);
        }
        spec.targets.push_back(t);
      } else {
        throw MalformedRow("unknown scenario key '" + key + "'", line_number);
      }
    } catch (const MalformedRow&) {
      throw;
    } catch (const std::exception&) {
      throw MalformedRow("bad value for '" + key + "'", line_number);
    }
  }
  return spec;
}

inline ScenarioSpec load_scenario_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingPath("cannot open scenario spec: " + path);
  return parse_scenario_spec(in);
}

/// Writes a generated scenario in the ingest formats (detection CSV, gt CSV,
/// per-frame PGM attention, optional PPM imagery) plus a manifest, and
/// returns the manifest path.
inline std::string write_scenario(const Scenario& scenario, const ScenarioSpec& spec,
                                  const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path base(out_dir);

  write_detections(scenario.observations, (base / "detections.csv").string());
  write_tracks(scenario.ground_truth, (base / "ground_truth.csv").string());

  SequenceManifest manifest;
  manifest.id = "synth-" + std::to_string(spec.seed);
  manifest.frame_count = spec.frames;
  manifest.detection_file = (base / "detections.csv").string();
  manifest.ground_truth_file = (base / "ground_truth.csv").string();

  if (spec.attention != AttentionMode::None) {
    const fs::path att_dir = base / "attention";
    fs::create_directories(att_dir);
    for (const FrameObservation& obs : scenario.observations) {
      if (!obs.attention) continue;
      char name[32];
      std::snprintf(name, sizeof(name), "%06d.pgm", obs.frame_index);
      save_pgm(*obs.attention, (att_dir / name).string());
    }
    manifest.attention_dir = att_dir.string();
  }
  if (spec.render_images) {
    const fs::path img_dir = base / "images";
    fs::create_directories(img_dir);
    for (const FrameObservation& obs : scenario.observations) {
      if (!obs.image) continue;
      char name[32];
      std::snprintf(name, sizeof(name), "%06d.ppm", obs.frame_index);
      save_ppm(*obs.image, (img_dir / name).string());
    }
    manifest.image_dir = img_dir.string();
  }

  const std::string manifest_path = (base / "manifest.cfg").string();
  save_manifest(manifest, manifest_path);
  return manifest_path;
}

}  // namespace vatrack
