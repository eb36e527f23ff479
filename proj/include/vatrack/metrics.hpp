#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "box.hpp"
#include "errors.hpp"
#include "hungarian.hpp"
#include "types.hpp"

namespace vatrack {

struct EvalBox {
  std::uint64_t id = 0;
  BBox box;
};

struct EvalFrame {
  std::vector<EvalBox> ground_truth;
  std::vector<EvalBox> hypotheses;
};

struct MotReport {
  double mota = 0.0;
  double motp = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double far = 0.0;  // false positives per frame, x100
  double mt = 0.0;   // percentages of ground-truth trajectories
  double pt = 0.0;
  double ml = 0.0;
  std::uint64_t id_switches = 0;
  std::uint64_t fragmentations = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t matches = 0;
  std::uint64_t gt_total = 0;
  int frames = 0;
};

struct FrameMatches {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // (gt_id, hyp_id)
  std::vector<double> pair_ious;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

/// CLEAR-MOT frame matching: matches from the previous frame persist while
/// their overlap stays at or above iou_min, the remainder is assigned by the
/// Hungarian algorithm on 1 - iou gated at iou_min.
inline FrameMatches match_frame(const EvalFrame& frame,
                                const std::map<std::uint64_t, std::uint64_t>& prev_matches,
                                double iou_min = 0.5) {
  FrameMatches out;
  const auto& gts = frame.ground_truth;
  const auto& hyps = frame.hypotheses;

  std::vector<char> gt_used(gts.size(), 0), hyp_used(hyps.size(), 0);

  // Persistent matches first.
  for (std::size_t g = 0; g < gts.size(); ++g) {
    const auto it = prev_matches.find(gts[g].id);
    if (it == prev_matches.end()) continue;
    for (std::size_t h = 0; h < hyps.size(); ++h) {
      if (hyp_used[h] || hyps[h].id != it->second) continue;
      const double overlap = iou(gts[g].box, hyps[h].box);
      if (overlap >= iou_min) {
        out.pairs.emplace_back(gts[g].id, hyps[h].id);
        out.pair_ious.push_back(overlap);
        gt_used[g] = 1;
        hyp_used[h] = 1;
      }
      break;
    }
  }

  // Hungarian over what is left.
  std::vector<std::size_t> free_gt, free_hyp;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_used[g]) free_gt.push_back(g);
  }
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    if (!hyp_used[h]) free_hyp.push_back(h);
  }
  if (!free_gt.empty() && !free_hyp.empty()) {
    CostMatrix costs(static_cast<int>(free_gt.size()), static_cast<int>(free_hyp.size()));
    for (std::size_t r = 0; r < free_gt.size(); ++r) {
      for (std::size_t c = 0; c < free_hyp.size(); ++c) {
        costs.at(static_cast<int>(r), static_cast<int>(c)) =
            1.0 - iou(gts[free_gt[r]].box, hyps[free_hyp[c]].box);
      }
    }
    const Assignment assignment = hungarian(costs, 1.0 - iou_min);
    for (const auto& [r, c] : assignment.pairs) {
      const std::size_t g = free_gt[r];
      const std::size_t h = free_hyp[c];
      out.pairs.emplace_back(gts[g].id, hyps[h].id);
      out.pair_ious.push_back(iou(gts[g].box, hyps[h].box));
      gt_used[g] = 1;
      hyp_used[h] = 1;
    }
  }

  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_used[g]) ++out.fn;
  }
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    if (!hyp_used[h]) ++out.fp;
  }
  return out;
}

/// Full CLEAR-MOT evaluation over an ordered frame sequence.
inline MotReport evaluate(const std::vector<EvalFrame>& frames, double iou_min = 0.5) {
  MotReport report;
  report.frames = static_cast<int>(frames.size());

  std::map<std::uint64_t, std::uint64_t> last_matched_id;  // gt -> last hyp id
  std::map<std::uint64_t, std::uint64_t> prev_matches;     // carried frame to frame
  struct Coverage {
    int present = 0;
    int matched = 0;
    bool was_matched = false;
    bool in_gap = false;
  };
  std::map<std::uint64_t, Coverage> coverage;
  double iou_sum = 0.0;

  for (const EvalFrame& frame : frames) {
    report.gt_total += frame.ground_truth.size();
    const FrameMatches matches = match_frame(frame, prev_matches, iou_min);
    report.fp += matches.fp;
    report.fn += matches.fn;
    report.matches += matches.pairs.size();
    for (const double v : matches.pair_ious) iou_sum += v;

    std::map<std::uint64_t, std::uint64_t> current;
    for (const auto& [gt_id, hyp_id] : matches.pairs) {
      current[gt_id] = hyp_id;
      const auto it = last_matched_id.find(gt_id);
      if (it != last_matched_id.end() && it->second != hyp_id) ++report.id_switches;
      last_matched_id[gt_id] = hyp_id;
    }

    for (const EvalBox& gt : frame.ground_truth) {
      Coverage& cov = coverage[gt.id];
      cov.present += 1;
      const bool matched_now = current.count(gt.id) > 0;
      if (matched_now) {
        if (cov.in_gap) {
          ++report.fragmentations;
          cov.in_gap = false;
        }
        cov.matched += 1;
        cov.was_matched = true;
      } else if (cov.was_matched) {
        cov.in_gap = true;
      }
    }
    prev_matches = std::move(current);
  }

  if (report.gt_total == 0) throw EmptyGroundTruth("no ground truth in any frame");

  const double gt_total = static_cast<double>(report.gt_total);
  report.mota =
      1.0 - static_cast<double>(report.fn + report.fp + report.id_switches) / gt_total;
  report.motp =
      report.matches > 0 ? iou_sum / static_cast<double>(report.matches) : 0.0;
  report.recall = static_cast<double>(report.matches) / gt_total;
  const std::uint64_t hyp_total = report.matches + report.fp;
  report.precision =
      hyp_total > 0 ? static_cast<double>(report.matches) / static_cast<double>(hyp_total)
                    : 0.0;
  report.f1 = (report.precision + report.recall) > 0.0
                  ? 2.0 * report.precision * report.recall /
                        (report.precision + report.recall)
                  : 0.0;
  report.far = report.frames > 0
                   ? static_cast<double>(report.fp) / report.frames * 100.0
                   : 0.0;

  int mt = 0, pt = 0, ml = 0;
  for (const auto& [id, cov] : coverage) {
    const double ratio = static_cast<double>(cov.matched) / cov.present;
    if (ratio >= 0.8) {
      ++mt;
    } else if (ratio <= 0.2) {
      ++ml;
    } else {
      ++pt;
    }
  }
  const double trajectories = static_cast<double>(coverage.size());
  report.mt = 100.0 * mt / trajectories;
  report.pt = 100.0 * pt / trajectories;
  report.ml = 100.0 * ml / trajectories;
  return report;
}

/// Builds per-frame evaluation input from flat record lists. Frames are the
/// union of frame indices present on either side.
inline std::vector<EvalFrame> eval_frames_from_records(
    const std::vector<TrackRecord>& ground_truth,
    const std::vector<TrackRecord>& hypotheses) {
  std::map<int, EvalFrame> by_frame;
  for (const TrackRecord& r : ground_truth) {
    by_frame[r.frame].ground_truth.push_back(EvalBox{r.track_id, r.bbox});
  }
  for (const TrackRecord& r : hypotheses) {
    by_frame[r.frame].hypotheses.push_back(EvalBox{r.track_id, r.bbox});
  }
  std::vector<EvalFrame> frames;
  frames.reserve(by_frame.size());
  for (auto& [frame, data] : by_frame) frames.push_back(std::move(data));
  return frames;
}

inline std::string format_report_kv(const MotReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "mota = " << r.mota << "\n"
      << "motp = " << r.motp << "\n"
      << "recall = " << r.recall << "\n"
      << "precision = " << r.precision << "\n"
      << "f1 = " << r.f1 << "\n"
      << "far = " << r.far << "\n"
      << "mt = " << r.mt << "\n"
      << "pt = " << r.pt << "\n"
      << "ml = " << r.ml << "\n"
      << "id_switches = " << r.id_switches << "\n"
      << "fragmentations = " << r.fragmentations << "\n"
      << "fp = " << r.fp << "\n"
      << "fn = " << r.fn << "\n"
      << "matches = " << r.matches << "\n"
      << "gt_total = " << r.gt_total << "\n"
      << "frames = " << r.frames << "\n";
  return out.str();
}

/// Table in the usual benchmark column order, ratio columns as percentages.
inline std::string format_report_table(const MotReport& r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%7s %7s %7s %7s %7s %7s %7s %7s %7s %6s %6s\n",
                "MOTA", "MOTP", "Rcll", "Prcn", "F1", "FAR", "MT", "PT", "ML", "IDs",
                "FM");
  out << line;
  std::snprintf(line, sizeof(line),
                "%7.2f %7.2f %7.2f %7.2f %7.2f %7.2f %7.2f %7.2f %7.2f %6llu %6llu\n",
                100.0 * r.mota, 100.0 * r.motp, 100.0 * r.recall, 100.0 * r.precision,
                100.0 * r.f1, r.far, r.mt, r.pt, r.ml,
                static_cast<unsigned long long>(r.id_switches),
                static_cast<unsigned long long>(r.fragmentations));
  out << line;
  return out.str();
}

}  // namespace vatrack
