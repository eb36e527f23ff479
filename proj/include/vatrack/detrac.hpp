#pragma once

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "types.hpp"

namespace vatrack {

/// Parses a DETRAC sequence annotation (<sequence><frame num=..><target_list>
/// <target id=..><box left=.. top=.. width=.. height=..>) into per-frame
/// ground-truth records. `stride` keeps every stride-th frame and renumbers
/// the survivors contiguously from 0.
inline std::vector<TrackRecord> parse_detrac_xml(const std::string& path,
                                                 int stride = 1) {
  if (stride < 1) throw UnsupportedFormat("stride must be >= 1");
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_xml(path, tree);
  } catch (const std::exception& e) {
    throw UnsupportedFormat("cannot parse DETRAC XML: " + std::string(e.what()));
  }
  const auto sequence = tree.get_child_optional("sequence");
  if (!sequence) throw UnsupportedFormat("DETRAC XML has no <sequence> root");

  std::vector<TrackRecord> records;
  for (const auto& [name, frame_node] : *sequence) {
    if (name != "frame") continue;
    const int num = frame_node.get<int>("<xmlattr>.num", -1);
    if (num < 1) throw UnsupportedFormat("DETRAC frame without a num attribute");
    if ((num - 1) % stride != 0) continue;
    const int frame = (num - 1) / stride;

    const auto targets = frame_node.get_child_optional("target_list");
    if (!targets) continue;
    for (const auto& [tname, target] : *targets) {
      if (tname != "target") continue;
      TrackRecord r;
      r.frame = frame;
      r.track_id = target.get<std::uint64_t>("<xmlattr>.id", 0);
      const auto box = target.get_child_optional("box");
      if (!box) continue;
      const double left = box->get<double>("<xmlattr>.left");
      const double top = box->get<double>("<xmlattr>.top");
      const double width = box->get<double>("<xmlattr>.width");
      const double height = box->get<double>("<xmlattr>.height");
      r.bbox = BBox(left, top, left + width, top + height);
      r.class_label = ClassLabel::Car;
      r.score = 1.0;
      records.push_back(r);
    }
  }
  return records;
}

/// Converts a DETRAC annotation into the internal gt/detection CSV pair.
/// Returns the number of records written.
inline std::size_t convert_detrac(const std::string& xml_path,
                                  const std::string& out_dir, int stride = 1) {
  const std::vector<TrackRecord> records = parse_detrac_xml(xml_path, stride);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_tracks(records, (fs::path(out_dir) / "ground_truth.csv").string());

  int max_frame = -1;
  for (const TrackRecord& r : records) max_frame = std::max(max_frame, r.frame);
  std::vector<FrameObservation> observations(static_cast<std::size_t>(max_frame + 1));
  for (int f = 0; f <= max_frame; ++f) observations[f].frame_index = f;
  for (const TrackRecord& r : records) {
    observations[r.frame].detections.push_back(
        Detection{r.frame, r.class_label, r.bbox, 1.0});
  }
  write_detections(observations, (fs::path(out_dir) / "detections.csv").string());
  return records.size();
}

}  // namespace vatrack
