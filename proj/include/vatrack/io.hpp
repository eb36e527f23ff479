#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "rpfilter.hpp"
#include "types.hpp"

namespace vatrack {

namespace detail {

inline void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32_le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void put_f32_le(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32_le(out, bits);
}

inline float get_f32_le(const std::uint8_t* p) {
  const std::uint32_t bits = get_u32_le(p);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingPath("cannot open file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MissingPath("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

/// Reads one PNM token, skipping whitespace and '#' comments.
inline std::string pnm_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos])) {
    token.push_back(static_cast<char>(bytes[pos++]));
  }
  return token;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

inline PnmHeader parse_pnm_header(const std::vector<std::uint8_t>& bytes,
                                  const std::string& path) {
  std::size_t pos = 0;
  PnmHeader h;
  h.magic = pnm_token(bytes, pos);
  try {
    h.width = std::stoi(pnm_token(bytes, pos));
    h.height = std::stoi(pnm_token(bytes, pos));
    h.maxval = std::stoi(pnm_token(bytes, pos));
  } catch (const std::exception&) {
    throw UnsupportedFormat("bad PNM header in " + path);
  }
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 255) {
    throw UnsupportedFormat("unsupported PNM geometry in " + path);
  }
  h.data_offset = pos + 1;  // single whitespace after maxval
  return h;
}

}  // namespace detail

// --- PGM / PPM ---------------------------------------------------------

inline AttentionGrid load_pgm(const std::string& path,
                              AttentionKind kind = AttentionKind::Objectness) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const detail::PnmHeader h = detail::parse_pnm_header(bytes, path);
  if (h.magic != "P5") throw UnsupportedFormat("expected binary PGM (P5): " + path);
  const std::size_t count = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() < h.data_offset + count) {
    throw UnsupportedFormat("truncated PGM payload: " + path);
  }
  AttentionGrid grid;
  grid.width = h.width;
  grid.height = h.height;
  grid.kind = kind;
  grid.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.values[i] = static_cast<float>(bytes[h.data_offset + i]) / 255.0f;
  }
  return grid;
}

inline void save_pgm(const AttentionGrid& grid, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  const std::string header = "P5\n" + std::to_string(grid.width) + " " +
                             std::to_string(grid.height) + "\n255\n";
  bytes.insert(bytes.end(), header.begin(), header.end());
  for (const float v : grid.values) {
    const float clamped = std::min(1.0f, std::max(0.0f, v));
    bytes.push_back(static_cast<std::uint8_t>(std::lround(clamped * 255.0f)));
  }
  detail::write_file(path, bytes);
}

inline ImageRGB load_ppm(const std::string& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const detail::PnmHeader h = detail::parse_pnm_header(bytes, path);
  if (h.magic != "P6") throw UnsupportedFormat("expected binary PPM (P6): " + path);
  const std::size_t count = static_cast<std::size_t>(h.width) * h.height * 3;
  if (bytes.size() < h.data_offset + count) {
    throw UnsupportedFormat("truncated PPM payload: " + path);
  }
  ImageRGB img;
  img.width = h.width;
  img.height = h.height;
  img.pixels.assign(bytes.begin() + h.data_offset, bytes.begin() + h.data_offset + count);
  return img;
}

inline void save_ppm(const ImageRGB& img, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  bytes.insert(bytes.end(), header.begin(), header.end());
  bytes.insert(bytes.end(), img.pixels.begin(), img.pixels.end());
  detail::write_file(path, bytes);
}

// --- PNG (via libpng) --------------------------------------------------

namespace detail {

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;

  explicit PngReader(const std::string& path) {
    fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw MissingPath("cannot open file: " + path);
    std::uint8_t sig[8];
    if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
      std::fclose(fp);
      throw UnsupportedFormat("not a PNG file: " + path);
    }
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
      if (png) png_destroy_read_struct(&png, &info, nullptr);
      std::fclose(fp);
      throw UnsupportedFormat("libpng initialization failed");
    }
    png_init_io(png, fp);
    png_set_sig_bytes(png, 8);
  }

  ~PngReader() {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    if (fp) std::fclose(fp);
  }

  /// Reads with transforms normalizing to 8-bit; `rgb` selects 3-channel
  /// output, otherwise grayscale.
  std::vector<std::uint8_t> read(bool rgb, int& width, int& height) {
    if (setjmp(png_jmpbuf(png))) throw UnsupportedFormat("libpng failed to decode");
    png_read_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (rgb) {
      if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
      }
    } else {
      if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
          color == PNG_COLOR_TYPE_PALETTE) {
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
      }
    }
    png_read_update_info(png, info);

    const int channels = rgb ? 3 : 1;
    std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
      rows[y] = data.data() + static_cast<std::size_t>(y) * width * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    return data;
  }
};

}  // namespace detail

inline AttentionGrid load_png_gray(const std::string& path,
                                   AttentionKind kind = AttentionKind::Objectness) {
  detail::PngReader reader(path);
  int w = 0, h = 0;
  const std::vector<std::uint8_t> data = reader.read(false, w, h);
  AttentionGrid grid;
  grid.width = w;
  grid.height = h;
  grid.kind = kind;
  grid.values.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    grid.values[i] = static_cast<float>(data[i]) / 255.0f;
  }
  return grid;
}

inline ImageRGB load_png_rgb(const std::string& path) {
  detail::PngReader reader(path);
  ImageRGB img;
  img.pixels = reader.read(true, img.width, img.height);
  return img;
}

// --- RPT binary container ----------------------------------------------
//
// Header: magic "RPT1", then H, W, A as 32-bit little-endian unsigned.
// Payload: H*W*A*5 little-endian 32-bit floats, location-major, anchor-minor.
// Attention grids reuse the container with A = 1 and a single float per
// location.

inline void save_proposal_tensor(const ProposalTensor& tensor, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 + tensor.entries.size() * 4);
  const char magic[4] = {'R', 'P', 'T', '1'};
  bytes.insert(bytes.end(), magic, magic + 4);
  detail::put_u32_le(bytes, static_cast<std::uint32_t>(tensor.h));
  detail::put_u32_le(bytes, static_cast<std::uint32_t>(tensor.w));
  detail::put_u32_le(bytes, static_cast<std::uint32_t>(tensor.a));
  for (const float v : tensor.entries) detail::put_f32_le(bytes, v);
  detail::write_file(path, bytes);
}

namespace detail {

struct RptHeader {
  int h = 0, w = 0, a = 0;
};

inline RptHeader parse_rpt_header(const std::vector<std::uint8_t>& bytes,
                                  const std::string& path) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "RPT1", 4) != 0) {
    throw UnsupportedFormat("missing RPT1 magic: " + path);
  }
  RptHeader h;
  h.h = static_cast<int>(get_u32_le(bytes.data() + 4));
  h.w = static_cast<int>(get_u32_le(bytes.data() + 8));
  h.a = static_cast<int>(get_u32_le(bytes.data() + 12));
  if (h.h <= 0 || h.w <= 0 || h.a <= 0) {
    throw UnsupportedFormat("bad RPT1 dimensions: " + path);
  }
  return h;
}

}  // namespace detail

inline ProposalTensor load_proposal_tensor(const std::string& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const detail::RptHeader h = detail::parse_rpt_header(bytes, path);
  ProposalTensor tensor;
  tensor.h = h.h;
  tensor.w = h.w;
  tensor.a = h.a;
  const std::size_t count = tensor.entry_count() * ProposalTensor::kDepth;
  if (bytes.size() < 16 + count * 4) {
    throw UnsupportedFormat("truncated RPT1 payload: " + path);
  }
  tensor.entries.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    tensor.entries[i] = detail::get_f32_le(bytes.data() + 16 + i * 4);
  }
  return tensor;
}

inline void save_attention_rpt(const AttentionGrid& grid, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  const char magic[4] = {'R', 'P', 'T', '1'};
  bytes.insert(bytes.end(), magic, magic + 4);
  detail::put_u32_le(bytes, static_cast<std::uint32_t>(grid.height));
  detail::put_u32_le(bytes, static_cast<std::uint32_t>(grid.width));
  detail::put_u32_le(bytes, 1);
  for (const float v : grid.values) detail::put_f32_le(bytes, v);
  detail::write_file(path, bytes);
}

inline AttentionGrid load_attention_rpt(const std::string& path,
                                        AttentionKind kind = AttentionKind::Objectness) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  const detail::RptHeader h = detail::parse_rpt_header(bytes, path);
  if (h.a != 1) throw UnsupportedFormat("attention container requires A = 1: " + path);
  const std::size_t count = static_cast<std::size_t>(h.h) * h.w;
  if (bytes.size() < 16 + count * 4) {
    throw UnsupportedFormat("truncated RPT1 payload: " + path);
  }
  AttentionGrid grid;
  grid.width = h.w;
  grid.height = h.h;
  grid.kind = kind;
  grid.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.values[i] = detail::get_f32_le(bytes.data() + 16 + i * 4);
  }
  return grid;
}

/// Loads an attention raster by extension: .pgm, .png or the RPT container.
inline AttentionGrid load_attention(const std::string& path,
                                    AttentionKind kind = AttentionKind::Objectness) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".pgm") return load_pgm(path, kind);
  if (ext == ".png") return load_png_gray(path, kind);
  if (ext == ".rpt" || ext == ".bin") return load_attention_rpt(path, kind);
  throw UnsupportedFormat("unsupported attention format: " + path);
}

inline ImageRGB load_image(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".ppm") return load_ppm(path);
  if (ext == ".png") return load_png_rgb(path);
  throw UnsupportedFormat("unsupported image format: " + path);
}

// --- KITTI tracking labels ---------------------------------------------

struct KittiLabel {
  int frame = 0;
  int track_id = 0;
  std::string type;
  ClassLabel label = ClassLabel::Other;
  bool dont_care = false;
  double truncated = 0.0;
  int occluded = 0;
  double alpha = 0.0;
  BBox bbox;
};

/// Parses whitespace-delimited KITTI tracking rows:
/// frame track_id type truncated occluded alpha left top right bottom ...
/// Trailing 3D fields are ignored; "DontCare" rows are kept but flagged.
inline std::vector<KittiLabel> parse_kitti_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingPath("cannot open KITTI label file: " + path);
  std::vector<KittiLabel> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::trim(line).empty()) continue;
    std::istringstream row(line);
    KittiLabel l;
    if (!(row >> l.frame >> l.track_id >> l.type >> l.truncated >> l.occluded >>
          l.alpha >> l.bbox.left >> l.bbox.top >> l.bbox.right >> l.bbox.bottom)) {
      throw MalformedRow("bad KITTI tracking row", line_number);
    }
    l.dont_care = l.type == "DontCare";
    l.label = class_label_from_string(l.type);
    if (!l.dont_care && !l.bbox.valid()) {
      throw MalformedRow("invalid box in KITTI row", line_number);
    }
    labels.push_back(std::move(l));
  }
  return labels;
}

// --- Detection and track CSV -------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  return fields;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Detection CSV rows: frame, class, left, top, right, bottom, score.
/// Rows may arrive in any order; missing frames become empty observations so
/// the result is contiguous from frame 0.
inline std::vector<FrameObservation> parse_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingPath("cannot open detection file: " + path);
  std::map<int, std::vector<Detection>> by_frame;
  int max_frame = -1;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::vector<std::string> fields = detail::split_csv(trimmed);
    if (fields.size() != 7) throw MalformedRow("expected 7 fields", line_number);
    Detection det;
    try {
      det.frame_index = std::stoi(fields[0]);
      det.class_label = class_label_from_string(fields[1]);
      det.bbox = BBox(std::stod(fields[2]), std::stod(fields[3]), std::stod(fields[4]),
                      std::stod(fields[5]));
      det.score = std::stod(fields[6]);
    } catch (const std::exception&) {
      throw MalformedRow("unparsable detection row", line_number);
    }
    if (det.frame_index < 0) throw MalformedRow("negative frame index", line_number);
    if (det.score < 0.0 || det.score > 1.0) {
      throw MalformedRow("score outside [0, 1]", line_number);
    }
    if (!det.bbox.valid()) throw MalformedRow("invalid detection box", line_number);
    by_frame[det.frame_index].push_back(det);
    max_frame = std::max(max_frame, det.frame_index);
  }
  std::vector<FrameObservation> observations(static_cast<std::size_t>(max_frame + 1));
  for (int f = 0; f <= max_frame; ++f) {
    observations[f].frame_index = f;
    auto it = by_frame.find(f);
    if (it != by_frame.end()) observations[f].detections = std::move(it->second);
  }
  return observations;
}

inline void write_detections(const std::vector<FrameObservation>& observations,
                             const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw MissingPath("cannot open file for writing: " + path);
  for (const FrameObservation& obs : observations) {
    for (const Detection& d : obs.detections) {
      out << obs.frame_index << ',' << to_string(d.class_label) << ','
          << detail::format_double(d.bbox.left) << ','
          << detail::format_double(d.bbox.top) << ','
          << detail::format_double(d.bbox.right) << ','
          << detail::format_double(d.bbox.bottom) << ','
          << detail::format_double(d.score) << '\n';
    }
  }
}

/// Track CSV rows: frame, track_id, class, left, top, right, bottom, score.
inline void write_tracks(const std::vector<TrackRecord>& records,
                         const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw MissingPath("cannot open file for writing: " + path);
  for (const TrackRecord& r : records) {
    out << r.frame << ',' << r.track_id << ',' << to_string(r.class_label) << ','
        << detail::format_double(r.bbox.left) << ','
        << detail::format_double(r.bbox.top) << ','
        << detail::format_double(r.bbox.right) << ','
        << detail::format_double(r.bbox.bottom) << ','
        << detail::format_double(r.score) << '\n';
  }
}

inline std::vector<TrackRecord> parse_tracks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingPath("cannot open track file: " + path);
  std::vector<TrackRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::vector<std::string> fields = detail::split_csv(trimmed);
    if (fields.size() != 8) throw MalformedRow("expected 8 fields", line_number);
    TrackRecord r;
    try {
      r.frame = std::stoi(fields[0]);
      r.track_id = std::stoull(fields[1]);
      r.class_label = class_label_from_string(fields[2]);
      r.bbox = BBox(std::stod(fields[3]), std::stod(fields[4]), std::stod(fields[5]),
                    std::stod(fields[6]));
      r.score = std::stod(fields[7]);
    } catch (const std::exception&) {
      throw MalformedRow("unparsable track row", line_number);
    }
    if (r.frame < 0) throw MalformedRow("negative frame index", line_number);
    if (!r.bbox.valid()) throw MalformedRow("invalid track box", line_number);
    records.push_back(r);
  }
  return records;
}

// --- Sequence manifest ---------------------------------------------------

/// Key = value description of one sequence; relative paths resolve against
/// the manifest's directory.
struct SequenceManifest {
  std::string id;
  int frame_count = 0;
  std::string image_dir;         // optional
  std::string detection_file;
  std::string attention_dir;     // optional
  std::string ground_truth_file; // optional
};

inline SequenceManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingPath("cannot open manifest: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  SequenceManifest m;
  std::string line;
  std::size_t line_number = 0;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };
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
    if (key == "id") m.id = value;
    else if (key == "frames") m.frame_count = std::stoi(value);
    else if (key == "images") m.image_dir = resolve(value);
    else if (key == "detections") m.detection_file = resolve(value);
    else if (key == "attention") m.attention_dir = resolve(value);
    else if (key == "ground_truth") m.ground_truth_file = resolve(value);
    else throw MalformedRow("unknown manifest key '" + key + "'", line_number);
  }
  if (m.detection_file.empty()) {
    throw MalformedRow("manifest is missing the detections key", 0);
  }
  for (const std::string& p :
       {m.detection_file, m.image_dir, m.attention_dir, m.ground_truth_file}) {
    if (!p.empty() && !std::filesystem::exists(p)) {
      throw MissingPath("manifest references a missing path: " + p);
    }
  }
  return m;
}

inline void save_manifest(const SequenceManifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw MissingPath("cannot open file for writing: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto relativize = [&](const std::string& p) {
    if (p.empty()) return p;
    return std::filesystem::relative(p, base).string();
  };
  out << "id = " << m.id << "\n";
  out << "frames = " << m.frame_count << "\n";
  out << "detections = " << relativize(m.detection_file) << "\n";
  if (!m.image_dir.empty()) out << "images = " << relativize(m.image_dir) << "\n";
  if (!m.attention_dir.empty()) {
    out << "attention = " << relativize(m.attention_dir) << "\n";
  }
  if (!m.ground_truth_file.empty()) {
    out << "ground_truth = " << relativize(m.ground_truth_file) << "\n";
  }
}

/// Path of the per-frame file "<dir>/<frame as %06d>.<ext>", first extension
/// that exists; nullopt when none do.
inline std::optional<std::string> frame_file(const std::string& dir, int frame,
                                             const std::vector<std::string>& extensions) {
  char name[32];
  std::snprintf(name, sizeof(name), "%06d", frame);
  for (const std::string& ext : extensions) {
    const std::filesystem::path p = std::filesystem::path(dir) / (std::string(name) + ext);
    if (std::filesystem::exists(p)) return p.string();
  }
  return std::nullopt;
}

/// Assembles the tracker input sequence a manifest describes.
inline std::vector<FrameObservation> load_sequence(
    const SequenceManifest& m,
    std::optional<AttentionKind> attention_kind = AttentionKind::Objectness) {
  std::vector<FrameObservation> observations = parse_detections(m.detection_file);
  if (m.frame_count > static_cast<int>(observations.size())) {
    const std::size_t old = observations.size();
    observations.resize(m.frame_count);
    for (std::size_t f = old; f < observations.size(); ++f) {
      observations[f].frame_index = static_cast<int>(f);
    }
  }
  for (FrameObservation& obs : observations) {
    if (!m.attention_dir.empty() && attention_kind) {
      const auto path = frame_file(m.attention_dir, obs.frame_index,
                                   {".pgm", ".png", ".rpt"});
      if (path) obs.attention = load_attention(*path, *attention_kind);
    }
    if (!m.image_dir.empty()) {
      const auto path = frame_file(m.image_dir, obs.frame_index, {".ppm", ".png"});
      if (path) obs.image = load_image(*path);
    }
  }
  return observations;
}

}  // namespace vatrack
