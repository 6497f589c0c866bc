#include "lesionfair/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace lesionfair {
namespace {

constexpr std::array<std::string_view, kNumSplits> kSplitNames{"train", "val", "test"};

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

std::string join_header(const std::vector<std::string>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += row[i];
  }
  return out;
}

void expect_header(const std::vector<std::vector<std::string>>& rows,
                   std::string_view expected, const std::filesystem::path& path) {
  if (rows.empty() || join_header(rows.front()) != expected) {
    throw Error(ErrorCode::kInvalidField,
                path.string() + ": header must be '" + std::string(expected) + "'");
  }
}

double parse_probability(const std::string& cell, std::size_t line, std::string_view column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidField, line_ref(line) + ": " + std::string(column) +
                                              " is not a number: '" + cell + "'");
  }
  return value;
}

cv::Mat to_mat(const RgbImage& image) {
  cv::Mat bgr(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = bgr.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) {
      row[3 * x + 0] = image.at(x, y, 2);
      row[3 * x + 1] = image.at(x, y, 1);
      row[3 * x + 2] = image.at(x, y, 0);
    }
  }
  return bgr;
}

RgbImage from_mat(const cv::Mat& bgr) {
  RgbImage image(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<std::uint8_t>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      image.at(x, y, 0) = row[3 * x + 2];
      image.at(x, y, 1) = row[3 * x + 1];
      image.at(x, y, 2) = row[3 * x + 0];
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_mat(const cv::Mat& mat) {
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", mat, bytes)) throw Error(ErrorCode::kIo, "png encoding failed");
  return bytes;
}

}  // namespace

std::string_view split_name(Split split) { return kSplitNames[static_cast<int>(split)]; }

std::optional<Split> parse_split(std::string_view text) {
  for (int i = 0; i < kNumSplits; ++i) {
    if (text == kSplitNames[i]) return static_cast<Split>(i);
  }
  return std::nullopt;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  std::size_t i = 0;
  // Skip a UTF-8 byte order mark.
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_content = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      row_has_content = false;
    } else {
      field += c;
      row_has_content = true;
    }
  }
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  expect_header(rows, kManifestHeader, path);
  const std::filesystem::path base = path.parent_path();

  std::vector<ManifestRecord> records;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != 6) {
      throw Error(ErrorCode::kInvalidField,
                  line_ref(line) + ": expected 6 fields, got " + std::to_string(row.size()));
    }
    ManifestRecord rec;
    rec.sample_id = row[0];
    if (rec.sample_id.empty()) {
      throw Error(ErrorCode::kInvalidField, line_ref(line) + ": empty sample_id");
    }
    if (!seen.insert(rec.sample_id).second) {
      throw Error(ErrorCode::kDuplicateId, line_ref(line) + ": " + rec.sample_id);
    }
    if (row[1].empty()) {
      throw Error(ErrorCode::kInvalidField, line_ref(line) + ": empty image_path");
    }
    rec.image_path = base / row[1];
    if (!row[2].empty()) rec.mask_path = base / row[2];
    const auto label = parse_class(row[3]);
    if (!label) {
      throw Error(ErrorCode::kInvalidField, line_ref(line) + ": unknown label '" + row[3] + "'");
    }
    rec.label = *label;
    const auto split = parse_split(row[4]);
    if (!split) {
      throw Error(ErrorCode::kInvalidField, line_ref(line) + ": unknown split '" + row[4] + "'");
    }
    rec.split = *split;
    if (!row[5].empty()) {
      const auto group = parse_group(row[5]);
      if (!group) {
        throw Error(ErrorCode::kInvalidField,
                    line_ref(line) + ": unknown group '" + row[5] + "'");
      }
      rec.group = *group;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  expect_header(rows, kPredictionsHeader, path);
  static constexpr std::array<std::string_view, 4> kProbColumns{"p_NO", "p_EM", "p_HZ", "p_TC"};

  PredictionSet out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != 8) {
      throw Error(ErrorCode::kInvalidField,
                  line_ref(line) + ": expected 8 fields, got " + std::to_string(row.size()));
    }
    LabeledPrediction p;
    p.sample_id = row[0];
    if (p.sample_id.empty()) {
      throw Error(ErrorCode::kInvalidField, line_ref(line) + ": empty sample_id");
    }
    if (!seen.insert(p.sample_id).second) {
      throw Error(ErrorCode::kDuplicateId, line_ref(line) + ": " + p.sample_id);
    }
    const auto truth = parse_class(row[1]);
    if (!truth) {
      throw Error(ErrorCode::kInvalidField,
                  line_ref(line) + ": unknown true_label '" + row[1] + "'");
    }
    p.true_label = *truth;

    double sum = 0.0;
    for (int c = 0; c < kNumDiseaseClasses; ++c) {
      const double v = parse_probability(row[3 + c], line, kProbColumns[c]);
      if (v < 0.0 || v > 1.0) {
        throw Error(ErrorCode::kBadDistribution,
                    line_ref(line) + ": " + std::string(kProbColumns[c]) + " outside [0, 1]");
      }
      p.scores[c] = v;
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::kBadDistribution,
                  line_ref(line) + ": probabilities sum to " + std::to_string(sum));
    }
    // First maximum wins ties.
    const auto argmax = static_cast<DiseaseClass>(
        std::max_element(p.scores.begin(), p.scores.end()) - p.scores.begin());
    if (row[2].empty()) {
      p.predicted_label = argmax;
    } else {
      const auto pred = parse_class(row[2]);
      if (!pred) {
        throw Error(ErrorCode::kInvalidField,
                    line_ref(line) + ": unknown pred_label '" + row[2] + "'");
      }
      p.predicted_label = *pred;
      if (*pred != argmax) {
        out.warnings.push_back(line_ref(line) + ": pred_label " + row[2] +
                               " differs from argmax " + std::string(class_name(argmax)) +
                               " for " + p.sample_id);
      }
    }
    const auto group = parse_group(row[7]);
    if (!group) {
      throw Error(ErrorCode::kInvalidField, line_ref(line) + ": unknown group '" + row[7] + "'");
    }
    p.group = *group;
    out.predictions.push_back(std::move(p));
  }
  return out;
}

std::map<std::string, SkinGroup> load_groups(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty()) throw Error(ErrorCode::kInvalidField, path.string() + ": missing header");
  const auto& header = rows.front();
  const auto id_col = std::find(header.begin(), header.end(), "sample_id") - header.begin();
  const auto group_col = std::find(header.begin(), header.end(), "group") - header.begin();
  if (id_col == static_cast<long>(header.size()) ||
      group_col == static_cast<long>(header.size())) {
    throw Error(ErrorCode::kInvalidField,
                path.string() + ": header needs sample_id and group columns");
  }
  std::map<std::string, SkinGroup> groups;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kInvalidField, line_ref(r + 1) + ": wrong field count");
    }
    const auto group = parse_group(row[group_col]);
    if (!group) {
      throw Error(ErrorCode::kInvalidField,
                  line_ref(r + 1) + ": unknown group '" + row[group_col] + "'");
    }
    if (!groups.emplace(row[id_col], *group).second) {
      throw Error(ErrorCode::kDuplicateId, line_ref(r + 1) + ": " + row[id_col]);
    }
  }
  return groups;
}

void PaletteConfig::validate() const {
  for (int i = 0; i < kNumMaskClasses; ++i) {
    for (int j = i + 1; j < kNumMaskClasses; ++j) {
      if (colors[i] == colors[j]) {
        throw Error(ErrorCode::kInvalidConfig, "palette maps classes " + std::to_string(i) +
                                                   " and " + std::to_string(j) +
                                                   " to the same color");
      }
    }
  }
}

LabelMask decode_mask(const RgbImage& image, const PaletteConfig& palette) {
  LabelMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = pixel(image, x, y);
      const auto it = std::find(palette.colors.begin(), palette.colors.end(), c);
      if (it == palette.colors.end()) {
        throw Error(ErrorCode::kUnknownPaletteColor,
                    "(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," +
                        std::to_string(c.b) + ") at x=" + std::to_string(x) +
                        " y=" + std::to_string(y));
      }
      mask.at(x, y) = static_cast<std::uint8_t>(it - palette.colors.begin());
    }
  }
  return mask;
}

RgbImage render_mask(const LabelMask& mask, const PaletteConfig& palette) {
  RgbImage out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const std::uint8_t id = mask.at(x, y);
      if (id >= kNumMaskClasses) {
        throw Error(ErrorCode::kInvalidLabel, "label " + std::to_string(id));
      }
      set_pixel(out, x, y, palette.colors[id]);
    }
  }
  return out;
}

RgbImage read_rgb(const std::filesystem::path& path) {
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error(ErrorCode::kIo, "cannot decode image " + path.string());
  return from_mat(bgr);
}

RgbImage decode_rgb(const std::vector<std::uint8_t>& bytes) {
  const cv::Mat bgr = cv::imdecode(bytes, cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error(ErrorCode::kIo, "cannot decode image bytes");
  return from_mat(bgr);
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) { return encode_mat(to_mat(image)); }

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
  cv::Mat gray(image.height(), image.width(), CV_8UC1);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = gray.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) row[x] = image.at(x, y);
  }
  return encode_mat(gray);
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  write_bytes(path, encode_png(image));
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
  write_bytes(path, encode_png(image));
}

DatasetSummary summarize(const std::vector<ManifestRecord>& records,
                         const std::map<std::string, SkinGroup>& groups) {
  DatasetSummary summary;
  std::vector<std::string> missing;
  for (const ManifestRecord& rec : records) {
    std::optional<SkinGroup> group = rec.group;
    if (!group) {
      if (const auto it = groups.find(rec.sample_id); it != groups.end()) group = it->second;
    }
    if (!group) {
      missing.push_back(rec.sample_id);
      continue;
    }
    SplitSummary& s = summary.splits[static_cast<int>(rec.split)];
    const int g = *group == SkinGroup::kLight ? 0 : 1;
    ++s.counts[static_cast<int>(rec.label)][g];
    ++s.totals[g];
  }
  if (!missing.empty()) {
    std::string ids;
    for (const std::string& id : missing) ids += (ids.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::kMissingGroup, ids);
  }
  return summary;
}

std::string summary_csv(const DatasetSummary& summary) {
  std::ostringstream os;
  os << "split";
  for (int c = 0; c < kNumDiseaseClasses; ++c) {
    const std::string_view name = class_name(static_cast<DiseaseClass>(c));
    os << ',' << name << "_ls," << name << "_ds";
  }
  os << ",total_ls,total_ds\n";
  for (int s = 0; s < kNumSplits; ++s) {
    const SplitSummary& row = summary.splits[s];
    os << kSplitNames[s];
    for (const auto& cell : row.counts) os << ',' << cell[0] << ',' << cell[1];
    os << ',' << row.totals[0] << ',' << row.totals[1] << '\n';
  }
  return os.str();
}

}  // namespace lesionfair
