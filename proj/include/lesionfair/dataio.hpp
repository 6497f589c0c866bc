#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lesionfair/image.hpp"
#include "lesionfair/metrics.hpp"
#include "lesionfair/skintone.hpp"

namespace lesionfair {

enum class Split { kTrain = 0, kVal = 1, kTest = 2 };
inline constexpr int kNumSplits = 3;

std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view text);

inline constexpr std::string_view kManifestHeader =
    "sample_id,image_path,mask_path,label,split,group";
inline constexpr std::string_view kPredictionsHeader =
    "sample_id,true_label,pred_label,p_NO,p_EM,p_HZ,p_TC,group";

struct ManifestRecord {
  std::string sample_id;
  // Resolved against the manifest's directory.
  std::filesystem::path image_path;
  std::optional<std::filesystem::path> mask_path;
  DiseaseClass label = DiseaseClass::kNO;
  Split split = Split::kTrain;
  std::optional<SkinGroup> group;
};

// RFC 4180-style rows (quoted fields, doubled quotes). Throws kIo.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);
std::string csv_escape(std::string_view field);

// Throws kIo, kInvalidField (with the 1-based line number) or kDuplicateId.
// Referenced files are not checked here.
std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path);

struct PredictionSet {
  std::vector<LabeledPrediction> predictions;
  std::vector<std::string> warnings;
};

// An empty pred_label cell means argmax(scores). A pred_label that disagrees
// with argmax is kept and reported as a warning. Throws kIo, kInvalidField,
// kBadDistribution or kDuplicateId.
PredictionSet load_predictions(const std::filesystem::path& path);

// Any CSV whose header has "sample_id" and "group" columns (the skintone
// output qualifies). Throws kIo or kInvalidField.
std::map<std::string, SkinGroup> load_groups(const std::filesystem::path& path);

// Class id -> color, indexed by id.
struct PaletteConfig {
  std::array<Rgb, kNumMaskClasses> colors{{{0, 0, 0}, {255, 255, 0}, {0, 0, 255}}};

  // Throws kInvalidConfig when two classes share a color.
  void validate() const;
};

// Throws kUnknownPaletteColor naming the first off-palette pixel.
LabelMask decode_mask(const RgbImage& image, const PaletteConfig& palette);
RgbImage render_mask(const LabelMask& mask, const PaletteConfig& palette);

// Image codecs. PNG is the lossless output format; JPEG is accepted on read.
// All throw kIo.
RgbImage read_rgb(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const GrayImage& image);
RgbImage decode_rgb(const std::vector<std::uint8_t>& bytes);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png(const std::filesystem::path& path, const GrayImage& image);

// Per split: counts[label][group], with per-group totals.
struct SplitSummary {
  std::array<std::array<std::size_t, 2>, kNumDiseaseClasses> counts{};
  std::array<std::size_t, 2> totals{};
};

struct DatasetSummary {
  std::array<SplitSummary, kNumSplits> splits{};
};

// Group comes from the record, else from `groups`. Throws kMissingGroup
// listing every unresolved sample id.
DatasetSummary summarize(const std::vector<ManifestRecord>& records,
                         const std::map<std::string, SkinGroup>& groups = {});

// split,NO_ls,NO_ds,EM_ls,EM_ds,HZ_ls,HZ_ds,TC_ls,TC_ds,total_ls,total_ds
std::string summary_csv(const DatasetSummary& summary);

}  // namespace lesionfair
