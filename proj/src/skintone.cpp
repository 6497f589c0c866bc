#include "lesionfair/skintone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lesionfair {
namespace {

constexpr std::uint8_t kSkinClass = 1;

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return lower + (upper - lower) / 2.0;
}

}  // namespace

std::string_view group_name(SkinGroup group) {
  return group == SkinGroup::kLight ? "ls" : "ds";
}

std::optional<SkinGroup> parse_group(std::string_view text) {
  if (text == "ls") return SkinGroup::kLight;
  if (text == "ds") return SkinGroup::kDark;
  return std::nullopt;
}

void ItaBins::validate() const {
  if (categories.empty() || lower_bounds.size() + 1 != categories.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "ita bins need one lower bound per category except the last");
  }
  for (std::size_t i = 0; i < lower_bounds.size(); ++i) {
    if (!(lower_bounds[i] >= -90.0 && lower_bounds[i] < 90.0)) {
      throw Error(ErrorCode::kInvalidConfig, "ita bounds must lie in [-90, 90)");
    }
    if (i > 0 && !(lower_bounds[i] < lower_bounds[i - 1])) {
      throw Error(ErrorCode::kInvalidConfig, "ita bounds must be strictly decreasing");
    }
  }
  for (const std::string& ds : ds_categories) {
    if (std::find(categories.begin(), categories.end(), ds) == categories.end()) {
      throw Error(ErrorCode::kInvalidConfig, "unknown ds category '" + ds + "'");
    }
  }
}

double pixel_ita(const Lab& lab) {
  const double deg = std::atan2(lab.l - 50.0, lab.b) * 180.0 / std::numbers::pi;
  return std::clamp(deg, -90.0, 90.0);
}

ImageIta aggregate_ita(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kNoSkinPixels, "");
  const double median = median_of(values);

  // Deviations from the median keep a constant field exactly constant.
  double mean_dev = 0.0;
  for (double v : values) mean_dev += v - median;
  mean_dev /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) {
    const double d = v - median - mean_dev;
    var += d * d;
  }
  const double sigma = std::sqrt(var / static_cast<double>(values.size()));

  double kept_dev = 0.0;
  std::size_t kept = 0;
  for (double v : values) {
    if (std::fabs(v - median) <= sigma) {
      kept_dev += v - median;
      ++kept;
    }
  }
  // At least one central value always lies within sigma of the median.
  if (kept == 0) return {median, 1};
  return {median + kept_dev / static_cast<double>(kept), kept};
}

ImageIta image_ita(const RgbImage& image, const LabelMask* skin_mask) {
  if (skin_mask && !image.same_shape(*skin_mask)) {
    throw Error(ErrorCode::kShapeMismatch, "skin mask and image differ in size");
  }
  std::vector<double> values;
  values.reserve(image.pixel_count());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (skin_mask && skin_mask->at(x, y) != kSkinClass) continue;
      values.push_back(pixel_ita(rgb_to_lab(pixel(image, x, y))));
    }
  }
  return aggregate_ita(std::move(values));
}

ImageIta image_ita(const std::vector<Lab>& pixels) {
  std::vector<double> values;
  values.reserve(pixels.size());
  for (const Lab& lab : pixels) values.push_back(pixel_ita(lab));
  return aggregate_ita(std::move(values));
}

ItaCategory categorize(double ita_degrees, const ItaBins& bins) {
  std::size_t idx = bins.lower_bounds.size();
  for (std::size_t i = 0; i < bins.lower_bounds.size(); ++i) {
    if (ita_degrees > bins.lower_bounds[i]) {
      idx = i;
      break;
    }
  }
  ItaCategory out;
  out.category = bins.categories[idx];
  const bool dark = std::find(bins.ds_categories.begin(), bins.ds_categories.end(),
                              out.category) != bins.ds_categories.end();
  out.group = dark ? SkinGroup::kDark : SkinGroup::kLight;
  return out;
}

ItaAssessment assess(std::string sample_id, const RgbImage& image,
                     const ItaBins& bins, const LabelMask* skin_mask) {
  const ImageIta ita = image_ita(image, skin_mask);
  ItaCategory cat = categorize(ita.ita_degrees, bins);
  return {std::move(sample_id), ita.ita_degrees, std::move(cat.category), cat.group,
          ita.n_pixels_used};
}

}  // namespace lesionfair
