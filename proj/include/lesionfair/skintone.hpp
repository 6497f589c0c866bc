#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lesionfair/color.hpp"
#include "lesionfair/image.hpp"

namespace lesionfair {

enum class SkinGroup { kLight, kDark };

// "ls" / "ds".
std::string_view group_name(SkinGroup group);
std::optional<SkinGroup> parse_group(std::string_view text);

// Ordered from lightest to darkest. A value falls in category i when it is
// above lower_bounds[i] and at most the bound of category i - 1; the last
// category has no lower bound and takes everything down to -90.
struct ItaBins {
  std::vector<std::string> categories{"very_light", "light", "intermediate",
                                      "tan1",       "tan2",  "dark"};
  std::vector<double> lower_bounds{55.0, 41.0, 28.0, 19.0, 10.0};
  std::vector<std::string> ds_categories{"tan2", "tan1", "dark"};

  // Throws kInvalidConfig.
  void validate() const;
};

struct ItaCategory {
  std::string category;
  SkinGroup group = SkinGroup::kLight;
};

struct ItaAssessment {
  std::string sample_id;
  double ita_degrees = 0.0;
  std::string category;
  SkinGroup group = SkinGroup::kLight;
  std::size_t n_pixels_used = 0;
};

// atan2(L - 50, b) in degrees, clamped to [-90, 90].
double pixel_ita(const Lab& lab);

struct ImageIta {
  double ita_degrees = 0.0;
  std::size_t n_pixels_used = 0;
};

// Robust aggregate of per-pixel ITA values: the mean of the values lying
// within one population standard deviation of the median. Throws
// kNoSkinPixels on empty input.
ImageIta aggregate_ita(std::vector<double> values);

// With a mask, only skin-class pixels (id 1) are used. Throws kShapeMismatch
// or kNoSkinPixels.
ImageIta image_ita(const RgbImage& image, const LabelMask* skin_mask = nullptr);
ImageIta image_ita(const std::vector<Lab>& pixels);

ItaCategory categorize(double ita_degrees, const ItaBins& bins);

ItaAssessment assess(std::string sample_id, const RgbImage& image,
                     const ItaBins& bins, const LabelMask* skin_mask = nullptr);

}  // namespace lesionfair
