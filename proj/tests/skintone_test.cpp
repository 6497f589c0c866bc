#include "lesionfair/skintone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace lesionfair {
namespace {

// Textbook statement of the trim rule: sort, median, population sigma,
// keep |v - median| <= sigma, average what is kept.
double brute_force_trim(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sigma = std::sqrt(ss / n);
  double sum = 0.0;
  int kept = 0;
  for (double x : v)
    if (std::fabs(x - median) <= sigma) {
      sum += x;
      ++kept;
    }
  return sum / kept;
}

TEST(PixelIta, Examples) {
  EXPECT_NEAR(pixel_ita({70.0, 0.0, 20.0}), 45.0, 1e-12);
  EXPECT_EQ(pixel_ita({50.0, 0.0, 14.0}), 0.0);
  EXPECT_NEAR(pixel_ita({30.0, 0.0, 20.0}), -45.0, 1e-12);
}

TEST(PixelIta, ZeroB) {
  EXPECT_EQ(pixel_ita({70.0, 5.0, 0.0}), 90.0);
  EXPECT_EQ(pixel_ita({30.0, 5.0, 0.0}), -90.0);
  EXPECT_EQ(pixel_ita({50.0, 5.0, 0.0}), 0.0);
}

TEST(PixelIta, ClampedForNegativeB) {
  // atan2 returns beyond +-90 when b < 0; the angle is pinned to the range.
  EXPECT_EQ(pixel_ita({70.0, 0.0, -20.0}), 90.0);
  EXPECT_EQ(pixel_ita({30.0, 0.0, -20.0}), -90.0);
}

TEST(AggregateIta, TwoValuePopulation) {
  std::vector<double> v(100, 40.0);
  std::fill(v.begin() + 50, v.end(), 44.0);
  const ImageIta r = aggregate_ita(v);
  EXPECT_DOUBLE_EQ(r.ita_degrees, 42.0);
  EXPECT_EQ(r.n_pixels_used, 100u);
  EXPECT_DOUBLE_EQ(brute_force_trim(v), 42.0);
}

TEST(AggregateIta, OutliersAreTrimmed) {
  std::vector<double> v{10.0, 11.0, 12.0, 11.0, 10.5, 11.5, -80.0};
  const ImageIta r = aggregate_ita(v);
  EXPECT_NEAR(r.ita_degrees, brute_force_trim(v), 1e-12);
  EXPECT_EQ(r.n_pixels_used, 6u);
}

TEST(AggregateIta, MatchesBruteForceOracle) {
  testing::Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.uniform_int(1, 60);
    std::vector<double> v(n);
    for (double& x : v) x = -90.0 + 180.0 * rng.uniform01();
    ASSERT_NEAR(aggregate_ita(v).ita_degrees, brute_force_trim(v), 1e-9);
  }
}

TEST(AggregateIta, EmptyThrows) {
  try {
    aggregate_ita({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSkinPixels);
  }
}

TEST(ImageIta, ConstantLabFieldsHitAnalyticValues) {
  const struct {
    double l, b, expected;
  } cases[] = {{70.0, 20.0, 45.0}, {50.0, 14.0, 0.0}, {30.0, 20.0, -45.0}};
  for (const auto& c : cases) {
    const std::vector<Lab> field(400, Lab{c.l, 3.0, c.b});
    const ImageIta r = image_ita(field);
    EXPECT_NEAR(r.ita_degrees, c.expected, 1e-9);
    EXPECT_EQ(r.n_pixels_used, 400u);
  }
}

TEST(ImageIta, ConstantImageEqualsPixelItaExactly) {
  testing::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Rgb c{static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
    const RgbImage img = testing::uniform_rgb(7, 5, c);
    const ImageIta r = image_ita(img);
    ASSERT_EQ(r.ita_degrees, pixel_ita(rgb_to_lab(c)));
    ASSERT_EQ(r.n_pixels_used, 35u);
  }
}

TEST(ImageIta, MaskSelectsSkinPixels) {
  RgbImage img = testing::uniform_rgb(4, 4, {230, 180, 150});
  LabelMask mask(4, 4, 1);
  for (int x = 0; x < 4; ++x) {
    set_pixel(img, x, 0, {40, 10, 10});
    mask.at(x, 0) = 2;
  }
  const ImageIta r = image_ita(img, &mask);
  EXPECT_EQ(r.n_pixels_used, 12u);
  EXPECT_EQ(r.ita_degrees, pixel_ita(rgb_to_lab({230, 180, 150})));
}

TEST(ImageIta, MaskErrors) {
  const RgbImage img = testing::uniform_rgb(4, 4, {1, 2, 3});
  const LabelMask no_skin(4, 4, 2);
  try {
    image_ita(img, &no_skin);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSkinPixels);
  }
  const LabelMask wrong(3, 4, 1);
  try {
    image_ita(img, &wrong);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(Categorize, Examples) {
  const ItaBins bins;
  ItaCategory c = categorize(60.0, bins);
  EXPECT_EQ(c.category, "very_light");
  EXPECT_EQ(c.group, SkinGroup::kLight);
  c = categorize(25.0, bins);
  EXPECT_EQ(c.category, "tan1");
  EXPECT_EQ(c.group, SkinGroup::kDark);
  c = categorize(-45.0, bins);
  EXPECT_EQ(c.category, "dark");
  EXPECT_EQ(c.group, SkinGroup::kDark);
}

TEST(Categorize, BoundariesAreUpperInclusive) {
  const ItaBins bins;
  EXPECT_EQ(categorize(55.0, bins).category, "light");
  EXPECT_EQ(categorize(41.0, bins).category, "intermediate");
  EXPECT_EQ(categorize(28.0, bins).category, "tan1");
  EXPECT_EQ(categorize(19.0, bins).category, "tan2");
  EXPECT_EQ(categorize(10.0, bins).category, "dark");
  EXPECT_EQ(categorize(28.0, bins).group, SkinGroup::kDark);
  EXPECT_EQ(categorize(28.0001, bins).group, SkinGroup::kLight);
}

TEST(Categorize, PartitionAndMonotoneSweep) {
  const ItaBins bins;
  std::size_t prev_rank = 0;
  for (int k = 900; k >= -900; --k) {
    const double ita = k / 10.0;
    const ItaCategory c = categorize(ita, bins);
    const auto it = std::find(bins.categories.begin(), bins.categories.end(), c.category);
    ASSERT_NE(it, bins.categories.end());
    const auto rank = static_cast<std::size_t>(it - bins.categories.begin());
    // Decreasing ITA never yields a lighter category.
    ASSERT_GE(rank, prev_rank) << ita;
    prev_rank = rank;
    const bool ds = std::find(bins.ds_categories.begin(), bins.ds_categories.end(),
                              c.category) != bins.ds_categories.end();
    ASSERT_EQ(c.group == SkinGroup::kDark, ds);
  }
  EXPECT_EQ(prev_rank, bins.categories.size() - 1);
}

TEST(ItaBins, Validation) {
  ItaBins bins;
  EXPECT_NO_THROW(bins.validate());
  bins.lower_bounds = {55.0, 60.0, 28.0, 19.0, 10.0};
  EXPECT_THROW(bins.validate(), Error);
  bins = ItaBins{};
  bins.lower_bounds.pop_back();
  EXPECT_THROW(bins.validate(), Error);
  bins = ItaBins{};
  bins.ds_categories = {"purple"};
  EXPECT_THROW(bins.validate(), Error);
}

TEST(Assess, FillsAllFields) {
  const RgbImage img = testing::uniform_rgb(3, 3, {230, 180, 150});
  const ItaAssessment a = assess("s1", img, ItaBins{});
  EXPECT_EQ(a.sample_id, "s1");
  EXPECT_EQ(a.n_pixels_used, 9u);
  EXPECT_EQ(a.category, categorize(a.ita_degrees, ItaBins{}).category);
}

TEST(SkinGroup, Names) {
  EXPECT_EQ(group_name(SkinGroup::kLight), "ls");
  EXPECT_EQ(group_name(SkinGroup::kDark), "ds");
  EXPECT_EQ(parse_group("ds"), SkinGroup::kDark);
  EXPECT_FALSE(parse_group("dark").has_value());
}

}  // namespace
}  // namespace lesionfair
