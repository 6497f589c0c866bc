#include "lesionfair/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace lesionfair {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double determinant(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Linear sRGB -> XYZ built from the sRGB primaries and the D65 white, so that
// RGB (1, 1, 1) lands on the white point to within one ulp.
Mat3 build_srgb_to_xyz() {
  constexpr std::array<std::array<double, 2>, 3> kPrimaries{
      {{0.64, 0.33}, {0.30, 0.60}, {0.15, 0.06}}};
  Mat3 p{};
  for (int c = 0; c < 3; ++c) {
    const double x = kPrimaries[c][0];
    const double y = kPrimaries[c][1];
    p[0][c] = x / y;
    p[1][c] = 1.0;
    p[2][c] = (1.0 - x - y) / y;
  }
  // Cramer's rule for p * s = white.
  const std::array<double, 3> white{kWhiteX, kWhiteY, kWhiteZ};
  const double det = determinant(p);
  std::array<double, 3> s{};
  for (int c = 0; c < 3; ++c) {
    Mat3 q = p;
    for (int r = 0; r < 3; ++r) q[r][c] = white[r];
    s[c] = determinant(q) / det;
  }
  Mat3 m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = p[r][c] * s[c];
  }
  return m;
}

const Mat3& srgb_to_xyz() {
  static const Mat3 m = build_srgb_to_xyz();
  return m;
}

double linearize(std::uint8_t channel) {
  const double c = channel / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

bool hue_in_window(double h, const HueWindow& w) {
  if (w.low_deg <= w.high_deg) return h >= w.low_deg && h <= w.high_deg;
  return h >= w.low_deg || h <= w.high_deg;
}

}  // namespace

Hsv rgb_to_hsv(Rgb pixel) {
  const int r = pixel.r, g = pixel.g, b = pixel.b;
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  const int delta = hi - lo;

  Hsv out;
  out.v = hi / 255.0;
  out.s = hi == 0 ? 0.0 : static_cast<double>(delta) / hi;
  if (delta == 0) return out;

  double h;
  if (hi == r) {
    h = 60.0 * (g - b) / delta;
  } else if (hi == g) {
    h = 60.0 * (b - r) / delta + 120.0;
  } else {
    h = 60.0 * (r - g) / delta + 240.0;
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(const Hsv& pixel) {
  const double c = pixel.v * pixel.s;
  const double hp = pixel.h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  const double m = pixel.v - c;

  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(std::floor(hp)) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  return {saturate_u8((r + m) * 255.0), saturate_u8((g + m) * 255.0),
          saturate_u8((b + m) * 255.0)};
}

Lab rgb_to_lab(Rgb pixel) {
  const std::array<double, 3> lin{linearize(pixel.r), linearize(pixel.g),
                                  linearize(pixel.b)};
  const Mat3& m = srgb_to_xyz();
  std::array<double, 3> xyz{};
  for (int r = 0; r < 3; ++r) {
    xyz[r] = m[r][0] * lin[0] + m[r][1] * lin[1] + m[r][2] * lin[2];
  }
  const double fx = lab_f(xyz[0] / kWhiteX);
  const double fy = lab_f(xyz[1] / kWhiteY);
  const double fz = lab_f(xyz[2] / kWhiteZ);
  return {std::clamp(116.0 * fy - 16.0, 0.0, 100.0), 500.0 * (fx - fy),
          200.0 * (fy - fz)};
}

HsvImage to_hsv(const RgbImage& image) {
  HsvImage out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const Hsv hsv = rgb_to_hsv(pixel(image, x, y));
      out.at(x, y, 0) = hsv.h;
      out.at(x, y, 1) = hsv.s;
      out.at(x, y, 2) = hsv.v;
    }
  }
  return out;
}

void RedMaskConfig::validate() const {
  for (const HueWindow& w : hue_windows) {
    if (!(w.low_deg >= 0.0 && w.low_deg <= 360.0 && w.high_deg >= 0.0 &&
          w.high_deg <= 360.0)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "hue window bounds must lie in [0, 360]");
    }
  }
  if (!(sat_min >= 0.0 && sat_min <= 1.0) || !(val_min >= 0.0 && val_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "sat_min and val_min must lie in [0, 1]");
  }
}

bool matches_red_mask(const Hsv& pixel, const RedMaskConfig& cfg) {
  if (pixel.s < cfg.sat_min || pixel.v < cfg.val_min) return false;
  return std::any_of(cfg.hue_windows.begin(), cfg.hue_windows.end(),
                     [&](const HueWindow& w) { return hue_in_window(pixel.h, w); });
}

RgbImage contrast_augment(const RgbImage& image, const RedMaskConfig& cfg) {
  RgbImage out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (matches_red_mask(rgb_to_hsv(pixel(image, x, y)), cfg)) {
        set_pixel(out, x, y, {0, 255, 0});
      }
    }
  }
  return out;
}

}  // namespace lesionfair
