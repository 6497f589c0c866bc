#pragma once

#include <utility>
#include <vector>

#include "lesionfair/image.hpp"

namespace lesionfair {

// Hexcone HSV. h in degrees [0, 360); s, v in [0, 1].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

// CIELAB relative to D65 (2 degree observer).
struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

using HsvImage = Raster<double, 3>;

Hsv rgb_to_hsv(Rgb pixel);
Rgb hsv_to_rgb(const Hsv& pixel);
Lab rgb_to_lab(Rgb pixel);

HsvImage to_hsv(const RgbImage& image);

struct HueWindow {
  double low_deg = 0.0;
  double high_deg = 0.0;
};

struct RedMaskConfig {
  // A window with low > high wraps through 360 -> 0. Bounds are inclusive.
  std::vector<HueWindow> hue_windows{{0.0, 10.0}, {350.0, 360.0}};
  double sat_min = 0.30;
  double val_min = 0.20;

  // Throws kInvalidConfig.
  void validate() const;
};

bool matches_red_mask(const Hsv& pixel, const RedMaskConfig& cfg);

// Recolors every red-masked pixel to pure green (0, 255, 0); all other
// pixels are copied through.
RgbImage contrast_augment(const RgbImage& image, const RedMaskConfig& cfg);

}  // namespace lesionfair
