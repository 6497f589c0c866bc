#pragma once

#include <vector>

#include "lesionfair/color.hpp"
#include "lesionfair/image.hpp"

namespace lesionfair {

struct CannyConfig {
  double gaussian_sigma = 1.4;
  int kernel_radius = 2;
  // Thresholds act on the raw L2 Sobel magnitude of an 8-bit image.
  double low_threshold = 50.0;
  double high_threshold = 150.0;

  // Throws kInvalidConfig.
  void validate() const;
};

struct GradientField {
  RealImage magnitude;
  // atan2(gy, gx) in radians, y axis pointing down the rows.
  RealImage direction;
};

// round(V * 255) per pixel.
GrayImage value_channel(const HsvImage& image);

RealImage to_real(const GrayImage& image);

// Normalized 1-D Gaussian taps, length 2 * radius + 1. The taps are
// quantized to multiples of 2^-16 and sum to exactly 1, which makes the
// blur exactly shift-equivariant and bit-reproducible.
std::vector<double> gaussian_kernel(double sigma, int radius);

// Separable blur with reflect-101 borders. Throws kImageTooSmall when either
// dimension is shorter than the kernel.
RealImage gaussian_blur(const RealImage& image, double sigma, int radius);
RealImage gaussian_blur(const GrayImage& image, double sigma, int radius);

// 3x3 Sobel with reflect-101 borders. Throws kImageTooSmall below 3x3.
GradientField sobel_gradients(const RealImage& image);

// Direction bin 0..3 for 0, 45, 90, 135 degrees. Boundaries at +-22.5
// degrees resolve to the lower bin index (157.5 goes to bin 0).
int quantize_direction(double radians);

// Keeps a pixel's magnitude when it is a local maximum along its quantized
// gradient direction: strictly greater than the neighbor that comes first in
// raster order, and no smaller than the one that comes after. The 1-pixel
// frame is zeroed.
RealImage non_max_suppress(const GradientField& field);

// 8-connected double-threshold hysteresis. Requires high >= low >= 0.
EdgeMap hysteresis(const RealImage& thinned, double low, double high);

EdgeMap canny(const GrayImage& image, const CannyConfig& cfg);

}  // namespace lesionfair
