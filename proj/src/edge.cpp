#include "lesionfair/edge.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lesionfair {
namespace {

constexpr double kTapScale = 65536.0;

int reflect101(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

}  // namespace

void CannyConfig::validate() const {
  if (!(gaussian_sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "gaussian_sigma must be > 0");
  }
  if (kernel_radius < 1) {
    throw Error(ErrorCode::kInvalidConfig, "kernel_radius must be >= 1");
  }
  if (!(low_threshold >= 0.0) || !(high_threshold >= low_threshold)) {
    throw Error(ErrorCode::kInvalidConfig,
                "thresholds must satisfy high >= low >= 0");
  }
}

GrayImage value_channel(const HsvImage& image) {
  GrayImage out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) = saturate_u8(image.at(x, y, 2) * 255.0);
    }
  }
  return out;
}

RealImage to_real(const GrayImage& image) {
  RealImage out(image.width(), image.height());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

std::vector<double> gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0) || radius < 1) {
    throw Error(ErrorCode::kInvalidConfig, "gaussian kernel needs sigma > 0, radius >= 1");
  }
  std::vector<double> g(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    g[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += g[i + radius];
  }
  // Quantize the side taps, then give the remainder to the center so the
  // integer taps sum to exactly kTapScale.
  double side_total = 0.0;
  for (int i = 0; i < static_cast<int>(g.size()); ++i) {
    if (i == radius) continue;
    g[i] = std::round(kTapScale * g[i] / sum);
    side_total += g[i];
  }
  g[radius] = kTapScale - side_total;
  for (double& tap : g) tap /= kTapScale;
  return g;
}

RealImage gaussian_blur(const RealImage& image, double sigma, int radius) {
  const std::vector<double> taps = gaussian_kernel(sigma, radius);
  const int w = image.width();
  const int h = image.height();
  const int len = 2 * radius + 1;
  if (w < len || h < len) {
    throw Error(ErrorCode::kImageTooSmall,
                std::to_string(w) + "x" + std::to_string(h) + " image, kernel length " +
                    std::to_string(len));
  }

  RealImage horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[k + radius] * image.at(reflect101(x + k, w), y);
      }
      horizontal.at(x, y) = acc;
    }
  }
  RealImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[k + radius] * horizontal.at(x, reflect101(y + k, h));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

RealImage gaussian_blur(const GrayImage& image, double sigma, int radius) {
  return gaussian_blur(to_real(image), sigma, radius);
}

GradientField sobel_gradients(const RealImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorCode::kImageTooSmall, "sobel needs at least 3x3");
  }
  GradientField field{RealImage(w, h), RealImage(w, h)};
  for (int y = 0; y < h; ++y) {
    const int ym = reflect101(y - 1, h);
    const int yp = reflect101(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = reflect101(x - 1, w);
      const int xp = reflect101(x + 1, w);
      const double gx = (image.at(xp, ym) + 2.0 * image.at(xp, y) + image.at(xp, yp)) -
                        (image.at(xm, ym) + 2.0 * image.at(xm, y) + image.at(xm, yp));
      const double gy = (image.at(xm, yp) + 2.0 * image.at(x, yp) + image.at(xp, yp)) -
                        (image.at(xm, ym) + 2.0 * image.at(x, ym) + image.at(xp, ym));
      field.magnitude.at(x, y) = std::sqrt(gx * gx + gy * gy);
      field.direction.at(x, y) = std::atan2(gy, gx);
    }
  }
  return field;
}

int quantize_direction(double radians) {
  double deg = radians * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  if (deg <= 22.5) return 0;
  if (deg <= 67.5) return 1;
  if (deg <= 112.5) return 2;
  if (deg < 157.5) return 3;
  return 0;
}

RealImage non_max_suppress(const GradientField& field) {
  const RealImage& mag = field.magnitude;
  const int w = mag.width();
  const int h = mag.height();
  RealImage out(w, h, 0.0);
  // {dx, dy} of the neighbor that comes later in raster order; the earlier
  // one is its mirror.
  static constexpr int kForward[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double m = mag.at(x, y);
      if (m <= 0.0) continue;
      const int bin = quantize_direction(field.direction.at(x, y));
      const int dx = kForward[bin][0];
      const int dy = kForward[bin][1];
      const double before = mag.at(x - dx, y - dy);
      const double after = mag.at(x + dx, y + dy);
      if (m > before && m >= after) out.at(x, y) = m;
    }
  }
  return out;
}

EdgeMap hysteresis(const RealImage& thinned, double low, double high) {
  if (!(low >= 0.0) || !(high >= low)) {
    throw Error(ErrorCode::kInvalidConfig, "thresholds must satisfy high >= low >= 0");
  }
  const int w = thinned.width();
  const int h = thinned.height();
  EdgeMap out(w, h, 0);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (thinned.at(x, y) < high || out.at(x, y)) continue;
      out.at(x, y) = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int ny = cy - 1; ny <= cy + 1; ++ny) {
          for (int nx = cx - 1; nx <= cx + 1; ++nx) {
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || out.at(nx, ny)) continue;
            if (thinned.at(nx, ny) >= low) {
              out.at(nx, ny) = 1;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
    }
  }
  return out;
}

EdgeMap canny(const GrayImage& image, const CannyConfig& cfg) {
  cfg.validate();
  if (image.width() < 3 || image.height() < 3) {
    throw Error(ErrorCode::kImageTooSmall, "canny needs at least 3x3");
  }
  const RealImage blurred = gaussian_blur(image, cfg.gaussian_sigma, cfg.kernel_radius);
  const RealImage thinned = non_max_suppress(sobel_gradients(blurred));
  return hysteresis(thinned, cfg.low_threshold, cfg.high_threshold);
}

}  // namespace lesionfair
