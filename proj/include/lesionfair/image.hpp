#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lesionfair/error.hpp"

namespace lesionfair {

// Row-major interleaved raster. Every pipeline stage works on one of the
// aliases below; the template only owns storage and bounds.
template <typename T, int Channels>
class Raster {
 public:
  using value_type = T;
  static constexpr int kChannels = Channels;

  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::kImageTooSmall, "raster dimensions must be >= 1");
    }
    data_.assign(static_cast<std::size_t>(width) * height * Channels, fill);
  }
  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::kImageTooSmall, "raster dimensions must be >= 1");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height * Channels) {
      throw Error(ErrorCode::kShapeMismatch, "buffer length does not match dimensions");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }
  const T& at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  template <typename U, int C>
  bool same_shape(const Raster<U, C>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using RgbImage = Raster<std::uint8_t, 3>;
using GrayImage = Raster<std::uint8_t, 1>;
// Real-valued single channel (blurred intensities, thinned magnitudes).
using RealImage = Raster<double, 1>;
// Binary {0, 1}.
using EdgeMap = Raster<std::uint8_t, 1>;
// Class ids {0 = background, 1 = skin, 2 = lesion}.
using LabelMask = Raster<std::uint8_t, 1>;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline Rgb pixel(const RgbImage& image, int x, int y) {
  return {image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2)};
}

inline void set_pixel(RgbImage& image, int x, int y, Rgb value) {
  image.at(x, y, 0) = value.r;
  image.at(x, y, 1) = value.g;
  image.at(x, y, 2) = value.b;
}

// Round half away from zero. Values within 1e-9 of a half are treated as
// exact halves so decimal weights like 0.3 round the way their decimal
// arithmetic does.
inline double round_half_away(double v) {
  constexpr double kSnap = 1e-9;
  return v >= 0.0 ? std::floor(v + 0.5 + kSnap) : -std::floor(-v + 0.5 + kSnap);
}

inline std::uint8_t saturate_u8(double v) {
  const double r = round_half_away(v);
  if (r <= 0.0) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

}  // namespace lesionfair
