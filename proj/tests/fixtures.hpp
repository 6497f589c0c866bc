#pragma once

// Synthetic images and brute-force oracles shared by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lesionfair/image.hpp"

namespace lesionfair::testing {

// std::mt19937_64 output is fully specified; the distributions are not, so
// ranges are reduced by hand to keep fixtures identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

inline GrayImage noise_gray(int w, int h, std::uint64_t seed, int lo = 0, int hi = 255) {
  Rng rng(seed);
  GrayImage img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.uniform_int(lo, hi));
  return img;
}

inline RgbImage noise_rgb(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RgbImage img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  return img;
}

// Piecewise-constant blobs plus mild noise: realistic edge structure for
// property tests on the edge detector.
inline GrayImage blobs_gray(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  GrayImage img(w, h, static_cast<std::uint8_t>(rng.uniform_int(0, 255)));
  for (int k = 0; k < 4; ++k) {
    const int x0 = rng.uniform_int(0, w - 1), y0 = rng.uniform_int(0, h - 1);
    const int x1 = std::min(w, x0 + rng.uniform_int(4, w / 2));
    const int y1 = std::min(h, y0 + rng.uniform_int(4, h / 2));
    const auto v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) img.at(x, y) = v;
  }
  for (auto& v : img.data()) {
    v = static_cast<std::uint8_t>(std::clamp(v + rng.uniform_int(-6, 6), 0, 255));
  }
  return img;
}

inline GrayImage vertical_step(int w, int h, int step_x, std::uint8_t left = 0,
                               std::uint8_t right = 255) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = x < step_x ? left : right;
  return img;
}

// Dark square [x0, x0 + side) x [y0, y0 + side) on white.
inline GrayImage square_on_white(int w, int h, int x0, int y0, int side) {
  GrayImage img(w, h, 255);
  for (int y = y0; y < y0 + side; ++y)
    for (int x = x0; x < x0 + side; ++x) img.at(x, y) = 0;
  return img;
}

inline RgbImage uniform_rgb(int w, int h, Rgb c) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) set_pixel(img, x, y, c);
  return img;
}

inline RgbImage disk_on_background(int w, int h, double cx, double cy, double radius,
                                   Rgb disk, Rgb background) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x - cx, dy = y - cy;
      set_pixel(img, x, y, dx * dx + dy * dy <= radius * radius ? disk : background);
    }
  }
  return img;
}

// 8-connected components of the nonzero pixels, by repeated label
// propagation until a fixed point (deliberately not a stack flood fill).
inline int count_components(const Raster<std::uint8_t, 1>& img) {
  const int w = img.width(), h = img.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  for (int i = 0; i < w * h; ++i)
    if (img.data()[i]) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int& l = label[y * w + x];
        if (l < 0) continue;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const int nl = label[ny * w + nx];
            if (nl >= 0 && nl < l) {
              l = nl;
              changed = true;
            }
          }
      }
    }
  }
  int roots = 0;
  for (int i = 0; i < w * h; ++i) roots += label[i] == i ? 1 : 0;
  return roots;
}

inline int edge_neighbors(const Raster<std::uint8_t, 1>& img, int x, int y) {
  int n = 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (!dx && !dy) continue;
      const int nx = x + dx, ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= img.width() || ny >= img.height()) continue;
      n += img.at(nx, ny) ? 1 : 0;
    }
  return n;
}

inline std::size_t count_nonzero(const Raster<std::uint8_t, 1>& img) {
  std::size_t n = 0;
  for (auto v : img.data()) n += v ? 1 : 0;
  return n;
}

// Concordant-pair AUC: (#pos > neg + 0.5 #ties) / (P N).
inline double brute_force_auc(const std::vector<std::pair<double, bool>>& samples) {
  double concordant2 = 0.0;
  double pairs = 0.0;
  for (const auto& [sp, lp] : samples) {
    if (!lp) continue;
    for (const auto& [sn, ln] : samples) {
      if (ln) continue;
      pairs += 1.0;
      concordant2 += sp > sn ? 2.0 : (sp == sn ? 1.0 : 0.0);
    }
  }
  return concordant2 / (2.0 * pairs);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    Rng rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("lesionfair_" + tag + "_" + std::to_string(rng.next() % 1000000007ULL));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace lesionfair::testing
