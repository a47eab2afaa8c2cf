#pragma once

// Slow, obviously-correct reference implementations used as test oracles.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "vesselseg/image.hpp"
#include "vesselseg/kernel.hpp"

namespace vesselseg::testing {

/// Quadruple-loop correlation with replicate edges.
inline std::vector<double> naive_correlate(PlaneView img, const Stencil& k) {
  const int r = k.radius();
  std::vector<double> out(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = std::clamp(x + dx, 0, img.width - 1);
          const int sy = std::clamp(y + dy, 0, img.height - 1);
          acc += k.at(dx, dy) * img.at(sx, sy);
        }
      }
      out[static_cast<std::size_t>(y) * img.width + x] = acc;
    }
  }
  return out;
}

inline bool in_disc(int dx, int dy, int diameter) {
  const double r = diameter / 2.0;
  return dx * dx + dy * dy <= r * r;
}

/// Min (erode) or max (dilate) over the disc, skipping out-of-image samples.
inline std::vector<double> brute_morph(const GrayImage& img, int diameter, bool take_max) {
  const int r = diameter / 2;
  std::vector<double> out(img.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double v = take_max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (!in_disc(dx, dy, diameter) || !img.contains(x + dx, y + dy)) continue;
          const double s = img(x + dx, y + dy);
          v = take_max ? std::max(v, s) : std::min(v, s);
        }
      }
      out[img.index(x, y)] = v;
    }
  }
  return out;
}

inline std::vector<double> brute_top_hat(const GrayImage& img, int diameter) {
  const GrayImage eroded(img.width(), img.height(), brute_morph(img, diameter, false));
  const auto opened = brute_morph(eroded, diameter, true);
  std::vector<double> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = img[i] - opened[i];
  return out;
}

inline GrayImage random_gray(int w, int h, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = u(rng);
  return GrayImage(w, h, std::move(v));
}

inline BinaryMap random_binary(int w, int h, double p, std::mt19937& rng) {
  std::bernoulli_distribution b(p);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = b(rng) ? 1 : 0;
  return BinaryMap(w, h, std::move(v));
}

inline FovMask full_mask(int w, int h) { return FovMask(w, h, std::uint8_t{1}); }

inline FovMask disc_mask(int w, int h, double cx, double cy, double radius) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      v[static_cast<std::size_t>(y) * w + x] = dx * dx + dy * dy <= radius * radius ? 1 : 0;
    }
  }
  return FovMask(w, h, std::move(v));
}

}  // namespace vesselseg::testing
