#include "vesselseg/preprocess.hpp"

#include <cmath>
#include <limits>

namespace vesselseg {

GrayImage extract_inverted_green(const RgbImage& img, const FovMask& mask) {
  require_same_shape(img, mask, "extract_inverted_green");
  const auto& green = img.green();
  std::vector<double> out(green.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask[i]) out[i] = 1.0 - green[i];
  }
  return {img.width(), img.height(), std::move(out)};
}

namespace {

constexpr double kFar = 1e20;

// Squared distance transform of one line (Felzenszwalb & Huttenlocher).
void edt_1d(const double* f, int n, double* d, std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Squared Euclidean distance from every pixel to the nearest mask pixel.
std::vector<double> squared_distance_to_mask(const FovMask& mask) {
  const int W = mask.width();
  const int H = mask.height();
  const int n = std::max(W, H);
  std::vector<double> grid(mask.size());
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = mask[i] ? 0.0 : kFar;

  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  for (int x = 0; x < W; ++x) {
    for (int y = 0; y < H; ++y) f[y] = grid[static_cast<std::size_t>(y) * W + x];
    edt_1d(f.data(), H, d.data(), v, z);
    for (int y = 0; y < H; ++y) grid[static_cast<std::size_t>(y) * W + x] = d[y];
  }
  for (int y = 0; y < H; ++y) {
    double* row = grid.data() + static_cast<std::size_t>(y) * W;
    std::copy(row, row + W, f.begin());
    edt_1d(f.data(), W, d.data(), v, z);
    std::copy(d.begin(), d.begin() + W, row);
  }
  return grid;
}

void require_nonempty(const FovMask& mask, const char* what) {
  if (count_true(mask.data()) == 0) throw InvalidArgument(std::string(what) + ": empty field-of-view mask");
}

}  // namespace

FovMask padding_region(const FovMask& mask, int pad_width) {
  require_nonempty(mask, "padding_region");
  if (pad_width < 0) throw InvalidArgument("padding_region: negative pad width");
  const auto dist2 = squared_distance_to_mask(mask);
  const double limit = static_cast<double>(pad_width) * pad_width;
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = !mask[i] && dist2[i] <= limit;
  return {mask.width(), mask.height(), std::move(out)};
}

FovMask padded_support(const FovMask& mask, int pad_width) {
  const FovMask ring = padding_region(mask, pad_width);
  std::vector<std::uint8_t> out(mask.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask[i] | ring[i];
  return {mask.width(), mask.height(), std::move(out)};
}

GrayImage radial_pad(const GrayImage& img, const FovMask& mask, int pad_width) {
  require_same_shape(img, mask, "radial_pad");
  const FovMask ring = padding_region(mask, pad_width);

  double cx = 0.0;
  double cy = 0.0;
  double n = 0.0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask(x, y)) { cx += x; cy += y; n += 1.0; }
    }
  }
  cx /= n;
  cy /= n;

  constexpr double kStep = 0.25;
  std::vector<double> out(img.data().begin(), img.data().end());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!ring(x, y)) continue;
      const double dx = cx - x;
      const double dy = cy - y;
      const double len = std::hypot(dx, dy);
      bool found = false;
      for (double t = kStep; t <= len + 1.0; t += kStep) {
        const int qx = static_cast<int>(std::lround(x + dx / len * t));
        const int qy = static_cast<int>(std::lround(y + dy / len * t));
        if (mask.contains(qx, qy) && mask(qx, qy)) {
          out[img.index(x, y)] = img(qx, qy);
          found = true;
          break;
        }
      }
      if (found) continue;
      // The ray missed the field of view (non-convex mask); use the nearest mask pixel.
      double best = std::numeric_limits<double>::infinity();
      for (int qy = 0; qy < mask.height(); ++qy) {
        for (int qx = 0; qx < mask.width(); ++qx) {
          if (!mask(qx, qy)) continue;
          const double d2 = static_cast<double>(qx - x) * (qx - x) + static_cast<double>(qy - y) * (qy - y);
          if (d2 < best) {
            best = d2;
            out[img.index(x, y)] = img(qx, qy);
          }
        }
      }
    }
  }
  return {img.width(), img.height(), std::move(out)};
}

PreprocessStages preprocess(const RgbImage& img, const FovMask& mask, const PreprocessParams& params) {
  const StructuringElement se = disc_se(params.se_diameter);
  PreprocessStages stages;
  stages.inverted_green = extract_inverted_green(img, mask);
  stages.padded = radial_pad(stages.inverted_green, mask, params.pad_width);
  stages.top_hat = white_top_hat(stages.padded, se);
  stages.enhanced = clahe(stages.top_hat, params.clahe, padded_support(mask, params.pad_width));
  return stages;
}

}  // namespace vesselseg
