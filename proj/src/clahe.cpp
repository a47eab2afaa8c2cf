#include <algorithm>
#include <cmath>
#include <string>

#include "vesselseg/preprocess.hpp"

namespace vesselseg {

void ClaheParams::validate() const {
  if (tile_rows < 2 || tile_cols < 2) throw InvalidArgument("clahe: tile grid must be at least 2x2");
  if (!(clip_limit > 0.0) || !std::isfinite(clip_limit)) {
    throw InvalidArgument("clahe: clip_limit must be > 0");
  }
  if (bins < 2) throw InvalidArgument("clahe: need at least 2 bins");
}

namespace {

// Tile i spans [edges[i], edges[i+1]).
std::vector<int> tile_edges(int extent, int tiles) {
  std::vector<int> edges(static_cast<std::size_t>(tiles) + 1);
  for (int i = 0; i <= tiles; ++i) {
    edges[i] = static_cast<int>(static_cast<long long>(i) * extent / tiles);
  }
  return edges;
}

std::vector<double> tile_centers(const std::vector<int>& edges) {
  std::vector<double> c(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) c[i] = 0.5 * (edges[i] + edges[i + 1] - 1);
  return c;
}

int bin_of(double v, int bins) {
  return std::min(bins - 1, static_cast<int>(v * bins));
}

// Index of the lower tile center bracketing p and the weight of the upper one.
std::pair<int, double> bracket(double p, const std::vector<double>& centers) {
  const int n = static_cast<int>(centers.size());
  if (p <= centers.front()) return {0, 0.0};
  if (p >= centers.back()) return {n - 1, 0.0};
  int i = 0;
  while (i + 1 < n && centers[i + 1] <= p) ++i;
  return {i, (p - centers[i]) / (centers[i + 1] - centers[i])};
}

std::vector<double> tile_mapping(const GrayImage& img, const FovMask& mask, const ClaheParams& params,
                                 int x0, int x1, int y0, int y1) {
  const int bins = params.bins;
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  double n = 0.0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (!mask(x, y)) continue;
      hist[bin_of(img(x, y), bins)] += 1.0;
      n += 1.0;
    }
  }
  std::vector<double> map(static_cast<std::size_t>(bins));
  if (n == 0.0) {
    for (int b = 0; b < bins; ++b) map[b] = (b + 0.5) / bins;
    return map;
  }

  const double clip = std::max(params.clip_limit * n, n / bins);
  double excess = 0.0;
  for (double& h : hist) {
    if (h > clip) {
      excess += h - clip;
      h = clip;
    }
  }
  const double share = excess / bins;
  double cdf = 0.0;
  for (int b = 0; b < bins; ++b) {
    cdf += hist[b] + share;
    map[b] = std::clamp(cdf / n, 0.0, 1.0);
  }
  return map;
}

}  // namespace

GrayImage clahe(const GrayImage& img, const ClaheParams& params, const FovMask& mask) {
  params.validate();
  require_same_shape(img, mask, "clahe mask");
  if (params.tile_rows > img.height() || params.tile_cols > img.width()) {
    throw InvalidArgument("clahe: " + std::to_string(params.tile_rows) + "x" +
                          std::to_string(params.tile_cols) + " tile grid larger than " +
                          std::to_string(img.width()) + "x" + std::to_string(img.height()) + " image");
  }

  const auto row_edges = tile_edges(img.height(), params.tile_rows);
  const auto col_edges = tile_edges(img.width(), params.tile_cols);
  const auto row_centers = tile_centers(row_edges);
  const auto col_centers = tile_centers(col_edges);

  std::vector<std::vector<double>> maps;
  maps.reserve(static_cast<std::size_t>(params.tile_rows) * params.tile_cols);
  for (int ty = 0; ty < params.tile_rows; ++ty) {
    for (int tx = 0; tx < params.tile_cols; ++tx) {
      maps.push_back(tile_mapping(img, mask, params, col_edges[tx], col_edges[tx + 1], row_edges[ty],
                                  row_edges[ty + 1]));
    }
  }
  auto map_at = [&](int ty, int tx, int bin) {
    return maps[static_cast<std::size_t>(ty) * params.tile_cols + tx][bin];
  };

  std::vector<double> out(img.data().begin(), img.data().end());
  for (int y = 0; y < img.height(); ++y) {
    const auto [ty, wy] = bracket(y, row_centers);
    const int ty1 = std::min(ty + 1, params.tile_rows - 1);
    for (int x = 0; x < img.width(); ++x) {
      if (!mask(x, y)) continue;
      const auto [tx, wx] = bracket(x, col_centers);
      const int tx1 = std::min(tx + 1, params.tile_cols - 1);
      const int b = bin_of(img(x, y), params.bins);
      const double top = (1.0 - wx) * map_at(ty, tx, b) + wx * map_at(ty, tx1, b);
      const double bottom = (1.0 - wx) * map_at(ty1, tx, b) + wx * map_at(ty1, tx1, b);
      out[img.index(x, y)] = std::clamp((1.0 - wy) * top + wy * bottom, 0.0, 1.0);
    }
  }
  return {img.width(), img.height(), std::move(out)};
}

}  // namespace vesselseg
