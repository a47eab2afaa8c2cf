#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "vesselseg/preprocess.hpp"

namespace vesselseg {

StructuringElement::StructuringElement(int diameter) : diameter_(diameter) {
  if (diameter < 3 || diameter % 2 == 0) {
    throw InvalidArgument("structuring element diameter must be odd and >= 3, got " +
                          std::to_string(diameter));
  }
  const int r = diameter / 2;
  const double limit = (diameter / 2.0) * (diameter / 2.0);
  data_.resize(static_cast<std::size_t>(diameter) * diameter);
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      data_[static_cast<std::size_t>((y + r) * diameter + x + r)] = x * x + y * y <= limit;
    }
  }
}

std::size_t StructuringElement::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

int StructuringElement::row_half_width(int dy) const {
  int w = -1;
  for (int dx = 0; dx <= radius(); ++dx) {
    if (contains(dx, dy)) w = dx;
  }
  return w;
}

StructuringElement disc_se(int diameter) { return StructuringElement(diameter); }

namespace {

// Sliding extremum over [x - h, x + h] clipped to the row (van Herk / Gil-Werman).
// `pick` is std::min or std::max; `identity` is its neutral element.
template <typename Pick>
void sliding_extremum(const double* row, int n, int h, double identity, Pick pick, double* out) {
  const int k = 2 * h + 1;
  const int len = n + 2 * h;
  const int blocks = (len + k - 1) / k;
  const int total = blocks * k;
  std::vector<double> padded(static_cast<std::size_t>(total), identity);
  std::copy(row, row + n, padded.begin() + h);
  std::vector<double> fwd(padded.size());
  std::vector<double> bwd(padded.size());
  for (int b = 0; b < blocks; ++b) {
    const int lo = b * k;
    fwd[lo] = padded[lo];
    for (int i = lo + 1; i < lo + k; ++i) fwd[i] = pick(fwd[i - 1], padded[i]);
    bwd[lo + k - 1] = padded[lo + k - 1];
    for (int i = lo + k - 2; i >= lo; --i) bwd[i] = pick(bwd[i + 1], padded[i]);
  }
  for (int x = 0; x < n; ++x) out[x] = pick(bwd[x], fwd[x + k - 1]);
}

// Flat morphology over a disc, decomposed into one horizontal run per element row.
template <typename Pick>
GrayImage disc_filter(const GrayImage& img, const StructuringElement& se, double identity, Pick pick) {
  const int W = img.width();
  const int H = img.height();
  const int r = se.radius();
  const auto plane = img.data();

  std::map<int, std::vector<double>> by_width;
  for (int dy = -r; dy <= r; ++dy) {
    const int h = se.row_half_width(dy);
    if (h < 0 || by_width.contains(h)) continue;
    std::vector<double> filtered(plane.size());
    for (int y = 0; y < H; ++y) {
      const auto off = static_cast<std::size_t>(y) * W;
      sliding_extremum(plane.data() + off, W, h, identity, pick, filtered.data() + off);
    }
    by_width.emplace(h, std::move(filtered));
  }

  std::vector<double> out(plane.size(), identity);
  for (int dy = -r; dy <= r; ++dy) {
    const int h = se.row_half_width(dy);
    if (h < 0) continue;
    const auto& rows = by_width.at(h);
    for (int y = std::max(0, -dy); y < std::min(H, H - dy); ++y) {
      double* dst = out.data() + static_cast<std::size_t>(y) * W;
      const double* src = rows.data() + static_cast<std::size_t>(y + dy) * W;
      for (int x = 0; x < W; ++x) dst[x] = pick(dst[x], src[x]);
    }
  }
  return {W, H, std::move(out)};
}

constexpr auto kMin = [](double a, double b) { return std::min(a, b); };
constexpr auto kMax = [](double a, double b) { return std::max(a, b); };

}  // namespace

GrayImage erode(const GrayImage& img, const StructuringElement& se) {
  return disc_filter(img, se, std::numeric_limits<double>::infinity(), kMin);
}

GrayImage dilate(const GrayImage& img, const StructuringElement& se) {
  return disc_filter(img, se, -std::numeric_limits<double>::infinity(), kMax);
}

GrayImage opening(const GrayImage& img, const StructuringElement& se) {
  return dilate(erode(img, se), se);
}

GrayImage white_top_hat(const GrayImage& img, const StructuringElement& se) {
  if (se.diameter() > img.width() || se.diameter() > img.height()) {
    throw InvalidArgument("white_top_hat: structuring element larger than image");
  }
  const GrayImage opened = opening(img, se);
  std::vector<double> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = img[i] - opened[i];
  return {img.width(), img.height(), std::move(out)};
}

}  // namespace vesselseg
