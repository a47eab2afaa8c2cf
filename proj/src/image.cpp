#include "vesselseg/image.hpp"

#include <algorithm>
#include <cmath>

namespace vesselseg {

void GrayTag::validate(std::span<const double> data) {
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("GrayImage: value " + std::to_string(v) + " outside [0,1]");
    }
  }
}

void ResponseTag::validate(std::span<const double> data) {
  for (double v : data) {
    if (!std::isfinite(v)) throw InvalidArgument("ResponseField: non-finite value");
  }
}

void FovTag::validate(std::span<const std::uint8_t> data) {
  for (auto v : data) {
    if (v > 1) throw InvalidArgument("FovMask: values must be 0 or 1");
  }
}

void BinaryTag::validate(std::span<const std::uint8_t> data) {
  for (auto v : data) {
    if (v > 1) throw InvalidArgument("BinaryMap: values must be 0 or 1");
  }
}

RgbImage::RgbImage(GrayImage red, GrayImage green, GrayImage blue)
    : red_(std::move(red)), green_(std::move(green)), blue_(std::move(blue)) {
  require_same_shape(red_, green_, "RgbImage green plane");
  require_same_shape(red_, blue_, "RgbImage blue plane");
}

GrayImage normalize_minmax(const ResponseField& img) {
  if (img.empty()) throw InvalidArgument("normalize_minmax: empty field");
  auto [lo, hi] = std::minmax_element(img.data().begin(), img.data().end());
  const double min = *lo;
  const double range = *hi - min;
  std::vector<double> out(img.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::clamp((img[i] - min) / range, 0.0, 1.0);
    }
  }
  return {img.width(), img.height(), std::move(out)};
}

GrayImage invert(const GrayImage& img) {
  std::vector<double> out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - img[i];
  return {img.width(), img.height(), std::move(out)};
}

std::size_t count_true(std::span<const std::uint8_t> data) {
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

ResponseField to_response(PlaneView view) {
  return {view.width, view.height, std::vector<double>(view.data.begin(), view.data.end())};
}

BinaryMap apply_mask(const BinaryMap& map, const FovMask& mask) {
  require_same_shape(map, mask, "apply_mask");
  std::vector<std::uint8_t> out(map.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = map[i] & mask[i];
  return {map.width(), map.height(), std::move(out)};
}

}  // namespace vesselseg
