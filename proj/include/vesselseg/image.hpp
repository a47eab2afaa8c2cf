#pragma once

// Image containers shared by every stage of the pipeline.
//
// All rasters are row-major, immutable after construction, and carry their
// invariants in a tag type: GrayImage values live in [0,1], ResponseField
// values are finite, masks are 0/1 bytes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "vesselseg/error.hpp"

namespace vesselseg {

struct GrayTag {
  using value_type = double;
  static constexpr const char* kName = "GrayImage";
  static void validate(std::span<const double> data);
};

struct ResponseTag {
  using value_type = double;
  static constexpr const char* kName = "ResponseField";
  static void validate(std::span<const double> data);
};

struct FovTag {
  using value_type = std::uint8_t;
  static constexpr const char* kName = "FovMask";
  static void validate(std::span<const std::uint8_t> data);
};

struct BinaryTag {
  using value_type = std::uint8_t;
  static constexpr const char* kName = "BinaryMap";
  static void validate(std::span<const std::uint8_t> data);
};

struct OrientationTag {
  using value_type = std::uint16_t;
  static constexpr const char* kName = "OrientationMap";
  static void validate(std::span<const std::uint16_t>) {}
};

/// Read-only view of a scalar plane. Both GrayImage and ResponseField expose one.
struct PlaneView {
  int width = 0;
  int height = 0;
  std::span<const double> data;

  [[nodiscard]] double at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x)];
  }
  [[nodiscard]] bool empty() const { return data.empty(); }
};

template <typename Tag>
class Raster {
 public:
  using value_type = typename Tag::value_type;

  Raster() = default;

  Raster(int width, int height, value_type fill = value_type{})
      : width_(checked_dim(width)), height_(checked_dim(height)),
        data_(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), fill) {
    Tag::validate(data_);
  }

  Raster(int width, int height, std::vector<value_type> data)
      : width_(checked_dim(width)), height_(checked_dim(height)), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
      throw DimensionMismatch(std::string(Tag::kName) + ": data length " +
                              std::to_string(data_.size()) + " != " + std::to_string(width_) +
                              "x" + std::to_string(height_));
    }
    Tag::validate(data_);
  }

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] value_type operator()(int x, int y) const { return data_[index(x, y)]; }
  [[nodiscard]] value_type operator[](std::size_t i) const { return data_[i]; }
  [[nodiscard]] std::span<const value_type> data() const { return data_; }

  [[nodiscard]] std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  [[nodiscard]] bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  [[nodiscard]] PlaneView view() const
    requires std::is_same_v<value_type, double>
  {
    return {width_, height_, data_};
  }

  template <typename Other>
  [[nodiscard]] bool same_shape(const Other& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Raster&) const = default;

 private:
  static int checked_dim(int d) {
    if (d < 0) throw InvalidArgument(std::string(Tag::kName) + ": negative dimension");
    return d;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<value_type> data_;
};

using GrayImage = Raster<GrayTag>;
using ResponseField = Raster<ResponseTag>;
using FovMask = Raster<FovTag>;
using BinaryMap = Raster<BinaryTag>;
using OrientationMap = Raster<OrientationTag>;

/// Three equally sized planes with values in [0,1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(GrayImage red, GrayImage green, GrayImage blue);

  [[nodiscard]] int width() const { return red_.width(); }
  [[nodiscard]] int height() const { return red_.height(); }
  [[nodiscard]] const GrayImage& red() const { return red_; }
  [[nodiscard]] const GrayImage& green() const { return green_; }
  [[nodiscard]] const GrayImage& blue() const { return blue_; }

  bool operator==(const RgbImage&) const = default;

 private:
  GrayImage red_;
  GrayImage green_;
  GrayImage blue_;
};

/// Throws DimensionMismatch naming `what` unless both rasters share a shape.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                            "x" + std::to_string(b.height()));
  }
}

/// Affine map of the field onto [0,1]; a constant field maps to all zeros.
GrayImage normalize_minmax(const ResponseField& img);

/// 1 - value, pixel-wise.
GrayImage invert(const GrayImage& img);

/// Number of true pixels in a mask or binary map.
std::size_t count_true(std::span<const std::uint8_t> data);

/// Wraps arbitrary finite values as a ResponseField (e.g. a GrayImage promoted for filtering).
ResponseField to_response(PlaneView view);

/// Restricts a binary map to the field of view.
BinaryMap apply_mask(const BinaryMap& map, const FovMask& mask);

}  // namespace vesselseg
