#pragma once

// Fundus enhancement: inverted green channel, radial padding past the field of
// view, white top-hat with a disc, and CLAHE.

#include <cstdint>
#include <vector>

#include "vesselseg/image.hpp"

namespace vesselseg {

/// Flat disc: (x, y) is a member iff x^2 + y^2 <= (diameter / 2)^2.
class StructuringElement {
 public:
  StructuringElement() = default;
  explicit StructuringElement(int diameter);

  [[nodiscard]] int diameter() const { return diameter_; }
  [[nodiscard]] int radius() const { return diameter_ / 2; }
  [[nodiscard]] bool contains(int dx, int dy) const {
    return data_[static_cast<std::size_t>((dy + radius()) * diameter_ + dx + radius())] != 0;
  }
  [[nodiscard]] std::size_t count() const;
  /// Half-width of the member run on row dy: members are dx in [-w, w], or none if -1.
  [[nodiscard]] int row_half_width(int dy) const;

 private:
  int diameter_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Throws InvalidArgument unless diameter is odd and >= 3.
StructuringElement disc_se(int diameter);

/// Grayscale erosion (min over the element); out-of-image samples are ignored.
GrayImage erode(const GrayImage& img, const StructuringElement& se);
/// Grayscale dilation (max over the element); out-of-image samples are ignored.
GrayImage dilate(const GrayImage& img, const StructuringElement& se);
GrayImage opening(const GrayImage& img, const StructuringElement& se);
/// img - opening(img); keeps bright structures narrower than the element.
GrayImage white_top_hat(const GrayImage& img, const StructuringElement& se);

struct ClaheParams {
  int tile_rows = 8;
  int tile_cols = 8;
  /// Per-bin clip, as a fraction of the tile's pixel count.
  double clip_limit = 0.01;
  int bins = 256;

  void validate() const;
  bool operator==(const ClaheParams&) const = default;
};

/// Contrast-limited adaptive histogram equalization. Tile histograms count
/// only pixels inside `mask`; pixels outside `mask` pass through unchanged.
/// A tile with no mask pixels uses the identity mapping.
GrayImage clahe(const GrayImage& img, const ClaheParams& params, const FovMask& mask);

/// Inside the mask: 1 - green. Outside: 0.
GrayImage extract_inverted_green(const RgbImage& img, const FovMask& mask);

/// Exterior pixels within `pad_width` (Euclidean) of the field of view.
FovMask padding_region(const FovMask& mask, int pad_width);

/// Field of view plus its padding ring.
FovMask padded_support(const FovMask& mask, int pad_width);

/// Fills the padding ring: each ring pixel takes the value of the first
/// field-of-view pixel met walking from it toward the mask centroid.
/// Pixels inside the mask and beyond the ring are left as they are.
GrayImage radial_pad(const GrayImage& img, const FovMask& mask, int pad_width);

struct PreprocessParams {
  int se_diameter = 11;
  int pad_width = 25;
  ClaheParams clahe;

  bool operator==(const PreprocessParams&) const = default;
};

struct PreprocessStages {
  GrayImage inverted_green;
  GrayImage padded;
  GrayImage top_hat;
  GrayImage enhanced;
};

/// Full enhancement chain; `enhanced` is what the filter bank sees.
PreprocessStages preprocess(const RgbImage& img, const FovMask& mask, const PreprocessParams& params);

}  // namespace vesselseg
