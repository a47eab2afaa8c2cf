#pragma once

// Multiscale MF-FDOG segmentation.
//
// Per scale: H is the strongest matched-filter response over orientations and
// D the FDOG response paired with it. D is mean-filtered, its magnitude
// normalized over the field of view, and turned into a per-pixel threshold
//
//   T = (1 + norm(|mean_w(D)|)) * c * mean_fov(H)
//
// which rises near step edges (large local FDOG mean) and stays near the
// reference level on symmetric vessel profiles. Pixels with H >= T are vessel.
// Scales are fused by OR and clipped to the field of view.

#include <span>
#include <string_view>
#include <vector>

#include "vesselseg/convolution.hpp"
#include "vesselseg/image.hpp"
#include "vesselseg/kernel.hpp"

namespace vesselseg {

/// How the FDOG response is paired with the per-pixel MF maximum.
enum class OrientationPairing {
  ArgmaxH,    ///< FDOG at the orientation that maximizes H
  MaxAbsD,    ///< FDOG at the orientation with the largest |FDOG|
};

/// Whether the mean-filtered FDOG response is normalized by magnitude or sign.
enum class EdgeNormalization {
  Abs,
  Signed,
};

std::string_view to_string(OrientationPairing p);
std::string_view to_string(EdgeNormalization n);
OrientationPairing parse_orientation_pairing(std::string_view s);
EdgeNormalization parse_edge_normalization(std::string_view s);

struct ThresholdParams {
  double c = 2.3;  ///< reference-threshold multiplier
  int w = 31;      ///< mean-filter side, odd
  EdgeNormalization normalization = EdgeNormalization::Abs;

  /// Throws InvalidArgument unless c > 0 and w is odd and >= 3.
  void validate() const;
  bool operator==(const ThresholdParams&) const = default;
};

struct ScaleResponse {
  ResponseField h;
  ResponseField d;
  OrientationMap best_orientation;
};

/// H, D and the winning orientation index for one scale of the bank.
/// Ties in the H maximum go to the lowest orientation index.
ScaleResponse scale_response(const GrayImage& img, const FilterBank& bank, std::size_t scale_index,
                             OrientationPairing pairing = OrientationPairing::ArgmaxH,
                             ConvolutionStrategy strategy = ConvolutionStrategy::Auto);

/// Normalized local FDOG mean over the field of view, clamped to [0,1]
/// everywhere (pixels outside the mask reuse the mask's min/max).
ResponseField edge_modulation(const ResponseField& d, const ThresholdParams& p, const FovMask& mask);

/// Mean of H over mask pixels.
double mean_over_mask(const ResponseField& h, const FovMask& mask);

/// T = (1 + edge_modulation) * c * mean_fov(H).
ResponseField threshold_field(const ResponseField& d, const ResponseField& h, const ThresholdParams& p,
                              const FovMask& mask);

/// M = H >= T (inclusive).
BinaryMap binarize(const ResponseField& h, const ResponseField& t);

/// Reference levels at or below this carry no matched response; such a scale
/// contributes no vessel pixels.
inline constexpr double kMinReferenceThreshold = 1e-9;

/// Everything in the per-scale chain that does not depend on c, so a sweep
/// over c re-binarizes without refiltering.
struct PreparedScale {
  ScaleResponse response;
  ResponseField modulation;
  double mean_h = 0.0;
};

struct SegmentOptions {
  OrientationPairing pairing = OrientationPairing::ArgmaxH;
  ConvolutionStrategy strategy = ConvolutionStrategy::Auto;
};

std::vector<PreparedScale> prepare_scales(const GrayImage& img, const FilterBank& bank,
                                          const ThresholdParams& tp, const FovMask& mask,
                                          const SegmentOptions& options = {});

/// Binary map of one prepared scale at multiplier c (not yet masked).
BinaryMap binarize_scale(const PreparedScale& scale, double c);

/// OR over scales at multiplier c, intersected with the mask.
BinaryMap fuse_scales(std::span<const PreparedScale> scales, double c, const FovMask& mask);

BinaryMap segment_multiscale(const GrayImage& img, const FilterBank& bank, const ThresholdParams& tp,
                             const FovMask& mask, const SegmentOptions& options = {});

}  // namespace vesselseg
