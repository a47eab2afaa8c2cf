#pragma once

// 2-D correlation with replicate-edge extension.
//
// out(x, y) = sum_{dy,dx} k(dx, dy) * img(clamp(x + dx), clamp(y + dy))
//
// Every strategy computes the same quantity; they differ only in cost. Direct
// sums taps in the same (dy, dx) order as the textbook quadruple loop and is
// bit-identical to it. Fft agrees to ~1e-13 on unit-range inputs.

#include <span>
#include <string_view>
#include <vector>

#include "vesselseg/image.hpp"
#include "vesselseg/kernel.hpp"

namespace vesselseg {

enum class ConvolutionStrategy {
  Auto,    ///< Direct for small stencils, Fft otherwise
  Direct,  ///< row-vectorized spatial accumulation over a replicate-padded copy
  Fft,     ///< one forward transform of the padded image, one inverse per stencil
};

/// All strategies a caller may request explicitly (Auto excluded).
inline constexpr ConvolutionStrategy kConcreteStrategies[] = {ConvolutionStrategy::Direct,
                                                              ConvolutionStrategy::Fft};

std::string_view to_string(ConvolutionStrategy s);
ConvolutionStrategy parse_convolution_strategy(std::string_view name);

/// Throws InvalidArgument when the stencil is larger than the image.
ResponseField convolve(PlaneView img, const Stencil& k,
                       ConvolutionStrategy strategy = ConvolutionStrategy::Auto);

inline ResponseField convolve(PlaneView img, const Kernel& k,
                              ConvolutionStrategy strategy = ConvolutionStrategy::Auto) {
  return convolve(img, k.stencil, strategy);
}

/// Correlates one image with many stencils, sharing the padded image (and its
/// transform for Fft) across the whole set.
std::vector<ResponseField> convolve_all(PlaneView img, std::span<const Stencil* const> stencils,
                                        ConvolutionStrategy strategy = ConvolutionStrategy::Auto);

/// w x w mean filter with replicate edges via running sums; equals
/// convolve(img, Stencil::box(w)) to rounding.
ResponseField box_filter(PlaneView img, int w);

}  // namespace vesselseg
