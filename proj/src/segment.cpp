#include "vesselseg/segment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vesselseg {

std::string_view to_string(OrientationPairing p) {
  return p == OrientationPairing::ArgmaxH ? "argmax_H" : "max_abs_D";
}

std::string_view to_string(EdgeNormalization n) {
  return n == EdgeNormalization::Abs ? "abs" : "signed";
}

OrientationPairing parse_orientation_pairing(std::string_view s) {
  if (s == "argmax_H") return OrientationPairing::ArgmaxH;
  if (s == "max_abs_D") return OrientationPairing::MaxAbsD;
  throw InvalidArgument("unknown orientation pairing '" + std::string(s) + "'");
}

EdgeNormalization parse_edge_normalization(std::string_view s) {
  if (s == "abs") return EdgeNormalization::Abs;
  if (s == "signed") return EdgeNormalization::Signed;
  throw InvalidArgument("unknown normalization '" + std::string(s) + "'");
}

void ThresholdParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("ThresholdParams: c must be > 0");
  if (w < 3 || w % 2 == 0) {
    throw InvalidArgument("ThresholdParams: w must be odd and >= 3, got " + std::to_string(w));
  }
}

ScaleResponse scale_response(const GrayImage& img, const FilterBank& bank, std::size_t scale_index,
                             OrientationPairing pairing, ConvolutionStrategy strategy) {
  if (scale_index >= bank.scale_count()) {
    throw InvalidArgument("scale_response: scale index " + std::to_string(scale_index) + " out of range");
  }
  const auto& mf = bank.mf[scale_index];
  const auto& fd = bank.fdog[scale_index];
  const std::size_t n = mf.size();

  std::vector<const Stencil*> stencils;
  stencils.reserve(2 * n);
  for (const auto& k : mf) stencils.push_back(&k.stencil);
  for (const auto& k : fd) stencils.push_back(&k.stencil);
  const auto responses = convolve_all(img.view(), stencils, strategy);

  const std::size_t pixels = img.size();
  std::vector<double> h(pixels);
  std::vector<double> d(pixels);
  std::vector<std::uint16_t> best(pixels, 0);
  for (std::size_t i = 0; i < pixels; ++i) {
    std::size_t arg = 0;
    double top = responses[0][i];
    for (std::size_t o = 1; o < n; ++o) {
      if (responses[o][i] > top) {
        top = responses[o][i];
        arg = o;
      }
    }
    std::size_t d_arg = arg;
    if (pairing == OrientationPairing::MaxAbsD) {
      for (std::size_t o = 0; o < n; ++o) {
        if (std::abs(responses[n + o][i]) > std::abs(responses[n + d_arg][i])) d_arg = o;
      }
    }
    h[i] = top;
    d[i] = responses[n + d_arg][i];
    best[i] = static_cast<std::uint16_t>(arg);
  }
  return {ResponseField(img.width(), img.height(), std::move(h)),
          ResponseField(img.width(), img.height(), std::move(d)),
          OrientationMap(img.width(), img.height(), std::move(best))};
}

double mean_over_mask(const ResponseField& h, const FovMask& mask) {
  require_same_shape(h, mask, "mean_over_mask");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (mask[i]) {
      sum += h[i];
      ++n;
    }
  }
  if (n == 0) throw InvalidArgument("empty field of view");
  return sum / static_cast<double>(n);
}

ResponseField edge_modulation(const ResponseField& d, const ThresholdParams& p, const FovMask& mask) {
  p.validate();
  require_same_shape(d, mask, "edge_modulation");
  if (count_true(mask.data()) == 0) throw InvalidArgument("edge_modulation: empty field of view");

  const ResponseField local = box_filter(d.view(), p.w);
  std::vector<double> a(local.data().begin(), local.data().end());
  if (p.normalization == EdgeNormalization::Abs) {
    for (double& v : a) v = std::abs(v);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!mask[i]) continue;
    lo = std::min(lo, a[i]);
    hi = std::max(hi, a[i]);
  }
  const double range = hi - lo;
  for (double& v : a) v = range > 0.0 ? std::clamp((v - lo) / range, 0.0, 1.0) : 0.0;
  return {d.width(), d.height(), std::move(a)};
}

ResponseField threshold_field(const ResponseField& d, const ResponseField& h, const ThresholdParams& p,
                              const FovMask& mask) {
  require_same_shape(d, h, "threshold_field");
  const ResponseField mod = edge_modulation(d, p, mask);
  const double reference = p.c * mean_over_mask(h, mask);
  std::vector<double> t(mod.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (1.0 + mod[i]) * reference;
  return {d.width(), d.height(), std::move(t)};
}

BinaryMap binarize(const ResponseField& h, const ResponseField& t) {
  require_same_shape(h, t, "binarize");
  std::vector<std::uint8_t> out(h.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = h[i] >= t[i];
  return {h.width(), h.height(), std::move(out)};
}

std::vector<PreparedScale> prepare_scales(const GrayImage& img, const FilterBank& bank,
                                          const ThresholdParams& tp, const FovMask& mask,
                                          const SegmentOptions& options) {
  tp.validate();
  require_same_shape(img, mask, "prepare_scales");
  if (bank.scale_count() == 0) throw InvalidArgument("prepare_scales: empty filter bank");
  std::vector<PreparedScale> out;
  out.reserve(bank.scale_count());
  for (std::size_t s = 0; s < bank.scale_count(); ++s) {
    PreparedScale prepared;
    prepared.response = scale_response(img, bank, s, options.pairing, options.strategy);
    prepared.modulation = edge_modulation(prepared.response.d, tp, mask);
    prepared.mean_h = mean_over_mask(prepared.response.h, mask);
    out.push_back(std::move(prepared));
  }
  return out;
}

BinaryMap binarize_scale(const PreparedScale& scale, double c) {
  const auto& h = scale.response.h;
  const double reference = c * scale.mean_h;
  std::vector<std::uint8_t> out(h.size(), 0);
  if (reference > kMinReferenceThreshold) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = h[i] >= (1.0 + scale.modulation[i]) * reference;
  }
  return {h.width(), h.height(), std::move(out)};
}

BinaryMap fuse_scales(std::span<const PreparedScale> scales, double c, const FovMask& mask) {
  if (scales.empty()) throw InvalidArgument("fuse_scales: no scales");
  std::vector<std::uint8_t> fused(mask.size(), 0);
  for (const auto& s : scales) {
    const BinaryMap m = binarize_scale(s, c);
    require_same_shape(m, mask, "fuse_scales");
    for (std::size_t i = 0; i < fused.size(); ++i) fused[i] |= m[i];
  }
  for (std::size_t i = 0; i < fused.size(); ++i) fused[i] &= mask[i];
  return {mask.width(), mask.height(), std::move(fused)};
}

BinaryMap segment_multiscale(const GrayImage& img, const FilterBank& bank, const ThresholdParams& tp,
                             const FovMask& mask, const SegmentOptions& options) {
  const auto scales = prepare_scales(img, bank, tp, mask, options);
  return fuse_scales(scales, tp.c, mask);
}

}  // namespace vesselseg
