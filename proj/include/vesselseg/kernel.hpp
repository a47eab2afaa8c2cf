#pragma once

// Matched-filter (MF) and first-derivative-of-Gaussian (FDOG) kernels.
//
// Kernels are sampled at integer offsets on an L x L square. The vessel axis
// of an unrotated kernel is the y-axis, so a 0 degree kernel responds to
// vertical vessels and the Gaussian profile runs along x. Rotated kernels are
// re-evaluated from the closed form at the inverse-rotated coordinate rather
// than resampled from the unrotated grid.

#include <span>
#include <vector>

#include "vesselseg/error.hpp"

namespace vesselseg {

/// Odd-sized square stencil, row-major, indexed by offsets in [-radius, radius].
class Stencil {
 public:
  Stencil() = default;
  Stencil(int size, std::vector<double> weights);

  /// w x w box of weight 1/w^2.
  static Stencil box(int size);
  static Stencil identity();

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int radius() const { return size_ / 2; }
  [[nodiscard]] double at(int dx, int dy) const {
    return weights_[static_cast<std::size_t>((dy + radius()) * size_ + (dx + radius()))];
  }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double sum() const;

  bool operator==(const Stencil&) const = default;

 private:
  int size_ = 0;
  std::vector<double> weights_;
};

/// Which region of the square carries the profile.
enum class SupportRule {
  /// |x| <= L/2: the full square, independent of sigma.
  Modified,
  /// |x| <= t * sigma, |y| <= L/2: the classic matched-filter support.
  Original,
};

struct ScaleParams {
  int length = 9;      ///< kernel side, odd, >= 3
  double sigma = 1.0;  ///< Gaussian scale in pixels, > 0
  double t = 3.0;      ///< confidence-interval factor, only used by SupportRule::Original
  SupportRule support = SupportRule::Modified;

  /// Throws InvalidArgument unless length is odd and >= 3 and sigma, t > 0.
  void validate() const;
  bool operator==(const ScaleParams&) const = default;
};

enum class KernelKind { MatchedFilter, Fdog };

struct Kernel {
  Stencil stencil;
  KernelKind kind = KernelKind::MatchedFilter;
  double orientation_deg = 0.0;
  ScaleParams scale;
};

/// Gaussian profile 1/(sqrt(2 pi) sigma) exp(-x^2 / (2 sigma^2)).
double gaussian_profile(double x, double sigma);

/// -x/(sqrt(2 pi) sigma^3) exp(-x^2 / (2 sigma^2)), the x-derivative of gaussian_profile.
double gaussian_derivative(double x, double sigma);

/// Zero-mean MF kernel. The subtracted mean is the discrete mean of the
/// Gaussian term over the kernel's support, so the weights sum to zero.
Kernel mf_kernel(const ScaleParams& p);

/// FDOG kernel; odd in x, so its weights sum to zero.
Kernel fdog_kernel(const ScaleParams& p);

/// Rebuilds `k` at orientation `theta_deg` in [0, 180). MF kernels get their
/// mean re-subtracted over the rotated support.
Kernel rotate_kernel(const Kernel& k, double theta_deg);

/// Per-pixel membership of the kernel's support (1 inside, 0 outside).
std::vector<int> kernel_footprint(const Kernel& k);

struct FilterBank {
  std::vector<ScaleParams> scales;
  std::vector<double> orientations_deg;
  /// mf[s][o] and fdog[s][o] share (scale s, orientation o).
  std::vector<std::vector<Kernel>> mf;
  std::vector<std::vector<Kernel>> fdog;

  [[nodiscard]] std::size_t scale_count() const { return scales.size(); }
  [[nodiscard]] std::size_t orientation_count() const { return orientations_deg.size(); }
};

/// Scales [(9,1), (13,1.5), (17,2)] with t = 3.
std::vector<ScaleParams> default_scales();

/// n_orientations MF/FDOG pairs per scale at k * 180 / n_orientations degrees.
FilterBank build_filter_bank(std::span<const ScaleParams> scales, int n_orientations);

}  // namespace vesselseg
