#include "vesselseg/kernel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "vesselseg/error.hpp"

namespace vesselseg {

Stencil::Stencil(int size, std::vector<double> weights) : size_(size), weights_(std::move(weights)) {
  if (size < 1 || size % 2 == 0) {
    throw InvalidArgument("Stencil: size must be odd and positive, got " + std::to_string(size));
  }
  if (weights_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw InvalidArgument("Stencil: expected " + std::to_string(size * size) + " weights");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw InvalidArgument("Stencil: non-finite weight");
  }
}

Stencil Stencil::box(int size) {
  if (size < 1 || size % 2 == 0) throw InvalidArgument("box stencil size must be odd");
  const double w = 1.0 / (static_cast<double>(size) * static_cast<double>(size));
  return {size, std::vector<double>(static_cast<std::size_t>(size) * size, w)};
}

Stencil Stencil::identity() { return {1, {1.0}}; }

double Stencil::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

void ScaleParams::validate() const {
  if (length < 3 || length % 2 == 0) {
    throw InvalidArgument("ScaleParams: length must be odd and >= 3, got " + std::to_string(length));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("ScaleParams: sigma must be > 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("ScaleParams: t must be > 0");
}

double gaussian_profile(double x, double sigma) {
  return std::exp(-x * x / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double gaussian_derivative(double x, double sigma) {
  return -x / (std::sqrt(2.0 * std::numbers::pi) * sigma * sigma * sigma) *
         std::exp(-x * x / (2.0 * sigma * sigma));
}

namespace {

double normalized_orientation(double theta_deg) {
  if (!(theta_deg >= 0.0 && theta_deg < 180.0)) {
    throw InvalidArgument("orientation must lie in [0, 180), got " + std::to_string(theta_deg));
  }
  return theta_deg;
}

struct Rotation {
  double c;
  double s;
};

// Exact values at the axis-aligned angles keep 0 and 90 degree kernels free of
// 1e-17 cross terms.
Rotation rotation(double theta_deg) {
  if (theta_deg == 0.0) return {1.0, 0.0};
  if (theta_deg == 90.0) return {0.0, 1.0};
  const double theta = theta_deg * std::numbers::pi / 180.0;
  return {std::cos(theta), std::sin(theta)};
}

bool in_support(const ScaleParams& p, double u, double v) {
  if (p.support == SupportRule::Modified) return true;
  const double half = static_cast<double>(p.length) / 2.0;
  return std::abs(u) <= p.t * p.sigma && std::abs(v) <= half;
}

// Samples the closed-form kernel at orientation theta. (u, v) is the
// inverse-rotated coordinate: u runs across the vessel, v along it.
Kernel sample(const ScaleParams& p, KernelKind kind, double theta_deg) {
  p.validate();
  const int r = p.length / 2;
  const auto [c, s] = rotation(theta_deg);

  std::vector<double> w(static_cast<std::size_t>(p.length) * p.length, 0.0);
  std::vector<char> inside(w.size(), 0);
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      const double u = x * c + y * s;
      const double v = -x * s + y * c;
      const auto i = static_cast<std::size_t>((y + r) * p.length + (x + r));
      if (!in_support(p, u, v)) continue;
      inside[i] = 1;
      w[i] = kind == KernelKind::MatchedFilter ? gaussian_profile(u, p.sigma)
                                               : gaussian_derivative(u, p.sigma);
    }
  }

  if (kind == KernelKind::MatchedFilter) {
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (inside[i]) { total += w[i]; ++n; }
    }
    const double mean = total / static_cast<double>(n);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (inside[i]) w[i] -= mean;
    }
  }
  return Kernel{Stencil(p.length, std::move(w)), kind, theta_deg, p};
}

}  // namespace

Kernel mf_kernel(const ScaleParams& p) { return sample(p, KernelKind::MatchedFilter, 0.0); }

Kernel fdog_kernel(const ScaleParams& p) { return sample(p, KernelKind::Fdog, 0.0); }

Kernel rotate_kernel(const Kernel& k, double theta_deg) {
  return sample(k.scale, k.kind, normalized_orientation(theta_deg));
}

std::vector<int> kernel_footprint(const Kernel& k) {
  const auto& p = k.scale;
  const int r = p.length / 2;
  const auto [c, s] = rotation(k.orientation_deg);
  std::vector<int> out(static_cast<std::size_t>(p.length) * p.length, 0);
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      out[static_cast<std::size_t>((y + r) * p.length + (x + r))] =
          in_support(p, x * c + y * s, -x * s + y * c) ? 1 : 0;
    }
  }
  return out;
}

std::vector<ScaleParams> default_scales() {
  return {ScaleParams{9, 1.0, 3.0}, ScaleParams{13, 1.5, 3.0}, ScaleParams{17, 2.0, 3.0}};
}

FilterBank build_filter_bank(std::span<const ScaleParams> scales, int n_orientations) {
  if (scales.empty()) throw InvalidArgument("build_filter_bank: no scales");
  if (n_orientations < 1) throw InvalidArgument("build_filter_bank: n_orientations must be >= 1");

  FilterBank bank;
  bank.scales.assign(scales.begin(), scales.end());
  for (int k = 0; k < n_orientations; ++k) {
    bank.orientations_deg.push_back(static_cast<double>(k) * 180.0 / n_orientations);
  }
  for (const auto& p : bank.scales) {
    const Kernel mf = mf_kernel(p);
    const Kernel fd = fdog_kernel(p);
    auto& mf_row = bank.mf.emplace_back();
    auto& fd_row = bank.fdog.emplace_back();
    for (double theta : bank.orientations_deg) {
      mf_row.push_back(rotate_kernel(mf, theta));
      fd_row.push_back(rotate_kernel(fd, theta));
    }
  }
  return bank;
}

}  // namespace vesselseg
