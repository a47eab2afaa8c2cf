#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "vesselseg/kernel.hpp"

using namespace vesselseg;

namespace {

double abs_max(std::span<const double> w) {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(MfKernel, CenterValueForNineByNineUnitSigma) {
  const Kernel k = mf_kernel({9, 1.0});
  EXPECT_EQ(k.stencil.size(), 9);
  EXPECT_NEAR(k.stencil.at(0, 0), 0.2878, 5e-4);
}

TEST(MfKernel, RowsAreIdenticalAndProfileIsEven) {
  const Kernel k = mf_kernel({13, 1.5});
  const int r = k.stencil.radius();
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      EXPECT_DOUBLE_EQ(k.stencil.at(x, y), k.stencil.at(x, 0));
      EXPECT_DOUBLE_EQ(k.stencil.at(x, y), k.stencil.at(-x, y));
    }
  }
}

TEST(MfKernel, RejectsBadParameters) {
  EXPECT_THROW(mf_kernel({8, 1.0}), InvalidArgument);
  EXPECT_THROW(mf_kernel({1, 1.0}), InvalidArgument);
  EXPECT_THROW(mf_kernel({9, 0.0}), InvalidArgument);
  EXPECT_THROW(mf_kernel({9, -1.0}), InvalidArgument);
}

TEST(FdogKernel, PeakMagnitudeAtUnitOffset) {
  const Kernel k = fdog_kernel({9, 1.0});
  const double peak = abs_max(k.stencil.weights());
  EXPECT_NEAR(peak, 0.2420, 5e-4);
  EXPECT_DOUBLE_EQ(std::abs(k.stencil.at(1, 0)), peak);
  EXPECT_DOUBLE_EQ(std::abs(k.stencil.at(-1, 3)), peak);
}

TEST(FdogKernel, OddInXAndZeroOnAxis) {
  const Kernel k = fdog_kernel({17, 2.0});
  const int r = k.stencil.radius();
  for (int y = -r; y <= r; ++y) {
    EXPECT_EQ(k.stencil.at(0, y), 0.0);
    for (int x = 1; x <= r; ++x) EXPECT_DOUBLE_EQ(k.stencil.at(x, y), -k.stencil.at(-x, y));
  }
}

TEST(FdogKernel, MatchesFiniteDifferenceOfProfile) {
  const double h = 1e-5;
  for (double sigma : {1.0, 1.5, 2.0}) {
    for (double x = -6.0; x <= 6.0; x += 0.37) {
      const double fd = (gaussian_profile(x + h, sigma) - gaussian_profile(x - h, sigma)) / (2 * h);
      EXPECT_NEAR(gaussian_derivative(x, sigma), fd, 1e-8) << "sigma=" << sigma << " x=" << x;
    }
  }
}

TEST(RotateKernel, ZeroDegreesIsIdentity) {
  const Kernel k = mf_kernel({9, 1.0});
  EXPECT_EQ(rotate_kernel(k, 0.0).stencil, k.stencil);
  const Kernel f = fdog_kernel({13, 1.5});
  EXPECT_EQ(rotate_kernel(f, 0.0).stencil, f.stencil);
}

TEST(RotateKernel, NinetyDegreesSwapsAxes) {
  const Kernel k = rotate_kernel(mf_kernel({9, 1.0}), 90.0);
  const int r = k.stencil.radius();
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) EXPECT_DOUBLE_EQ(k.stencil.at(x, y), k.stencil.at(0, y));
  }
  EXPECT_GT(k.stencil.at(0, 0), k.stencil.at(0, 2));
}

TEST(RotateKernel, FortyFiveDegreeMfStaysZeroMean) {
  const Kernel k = rotate_kernel(mf_kernel({9, 1.0}), 45.0);
  EXPECT_NEAR(k.stencil.sum(), 0.0, 1e-10);
  EXPECT_DOUBLE_EQ(k.orientation_deg, 45.0);
}

TEST(RotateKernel, RejectsOutOfRangeAngles) {
  const Kernel k = mf_kernel({9, 1.0});
  EXPECT_THROW(rotate_kernel(k, 180.0), InvalidArgument);
  EXPECT_THROW(rotate_kernel(k, -1.0), InvalidArgument);
  EXPECT_THROW(rotate_kernel(k, std::nan("")), InvalidArgument);
}

TEST(FilterBank, DefaultBankShapeAndAngles) {
  const auto scales = default_scales();
  const FilterBank bank = build_filter_bank(scales, 12);
  ASSERT_EQ(bank.scale_count(), 3u);
  ASSERT_EQ(bank.orientation_count(), 12u);
  std::size_t total = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    total += bank.mf[s].size() + bank.fdog[s].size();
    for (std::size_t o = 0; o < 12; ++o) {
      EXPECT_DOUBLE_EQ(bank.orientations_deg[o], 15.0 * static_cast<double>(o));
      EXPECT_EQ(bank.mf[s][o].stencil.size(), scales[s].length);
    }
  }
  EXPECT_EQ(total, 72u);
}

TEST(FilterBank, SingleOrientationIsUnrotatedPair) {
  const ScaleParams p{9, 1.0};
  const FilterBank bank = build_filter_bank(std::span(&p, 1), 1);
  ASSERT_EQ(bank.mf.size(), 1u);
  ASSERT_EQ(bank.mf[0].size(), 1u);
  EXPECT_EQ(bank.mf[0][0].stencil, mf_kernel(p).stencil);
  EXPECT_EQ(bank.fdog[0][0].stencil, fdog_kernel(p).stencil);
}

TEST(FilterBank, RejectsEmptyInputs) {
  const auto scales = default_scales();
  EXPECT_THROW(build_filter_bank(scales, 0), InvalidArgument);
  EXPECT_THROW(build_filter_bank(std::span<const ScaleParams>{}, 12), InvalidArgument);
}

// Property sweep over every kernel of the default bank.
TEST(FilterBank, EveryKernelIsZeroSum) {
  const auto scales = default_scales();
  const FilterBank bank = build_filter_bank(scales, 12);
  for (std::size_t s = 0; s < bank.scale_count(); ++s) {
    for (std::size_t o = 0; o < bank.orientation_count(); ++o) {
      EXPECT_NEAR(bank.mf[s][o].stencil.sum(), 0.0, 1e-10) << "mf s=" << s << " o=" << o;
      EXPECT_NEAR(bank.fdog[s][o].stencil.sum(), 0.0, 1e-10) << "fdog s=" << s << " o=" << o;
    }
  }
}

TEST(FilterBank, FdogIsPointAntisymmetricAtEveryOrientation) {
  const auto scales = default_scales();
  const FilterBank bank = build_filter_bank(scales, 12);
  for (std::size_t s = 0; s < bank.scale_count(); ++s) {
    for (const auto& k : bank.fdog[s]) {
      const int r = k.stencil.radius();
      for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x) EXPECT_NEAR(k.stencil.at(x, y), -k.stencil.at(-x, -y), 1e-15);
      }
    }
  }
}

TEST(Footprint, ModifiedSupportDoesNotDependOnSigma) {
  for (int length : {9, 13, 17}) {
    const auto base = kernel_footprint(mf_kernel({length, 0.5}));
    EXPECT_EQ(std::accumulate(base.begin(), base.end(), 0), length * length);
    for (double sigma : {1.0, 1.5, 2.0, 3.0}) {
      EXPECT_EQ(kernel_footprint(mf_kernel({length, sigma})), base);
      EXPECT_EQ(kernel_footprint(rotate_kernel(mf_kernel({length, sigma}), 30.0)), base);
    }
  }
}

TEST(Footprint, OriginalSupportShrinksWithSigma) {
  const auto narrow = kernel_footprint(mf_kernel({17, 1.0, 3.0, SupportRule::Original}));
  const auto wide = kernel_footprint(mf_kernel({17, 2.0, 3.0, SupportRule::Original}));
  EXPECT_LT(std::accumulate(narrow.begin(), narrow.end(), 0), std::accumulate(wide.begin(), wide.end(), 0));
  const Kernel k = mf_kernel({17, 1.0, 3.0, SupportRule::Original});
  EXPECT_NEAR(k.stencil.sum(), 0.0, 1e-10);
  EXPECT_EQ(k.stencil.at(5, 0), 0.0);
}
