#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vesselseg/convolution.hpp"

using namespace vesselseg;
using vesselseg::testing::naive_correlate;
using vesselseg::testing::random_gray;

namespace {

Stencil random_stencil(int size, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  for (auto& v : w) v = u(rng);
  return Stencil(size, std::move(w));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

class ConvolutionStrategies : public ::testing::TestWithParam<ConvolutionStrategy> {};

TEST_P(ConvolutionStrategies, MatchesNaiveOracleOnRandomPairs) {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 32);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    const int max_k = std::min(w, h);
    std::uniform_int_distribution<int> half(0, (max_k - 1) / 2);
    const Stencil k = random_stencil(2 * half(rng) + 1, rng);
    const GrayImage img = random_gray(w, h, rng);
    const auto got = convolve(img.view(), k, GetParam());
    const auto want = naive_correlate(img.view(), k);
    ASSERT_EQ(got.width(), w);
    ASSERT_EQ(got.height(), h);
    EXPECT_LE(max_abs_diff(got.data(), want), 1e-9) << "trial " << trial << " " << w << "x" << h << " k=" << k.size();
  }
}

TEST_P(ConvolutionStrategies, IdentityStencilReturnsImage) {
  std::mt19937 rng(7);
  const GrayImage img = random_gray(19, 11, rng);
  const auto out = convolve(img.view(), Stencil::identity(), GetParam());
  EXPECT_LE(max_abs_diff(out.data(), img.data()), 1e-12);
}

TEST_P(ConvolutionStrategies, ZeroMeanKernelAnnihilatesConstants) {
  const GrayImage img(40, 30, 0.37);
  const auto bank = build_filter_bank(default_scales(), 12);
  for (const auto& row : bank.mf) {
    for (const auto& k : row) {
      const auto out = convolve(img.view(), k, GetParam());
      for (double v : out.data()) ASSERT_NEAR(v, 0.0, 1e-10);
    }
  }
}

TEST_P(ConvolutionStrategies, ConvolveAllEqualsIndividualCalls) {
  std::mt19937 rng(11);
  const GrayImage img = random_gray(27, 23, rng);
  const Stencil a = random_stencil(3, rng);
  const Stencil b = random_stencil(9, rng);
  const Stencil* list[] = {&a, &b};
  const auto all = convolve_all(img.view(), list, GetParam());
  ASSERT_EQ(all.size(), 2u);
  // The shared transform may use a larger padded size, so compare to rounding.
  EXPECT_LE(max_abs_diff(all[0].data(), convolve(img.view(), a, GetParam()).data()), 1e-12);
  EXPECT_LE(max_abs_diff(all[1].data(), convolve(img.view(), b, GetParam()).data()), 1e-12);
}

TEST_P(ConvolutionStrategies, RejectsStencilLargerThanImage) {
  const GrayImage img(8, 20, 0.5);
  EXPECT_THROW(convolve(img.view(), Stencil::box(9), GetParam()), InvalidArgument);
}

INSTANTIATE_TEST_SUITE_P(All, ConvolutionStrategies,
                         ::testing::Values(ConvolutionStrategy::Auto, ConvolutionStrategy::Direct,
                                           ConvolutionStrategy::Fft),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Convolution, DirectSumsInOracleOrder) {
  std::mt19937 rng(3);
  const GrayImage img = random_gray(21, 17, rng);
  const Stencil k = random_stencil(7, rng);
  const auto out = convolve(img.view(), k, ConvolutionStrategy::Direct);
  const auto want = naive_correlate(img.view(), k);
  for (std::size_t i = 0; i < want.size(); ++i) ASSERT_EQ(out[i], want[i]);
}

TEST(BoxFilter, MatchesBoxStencil) {
  std::mt19937 rng(5);
  const GrayImage img = random_gray(45, 38, rng);
  for (int w : {3, 7, 31}) {
    const auto fast = box_filter(img.view(), w);
    const auto want = naive_correlate(img.view(), Stencil::box(w));
    EXPECT_LE(max_abs_diff(fast.data(), want), 1e-12) << "w=" << w;
  }
}

TEST(BoxFilter, WindowLargerThanImageUsesReplicatedEdges) {
  std::mt19937 rng(9);
  const GrayImage img = random_gray(10, 6, rng);
  const auto fast = box_filter(img.view(), 31);
  const auto want = naive_correlate(img.view(), Stencil::box(31));
  EXPECT_LE(max_abs_diff(fast.data(), want), 1e-12);
}

TEST(ConvolutionStrategyNames, RoundTrip) {
  for (auto s : {ConvolutionStrategy::Auto, ConvolutionStrategy::Direct, ConvolutionStrategy::Fft}) {
    EXPECT_EQ(parse_convolution_strategy(to_string(s)), s);
  }
  EXPECT_THROW(parse_convolution_strategy("winograd"), InvalidArgument);
}
