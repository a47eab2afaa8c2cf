#pragma once

// Synthetic test images: analytic ridges and steps, and small fundus-like
// phantoms that can be written out in the DRIVE directory layout.

#include <cstdint>
#include <filesystem>
#include <string>

#include "vesselseg/dataset.hpp"
#include "vesselseg/image.hpp"

namespace vesselseg::testing {

/// Vertical Gaussian ridge: background + amplitude * exp(-(x - center)^2 / (2 sigma^2)).
GrayImage vertical_ridge(int width, int height, double center, double sigma, double amplitude,
                         double background = 0.0);

/// background for x < edge, background + amplitude for x >= edge.
GrayImage vertical_step(int width, int height, int edge, double amplitude, double background = 0.0);

/// 90 degree counter-clockwise rotation of a square raster: out(y, n-1-x) = in(x, y).
GrayImage rotate90(const GrayImage& img);

struct FundusPhantom {
  RgbImage image;
  FovMask mask;
  BinaryMap truth;
};

/// Circular field of view with a vignetted reddish background and a tree of
/// dark Gaussian-profile vessels in the green channel. Fully determined by seed.
FundusPhantom make_fundus(int size, std::uint32_t seed);

/// Writes `count` phantoms as <root>/<split>/{images,mask,1st_manual,2nd_manual}
/// with DRIVE file names. Images are PNG, masks and manual maps GIF.
void write_drive_layout(const std::filesystem::path& root, Split split, int count, int size,
                        std::uint32_t seed = 1);

/// Unique empty directory under the system temp dir.
std::filesystem::path make_temp_dir(const std::string& prefix);

}  // namespace vesselseg::testing
