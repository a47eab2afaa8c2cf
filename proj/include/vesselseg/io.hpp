#pragma once

// Raster decode/encode. PNG and TIFF go through OpenCV's codecs; GIF (the
// format of DRIVE's masks and manual segmentations) uses the decoder in gif.cpp.
// The format is sniffed from the file's leading bytes, not its extension.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vesselseg/image.hpp"

namespace vesselseg::io {

/// 8-bit interleaved RGB, the common currency between codecs.
struct Rgb8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  ///< r, g, b per pixel, row-major
};

/// Decodes the first frame of a GIF87a/89a stream. Throws DecodeError.
Rgb8 decode_gif(std::span<const std::uint8_t> bytes);

/// Encodes an 8-bit grayscale GIF (256-entry gray palette).
std::vector<std::uint8_t> encode_gray_gif(int width, int height, std::span<const std::uint8_t> gray);

/// Reads PNG, TIFF or GIF. Throws IoError if unreadable, DecodeError if malformed.
Rgb8 read_raster(const std::filesystem::path& path);

/// RGB image scaled to [0,1] (8-bit channels divided by 255).
RgbImage read_rgb(const std::filesystem::path& path);

/// Binary raster: a pixel is set when its luminance exceeds half range.
FovMask read_mask(const std::filesystem::path& path);
BinaryMap read_binary(const std::filesystem::path& path);

/// 8-bit grayscale PNG; values in [0,1] are scaled by 255 and rounded.
void write_png(const std::filesystem::path& path, const GrayImage& img);
/// Set pixels written as 255, others 0.
void write_png(const std::filesystem::path& path, const BinaryMap& map);
void write_png(const std::filesystem::path& path, const FovMask& mask);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& img);

/// Writes any byte buffer, throwing IoError on failure.
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Linear rescale of a response field to [0,1] for viewing.
GrayImage visualize(const ResponseField& field);

/// Original image with detected pixels tinted red at fixed alpha.
RgbImage overlay(const RgbImage& img, const BinaryMap& vessels, double alpha = 0.6);

}  // namespace vesselseg::io
