#include "vesselseg/io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace vesselseg::io {

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

bool is_gif(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), "GIF8", 4) == 0;
}

Rgb8 from_mat(const cv::Mat& mat) {
  cv::Mat m8;
  if (mat.depth() == CV_8U) {
    m8 = mat;
  } else if (mat.depth() == CV_16U) {
    mat.convertTo(m8, CV_8U, 1.0 / 257.0);
  } else {
    throw DecodeError("unsupported sample depth");
  }
  const int channels = m8.channels();
  if (channels != 1 && channels != 3 && channels != 4) throw DecodeError("unsupported channel count");

  Rgb8 out{m8.cols, m8.rows, std::vector<std::uint8_t>(static_cast<std::size_t>(m8.cols) * m8.rows * 3)};
  for (int y = 0; y < m8.rows; ++y) {
    const std::uint8_t* src = m8.ptr<std::uint8_t>(y);
    std::uint8_t* dst = out.pixels.data() + static_cast<std::size_t>(y) * m8.cols * 3;
    for (int x = 0; x < m8.cols; ++x) {
      if (channels == 1) {
        dst[3 * x] = dst[3 * x + 1] = dst[3 * x + 2] = src[x];
      } else {
        // OpenCV stores BGR(A).
        dst[3 * x] = src[channels * x + 2];
        dst[3 * x + 1] = src[channels * x + 1];
        dst[3 * x + 2] = src[channels * x];
      }
    }
  }
  return out;
}

template <typename Tag>
Raster<Tag> read_bits(const std::filesystem::path& path) {
  const Rgb8 img = read_raster(path);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const int sum = img.pixels[3 * i] + img.pixels[3 * i + 1] + img.pixels[3 * i + 2];
    bits[i] = sum > 3 * 127;
  }
  return {img.width, img.height, std::move(bits)};
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_mat(const std::filesystem::path& path, const cv::Mat& mat) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

void write_bits(const std::filesystem::path& path, int w, int h, std::span<const std::uint8_t> bits) {
  cv::Mat mat(h, w, CV_8UC1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      mat.at<std::uint8_t>(y, x) = bits[static_cast<std::size_t>(y) * w + x] ? 255 : 0;
    }
  }
  write_mat(path, mat);
}

}  // namespace

Rgb8 read_raster(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.empty()) throw DecodeError("empty file: " + path.string());
  try {
    if (is_gif(bytes)) return decode_gif(bytes);
    cv::Mat decoded;
    try {
      decoded = cv::imdecode(cv::Mat(1, static_cast<int>(bytes.size()), CV_8UC1,
                                     const_cast<std::uint8_t*>(bytes.data())),
                             cv::IMREAD_UNCHANGED);
    } catch (const cv::Exception& e) {
      throw DecodeError(e.what());
    }
    if (decoded.empty()) throw DecodeError("unrecognized or corrupt raster");
    return from_mat(decoded);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

RgbImage read_rgb(const std::filesystem::path& path) {
  const Rgb8 img = read_raster(path);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<double> r(n), g(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = img.pixels[3 * i] / 255.0;
    g[i] = img.pixels[3 * i + 1] / 255.0;
    b[i] = img.pixels[3 * i + 2] / 255.0;
  }
  return {GrayImage(img.width, img.height, std::move(r)), GrayImage(img.width, img.height, std::move(g)),
          GrayImage(img.width, img.height, std::move(b))};
}

FovMask read_mask(const std::filesystem::path& path) { return read_bits<FovTag>(path); }

BinaryMap read_binary(const std::filesystem::path& path) { return read_bits<BinaryTag>(path); }

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  cv::Mat mat(img.height(), img.width(), CV_8UC1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) mat.at<std::uint8_t>(y, x) = to_byte(img(x, y));
  }
  write_mat(path, mat);
}

void write_png(const std::filesystem::path& path, const BinaryMap& map) {
  write_bits(path, map.width(), map.height(), map.data());
}

void write_png(const std::filesystem::path& path, const FovMask& mask) {
  write_bits(path, mask.width(), mask.height(), mask.data());
}

void write_rgb_png(const std::filesystem::path& path, const RgbImage& img) {
  cv::Mat mat(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      mat.at<cv::Vec3b>(y, x) = {to_byte(img.blue()(x, y)), to_byte(img.green()(x, y)), to_byte(img.red()(x, y))};
    }
  }
  write_mat(path, mat);
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

GrayImage visualize(const ResponseField& field) { return normalize_minmax(field); }

RgbImage overlay(const RgbImage& img, const BinaryMap& vessels, double alpha) {
  require_same_shape(img, vessels, "overlay");
  const std::size_t n = vessels.size();
  std::vector<double> r(n), g(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = vessels[i] ? alpha : 0.0;
    r[i] = std::min(1.0, (1.0 - a) * img.red()[i] + a);
    g[i] = (1.0 - a) * img.green()[i];
    b[i] = (1.0 - a) * img.blue()[i];
  }
  const int w = img.width();
  const int h = img.height();
  return {GrayImage(w, h, std::move(r)), GrayImage(w, h, std::move(g)), GrayImage(w, h, std::move(b))};
}

}  // namespace vesselseg::io
