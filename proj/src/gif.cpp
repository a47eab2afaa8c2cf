// GIF87a/89a codec: first-frame decoder and a grayscale encoder.

#include <array>
#include <cstring>
#include <string>

#include "vesselseg/io.hpp"

namespace vesselseg::io {

namespace {

constexpr int kMaxCodes = 4096;
constexpr int kMaxCodeSize = 12;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    if (pos_ >= bytes_.size()) throw DecodeError("gif: unexpected end of stream");
    return bytes_[pos_++];
  }
  int u16() {
    const int lo = u8();
    return lo | (u8() << 8);
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw DecodeError("gif: unexpected end of stream");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  // Concatenated payload of a run of data sub-blocks.
  std::vector<std::uint8_t> sub_blocks() {
    std::vector<std::uint8_t> out;
    for (std::uint8_t len = u8(); len != 0; len = u8()) {
      auto s = take(len);
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<std::uint8_t>& data) : data_(data) {}

  // Returns -1 when the stream runs out.
  int read(int bits) {
    while (held_ < bits) {
      if (pos_ >= data_.size()) return -1;
      acc_ |= static_cast<std::uint32_t>(data_[pos_++]) << held_;
      held_ += 8;
    }
    const int v = static_cast<int>(acc_ & ((1u << bits) - 1u));
    acc_ >>= bits;
    held_ -= bits;
    return v;
  }

 private:
  const std::vector<std::uint8_t>& data_;
  std::size_t pos_ = 0;
  std::uint32_t acc_ = 0;
  int held_ = 0;
};

std::vector<std::uint8_t> lzw_decode(const std::vector<std::uint8_t>& data, int min_code_size,
                                     std::size_t pixel_count) {
  if (min_code_size < 1 || min_code_size > 11) {
    throw DecodeError("gif: invalid LZW minimum code size " + std::to_string(min_code_size));
  }
  const int clear = 1 << min_code_size;
  const int eoi = clear + 1;

  std::array<std::uint16_t, kMaxCodes> prefix{};
  std::array<std::uint8_t, kMaxCodes> suffix{};
  std::array<std::uint8_t, kMaxCodes> first{};
  for (int i = 0; i < clear; ++i) {
    suffix[i] = static_cast<std::uint8_t>(i);
    first[i] = static_cast<std::uint8_t>(i);
  }

  std::vector<std::uint8_t> out;
  out.reserve(pixel_count);
  std::vector<std::uint8_t> stack;
  stack.reserve(kMaxCodes);

  auto emit = [&](int code) {
    stack.clear();
    while (code >= clear) {
      stack.push_back(suffix[code]);
      code = prefix[code];
    }
    stack.push_back(static_cast<std::uint8_t>(code));
    out.insert(out.end(), stack.rbegin(), stack.rend());
  };

  BitReader bits(data);
  int code_size = min_code_size + 1;
  int next = eoi + 1;
  int prev = -1;
  while (out.size() < pixel_count) {
    const int code = bits.read(code_size);
    if (code < 0) break;
    if (code == clear) {
      code_size = min_code_size + 1;
      next = eoi + 1;
      prev = -1;
      continue;
    }
    if (code == eoi) break;
    if (prev < 0) {
      if (code >= clear) throw DecodeError("gif: first code after clear is not a literal");
      emit(code);
      prev = code;
      continue;
    }
    std::uint8_t head = 0;
    if (code < next) {
      emit(code);
      head = first[code];
    } else if (code == next) {
      emit(prev);
      out.push_back(first[prev]);
      head = first[prev];
    } else {
      throw DecodeError("gif: LZW code " + std::to_string(code) + " out of sequence");
    }
    if (next < kMaxCodes) {
      prefix[next] = static_cast<std::uint16_t>(prev);
      suffix[next] = head;
      first[next] = first[prev];
      ++next;
      if (next == (1 << code_size) && code_size < kMaxCodeSize) ++code_size;
    }
    prev = code;
  }
  if (out.size() < pixel_count) {
    throw DecodeError("gif: image data ends after " + std::to_string(out.size()) + " of " +
                      std::to_string(pixel_count) + " pixels");
  }
  out.resize(pixel_count);
  return out;
}

std::vector<std::uint8_t> read_color_table(ByteReader& in, int packed) {
  const std::size_t entries = std::size_t{2} << (packed & 0x07);
  auto s = in.take(entries * 3);
  return {s.begin(), s.end()};
}

// Row order of an interlaced frame.
std::vector<int> row_order(int height, bool interlaced) {
  std::vector<int> rows;
  rows.reserve(static_cast<std::size_t>(height));
  if (!interlaced) {
    for (int y = 0; y < height; ++y) rows.push_back(y);
    return rows;
  }
  constexpr int starts[] = {0, 4, 2, 1};
  constexpr int steps[] = {8, 8, 4, 2};
  for (int pass = 0; pass < 4; ++pass) {
    for (int y = starts[pass]; y < height; y += steps[pass]) rows.push_back(y);
  }
  return rows;
}

}  // namespace

Rgb8 decode_gif(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto sig = in.take(6);
  if (std::memcmp(sig.data(), "GIF87a", 6) != 0 && std::memcmp(sig.data(), "GIF89a", 6) != 0) {
    throw DecodeError("gif: bad signature");
  }
  Rgb8 canvas;
  canvas.width = in.u16();
  canvas.height = in.u16();
  const int packed = in.u8();
  const int background = in.u8();
  in.u8();  // aspect ratio
  if (canvas.width <= 0 || canvas.height <= 0) throw DecodeError("gif: empty logical screen");

  std::vector<std::uint8_t> global;
  if (packed & 0x80) global = read_color_table(in, packed);

  canvas.pixels.assign(static_cast<std::size_t>(canvas.width) * canvas.height * 3, 0);
  if (!global.empty() && static_cast<std::size_t>(background) * 3 + 2 < global.size()) {
    for (std::size_t i = 0; i < canvas.pixels.size(); i += 3) {
      std::copy_n(global.begin() + background * 3, 3, canvas.pixels.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  while (true) {
    const std::uint8_t block = in.u8();
    if (block == 0x21) {
      in.u8();  // extension label
      in.sub_blocks();
    } else if (block == 0x2C) {
      const int left = in.u16();
      const int top = in.u16();
      const int w = in.u16();
      const int h = in.u16();
      const int frame_packed = in.u8();
      std::vector<std::uint8_t> local;
      if (frame_packed & 0x80) local = read_color_table(in, frame_packed);
      const auto& table = local.empty() ? global : local;
      const int min_code_size = in.u8();
      const auto data = in.sub_blocks();
      const auto indices = lzw_decode(data, min_code_size, static_cast<std::size_t>(w) * h);
      const auto rows = row_order(h, (frame_packed & 0x40) != 0);

      for (int r = 0; r < h; ++r) {
        const int y = top + rows[r];
        if (y >= canvas.height) continue;
        for (int x = 0; x < w; ++x) {
          const int cx = left + x;
          if (cx >= canvas.width) continue;
          const std::uint8_t idx = indices[static_cast<std::size_t>(r) * w + x];
          auto* px = canvas.pixels.data() + (static_cast<std::size_t>(y) * canvas.width + cx) * 3;
          if (static_cast<std::size_t>(idx) * 3 + 2 < table.size()) {
            std::copy_n(table.begin() + idx * 3, 3, px);
          } else if (table.empty()) {
            px[0] = px[1] = px[2] = idx;
          } else {
            throw DecodeError("gif: color index " + std::to_string(idx) + " outside palette");
          }
        }
      }
      return canvas;
    } else if (block == 0x3B) {
      throw DecodeError("gif: stream contains no image");
    } else {
      throw DecodeError("gif: unknown block type " + std::to_string(block));
    }
  }
}

std::vector<std::uint8_t> encode_gray_gif(int width, int height, std::span<const std::uint8_t> gray) {
  if (width <= 0 || height <= 0 || width > 0xFFFF || height > 0xFFFF) {
    throw InvalidArgument("gif: dimensions out of range");
  }
  if (gray.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionMismatch("gif: pixel count does not match dimensions");
  }
  std::vector<std::uint8_t> out;
  auto put16 = [&](int v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  };
  const char sig[] = "GIF89a";
  out.insert(out.end(), sig, sig + 6);
  put16(width);
  put16(height);
  out.push_back(0xF7);  // global table, 8-bit color resolution, 256 entries
  out.push_back(0);
  out.push_back(0);
  for (int i = 0; i < 256; ++i) {
    for (int c = 0; c < 3; ++c) out.push_back(static_cast<std::uint8_t>(i));
  }
  out.push_back(0x2C);
  put16(0);
  put16(0);
  put16(width);
  put16(height);
  out.push_back(0);

  // Literal-only LZW at a fixed 9-bit width: a clear code is sent before the
  // decoder's table would grow past 511 entries.
  constexpr int kMinCodeSize = 8;
  constexpr int kClear = 256;
  constexpr int kEoi = 257;
  constexpr int kLiteralsPerClear = 250;
  std::vector<std::uint8_t> lzw;
  std::uint32_t acc = 0;
  int held = 0;
  auto put_code = [&](int code) {
    acc |= static_cast<std::uint32_t>(code) << held;
    held += kMinCodeSize + 1;
    while (held >= 8) {
      lzw.push_back(static_cast<std::uint8_t>(acc & 0xFF));
      acc >>= 8;
      held -= 8;
    }
  };
  for (std::size_t i = 0; i < gray.size(); ++i) {
    if (i % kLiteralsPerClear == 0) put_code(kClear);
    put_code(gray[i]);
  }
  put_code(kEoi);
  if (held > 0) lzw.push_back(static_cast<std::uint8_t>(acc & 0xFF));

  out.push_back(kMinCodeSize);
  for (std::size_t pos = 0; pos < lzw.size(); pos += 255) {
    const std::size_t n = std::min<std::size_t>(255, lzw.size() - pos);
    out.push_back(static_cast<std::uint8_t>(n));
    out.insert(out.end(), lzw.begin() + static_cast<std::ptrdiff_t>(pos),
               lzw.begin() + static_cast<std::ptrdiff_t>(pos + n));
  }
  out.push_back(0);
  out.push_back(0x3B);
  return out;
}

}  // namespace vesselseg::io
