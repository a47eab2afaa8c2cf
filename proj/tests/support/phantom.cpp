#include "phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "vesselseg/io.hpp"

namespace vesselseg::testing {

namespace fs = std::filesystem;

GrayImage vertical_ridge(int width, int height, double center, double sigma, double amplitude, double background) {
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x - center;
      v[static_cast<std::size_t>(y) * width + x] = background + amplitude * std::exp(-dx * dx / (2 * sigma * sigma));
    }
  }
  return GrayImage(width, height, std::move(v));
}

GrayImage vertical_step(int width, int height, int edge, double amplitude, double background) {
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) v[static_cast<std::size_t>(y) * width + x] = x < edge ? background : background + amplitude;
  }
  return GrayImage(width, height, std::move(v));
}

GrayImage rotate90(const GrayImage& img) {
  const int n = img.width();
  std::vector<double> v(img.size());
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) v[static_cast<std::size_t>(n - 1 - x) * n + y] = img(x, y);
  }
  return GrayImage(n, n, std::move(v));
}

namespace {

struct Segment {
  double x0, y0, x1, y1, width;
};

double distance_to_segment(double px, double py, const Segment& s) {
  const double vx = s.x1 - s.x0;
  const double vy = s.y1 - s.y0;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((px - s.x0) * vx + (py - s.y0) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (s.x0 + t * vx);
  const double dy = py - (s.y0 + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

// Random walk outward from (x, y), splitting once part of the way along.
void grow_vessel(std::vector<Segment>& out, double x, double y, double heading, double width, int steps,
                 double step_len, std::mt19937& rng, int depth) {
  std::normal_distribution<double> turn(0.0, 0.18);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int split_at = depth < 2 ? steps / 2 + static_cast<int>(u(rng) * steps / 4) : -1;
  for (int i = 0; i < steps; ++i) {
    heading += turn(rng);
    const double nx = x + step_len * std::cos(heading);
    const double ny = y + step_len * std::sin(heading);
    out.push_back({x, y, nx, ny, width});
    x = nx;
    y = ny;
    if (i == split_at) {
      const double side = u(rng) < 0.5 ? -1.0 : 1.0;
      grow_vessel(out, x, y, heading + side * (0.5 + 0.4 * u(rng)), std::max(1.2, width * 0.7), steps - i - 1,
                  step_len, rng, depth + 1);
      width = std::max(1.2, width * 0.85);
    }
  }
}

}  // namespace

FundusPhantom make_fundus(int size, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.01);

  const double cx = (size - 1) / 2.0;
  const double cy = (size - 1) / 2.0;
  const double radius = 0.45 * size;

  // Vessel tree rooted at an off-centre disc, heading out in several directions.
  std::vector<Segment> segments;
  const double ox = cx - 0.18 * size + 0.04 * size * u(rng);
  const double oy = cy + 0.04 * size * (u(rng) - 0.5);
  const int trunks = 4 + static_cast<int>(u(rng) * 2);
  for (int k = 0; k < trunks; ++k) {
    const double heading = 2 * std::numbers::pi * (k + 0.3 * u(rng)) / trunks;
    grow_vessel(segments, ox, oy, heading, 2.6 + 1.2 * u(rng), 14, size / 28.0, rng, 0);
  }

  const std::size_t n = static_cast<std::size_t>(size) * size;
  std::vector<double> r(n), g(n), b(n);
  std::vector<std::uint8_t> mask(n), truth(n);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * size + x;
      const double rr = std::hypot(x - cx, y - cy) / radius;
      const bool inside = rr <= 1.0;
      mask[i] = inside ? 1 : 0;

      double darkening = 0.0;
      bool vessel = false;
      for (const auto& s : segments) {
        const double d = distance_to_segment(x, y, s);
        const double sd = s.width / 2.5;
        darkening = std::max(darkening, 0.35 * std::exp(-d * d / (2 * sd * sd)));
        if (d <= s.width / 2) vessel = true;
      }
      const double vignette = 1.0 - 0.35 * rr * rr;
      if (inside) {
        r[i] = std::clamp(0.78 * vignette + noise(rng), 0.0, 1.0);
        g[i] = std::clamp(0.48 * vignette * (1.0 - darkening) + noise(rng), 0.0, 1.0);
        b[i] = std::clamp(0.16 * vignette + noise(rng), 0.0, 1.0);
      } else {
        r[i] = std::clamp(0.02 + noise(rng), 0.0, 1.0);
        g[i] = std::clamp(0.02 + noise(rng), 0.0, 1.0);
        b[i] = std::clamp(0.02 + noise(rng), 0.0, 1.0);
      }
      truth[i] = inside && vessel ? 1 : 0;
    }
  }
  return {RgbImage(GrayImage(size, size, std::move(r)), GrayImage(size, size, std::move(g)),
                   GrayImage(size, size, std::move(b))),
          FovMask(size, size, std::move(mask)), BinaryMap(size, size, std::move(truth))};
}

namespace {

void write_gif(const fs::path& path, int width, int height, std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> gray(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) gray[i] = bits[i] ? 255 : 0;
  io::write_bytes(path, io::encode_gray_gif(width, height, gray));
}

}  // namespace

void write_drive_layout(const fs::path& root, Split split, int count, int size, std::uint32_t seed) {
  const std::string name(to_string(split));
  const fs::path dir = root / name;
  for (const char* sub : {"images", "mask", "1st_manual", "2nd_manual"}) fs::create_directories(dir / sub);
  const int first = split == Split::Test ? 1 : 21;
  for (int k = 0; k < count; ++k) {
    char nn[16];
    std::snprintf(nn, sizeof nn, "%02d", first + k);
    const auto ph = make_fundus(size, seed * 1000u + static_cast<std::uint32_t>(first + k));
    io::write_rgb_png(dir / "images" / (std::string(nn) + "_" + name + ".png"), ph.image);
    write_gif(dir / "mask" / (std::string(nn) + "_" + name + "_mask.gif"), size, size, ph.mask.data());
    write_gif(dir / "1st_manual" / (std::string(nn) + "_manual1.gif"), size, size, ph.truth.data());
    write_gif(dir / "2nd_manual" / (std::string(nn) + "_manual2.gif"), size, size, ph.truth.data());
  }
}

fs::path make_temp_dir(const std::string& prefix) {
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const fs::path p = fs::temp_directory_path() / (prefix + "-" + std::to_string(rd()));
    if (fs::create_directory(p)) return p;
  }
  throw std::runtime_error("could not create temp dir");
}

}  // namespace vesselseg::testing
