#include "vesselseg/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "vesselseg/error.hpp"

namespace vesselseg {

std::string_view to_string(ConvolutionStrategy s) {
  switch (s) {
    case ConvolutionStrategy::Auto: return "auto";
    case ConvolutionStrategy::Direct: return "direct";
    case ConvolutionStrategy::Fft: return "fft";
  }
  return "auto";
}

ConvolutionStrategy parse_convolution_strategy(std::string_view name) {
  if (name == "auto") return ConvolutionStrategy::Auto;
  if (name == "direct") return ConvolutionStrategy::Direct;
  if (name == "fft") return ConvolutionStrategy::Fft;
  throw InvalidArgument("unknown convolution strategy '" + std::string(name) + "'");
}

namespace {

constexpr int kDirectMaxSize = 7;

// Replicate-extended copy: out(i, j) = img(clamp(j - r), clamp(i - r)).
struct PaddedImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  [[nodiscard]] const double* row(int i) const {
    return data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(width);
  }
};

PaddedImage pad_replicate(PlaneView img, int r, int width, int height) {
  PaddedImage p{width, height, std::vector<double>(static_cast<std::size_t>(width) * height)};
  for (int i = 0; i < height; ++i) {
    const int sy = std::clamp(i - r, 0, img.height - 1);
    double* dst = p.data.data() + static_cast<std::size_t>(i) * width;
    for (int j = 0; j < width; ++j) dst[j] = img.at(std::clamp(j - r, 0, img.width - 1), sy);
  }
  return p;
}

void check_fits(PlaneView img, const Stencil& k) {
  if (img.empty()) throw InvalidArgument("convolve: empty image");
  if (k.size() > img.width || k.size() > img.height) {
    throw InvalidArgument("convolve: " + std::to_string(k.size()) + "x" + std::to_string(k.size()) +
                          " kernel larger than " + std::to_string(img.width) + "x" +
                          std::to_string(img.height) + " image");
  }
}

ResponseField direct(PlaneView img, const PaddedImage& padded, int pad, const Stencil& k) {
  const int r = k.radius();
  const int n = k.size();
  const auto width = static_cast<std::size_t>(img.width);
  std::vector<double> out(width * static_cast<std::size_t>(img.height), 0.0);
  for (int y = 0; y < img.height; ++y) {
    double* acc = out.data() + static_cast<std::size_t>(y) * width;
    for (int ky = 0; ky < n; ++ky) {
      const double* src = padded.row(y + pad - r + ky) + (pad - r);
      for (int kx = 0; kx < n; ++kx) {
        const double w = k.at(kx - r, ky - r);
        const double* s = src + kx;
        for (std::size_t x = 0; x < width; ++x) acc[x] += w * s[x];
      }
    }
  }
  return {img.width, img.height, std::move(out)};
}

int smooth_size(int n) {
  for (int m = n;; ++m) {
    int v = m;
    for (int f : {2, 3, 5, 7}) {
      while (v % f == 0) v /= f;
    }
    if (v == 1) return m;
  }
}

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;
using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

class FftCorrelator {
 public:
  FftCorrelator(PlaneView img, int pad)
      : img_w_(img.width), img_h_(img.height), pad_(pad),
        rows_(smooth_size(img.height + 2 * pad)), cols_(smooth_size(img.width + 2 * pad)),
        spectrum_cols_(cols_ / 2 + 1) {
    const auto real_n = static_cast<std::size_t>(rows_) * cols_;
    const auto cplx_n = static_cast<std::size_t>(rows_) * spectrum_cols_;
    real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * real_n)));
    image_spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_n)));
    work_spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_n)));
    {
      std::lock_guard lock(planner_mutex());
      forward_.reset(fftw_plan_dft_r2c_2d(rows_, cols_, real_.get(), work_spec_.get(), FFTW_ESTIMATE));
      inverse_.reset(fftw_plan_dft_c2r_2d(rows_, cols_, work_spec_.get(), real_.get(), FFTW_ESTIMATE));
    }
    const PaddedImage padded = pad_replicate(img, pad, cols_, rows_);
    std::copy(padded.data.begin(), padded.data.end(), real_.get());
    fftw_execute_dft_r2c(forward_.get(), real_.get(), image_spec_.get());
  }

  ResponseField correlate(const Stencil& k) {
    const auto real_n = static_cast<std::size_t>(rows_) * cols_;
    const auto cplx_n = static_cast<std::size_t>(rows_) * spectrum_cols_;
    std::fill(real_.get(), real_.get() + real_n, 0.0);
    const int r = k.radius();
    for (int dy = -r; dy <= r; ++dy) {
      const int i = (dy + rows_) % rows_;
      for (int dx = -r; dx <= r; ++dx) {
        const int j = (dx + cols_) % cols_;
        real_[static_cast<std::size_t>(i) * cols_ + j] = k.at(dx, dy);
      }
    }
    fftw_execute_dft_r2c(forward_.get(), real_.get(), work_spec_.get());
    // Correlation theorem: conj(K) * I.
    for (std::size_t n = 0; n < cplx_n; ++n) {
      const std::complex<double> kf(work_spec_[n][0], -work_spec_[n][1]);
      const std::complex<double> im(image_spec_[n][0], image_spec_[n][1]);
      const auto prod = kf * im;
      work_spec_[n][0] = prod.real();
      work_spec_[n][1] = prod.imag();
    }
    fftw_execute_dft_c2r(inverse_.get(), work_spec_.get(), real_.get());

    const double scale = 1.0 / static_cast<double>(real_n);
    std::vector<double> out(static_cast<std::size_t>(img_w_) * img_h_);
    for (int y = 0; y < img_h_; ++y) {
      const double* src = real_.get() + static_cast<std::size_t>(y + pad_) * cols_ + pad_;
      double* dst = out.data() + static_cast<std::size_t>(y) * img_w_;
      for (int x = 0; x < img_w_; ++x) dst[x] = src[x] * scale;
    }
    return {img_w_, img_h_, std::move(out)};
  }

 private:
  int img_w_;
  int img_h_;
  int pad_;
  int rows_;
  int cols_;
  int spectrum_cols_;
  RealBuffer real_;
  ComplexBuffer image_spec_;
  ComplexBuffer work_spec_;
  PlanPtr forward_;
  PlanPtr inverse_;
};

ConvolutionStrategy resolve(ConvolutionStrategy s, int max_size) {
  if (s != ConvolutionStrategy::Auto) return s;
  return max_size <= kDirectMaxSize ? ConvolutionStrategy::Direct : ConvolutionStrategy::Fft;
}

}  // namespace

std::vector<ResponseField> convolve_all(PlaneView img, std::span<const Stencil* const> stencils,
                                        ConvolutionStrategy strategy) {
  int pad = 0;
  int max_size = 1;
  for (const Stencil* k : stencils) {
    check_fits(img, *k);
    pad = std::max(pad, k->radius());
    max_size = std::max(max_size, k->size());
  }
  std::vector<ResponseField> out;
  out.reserve(stencils.size());
  if (stencils.empty()) return out;

  if (resolve(strategy, max_size) == ConvolutionStrategy::Direct) {
    const PaddedImage padded = pad_replicate(img, pad, img.width + 2 * pad, img.height + 2 * pad);
    for (const Stencil* k : stencils) out.push_back(direct(img, padded, pad, *k));
  } else {
    FftCorrelator fft(img, pad);
    for (const Stencil* k : stencils) out.push_back(fft.correlate(*k));
  }
  return out;
}

ResponseField convolve(PlaneView img, const Stencil& k, ConvolutionStrategy strategy) {
  const Stencil* one[] = {&k};
  return std::move(convolve_all(img, one, strategy).front());
}

ResponseField box_filter(PlaneView img, int w) {
  if (w < 1 || w % 2 == 0) throw InvalidArgument("box_filter: size must be odd and positive");
  if (img.empty()) throw InvalidArgument("box_filter: empty image");
  const int r = w / 2;
  const int W = img.width;
  const int H = img.height;

  // Horizontal window sums, then vertical sums of those.
  std::vector<double> rows(static_cast<std::size_t>(W) * H);
  std::vector<double> prefix(static_cast<std::size_t>(std::max(W, H) + 2 * r + 1));
  for (int y = 0; y < H; ++y) {
    prefix[0] = 0.0;
    for (int j = 0; j < W + 2 * r; ++j) {
      prefix[j + 1] = prefix[j] + img.at(std::clamp(j - r, 0, W - 1), y);
    }
    for (int x = 0; x < W; ++x) {
      rows[static_cast<std::size_t>(y) * W + x] = prefix[x + w] - prefix[x];
    }
  }
  std::vector<double> out(rows.size());
  const double norm = 1.0 / (static_cast<double>(w) * static_cast<double>(w));
  for (int x = 0; x < W; ++x) {
    prefix[0] = 0.0;
    for (int i = 0; i < H + 2 * r; ++i) {
      prefix[i + 1] = prefix[i] + rows[static_cast<std::size_t>(std::clamp(i - r, 0, H - 1)) * W + x];
    }
    for (int y = 0; y < H; ++y) {
      out[static_cast<std::size_t>(y) * W + x] = (prefix[y + w] - prefix[y]) * norm;
    }
  }
  return {W, H, std::move(out)};
}

}  // namespace vesselseg
