#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace detail {

/// FFTW's planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using fftw_buffer = std::unique_ptr<T[], FftwFree>;

template <class T>
fftw_buffer<T> fftw_alloc(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw std::bad_alloc();
  return fftw_buffer<T>(p);
}

/// Smallest integer >= m whose prime factors are 2, 3, 5, 7.
inline std::size_t smooth_size(std::size_t m) {
  for (std::size_t k = m;; ++k) {
    std::size_t r = k;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return k;
  }
}

} // namespace detail

/// Linear (non-circular) convolution of N×N arrays with a translation-invariant kernel,
/// through a zero-padded M×M real FFT with M >= 2N - 1. Plans use FFTW_ESTIMATE so that
/// results are bit-reproducible run to run. `apply` is safe to call concurrently.
class PaddedConvolution {
public:
  explicit PaddedConvolution(std::size_t N) : N_(N), M_(detail::smooth_size(2 * N - 1)), H_(M_ / 2 + 1) {
    if (N < 1) throw DomainError("PaddedConvolution: N must be positive");
    auto in = detail::fftw_alloc<double>(M_ * M_);
    auto out = detail::fftw_alloc<fftw_complex>(M_ * H_);
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    const int m = static_cast<int>(M_);
    fwd_ = fftw_plan_dft_r2c_2d(m, m, in.get(), out.get(), FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(m, m, out.get(), in.get(), FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("PaddedConvolution: FFTW planning failed");
  }

  PaddedConvolution(const PaddedConvolution&) = delete;
  PaddedConvolution& operator=(const PaddedConvolution&) = delete;

  ~PaddedConvolution() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  std::size_t n() const { return N_; }
  std::size_t padded() const { return M_; }
  std::size_t spectrum_size() const { return M_ * H_; }

  /// Spectrum of a kernel given as k(di, dj) for offsets |di|, |dj| < N.
  template <class F>
  std::vector<std::complex<double>> kernel_spectrum(F&& k) const {
    auto in = detail::fftw_alloc<double>(M_ * M_);
    const auto N = static_cast<long>(N_), M = static_cast<long>(M_);
    for (long a = 0; a < M; ++a) {
      const long da = a < N ? a : (a > M - N ? a - M : 0);
      const bool ua = a < N || a > M - N;
      for (long b = 0; b < M; ++b) {
        const long db = b < N ? b : (b > M - N ? b - M : 0);
        const bool ub = b < N || b > M - N;
        in[a * M + b] = (ua && ub) ? k(da, db) : 0.0;
      }
    }
    auto out = detail::fftw_alloc<fftw_complex>(M_ * H_);
    fftw_execute_dft_r2c(fwd_, in.get(), out.get());
    std::vector<std::complex<double>> spec(M_ * H_);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = {out[i][0], out[i][1]};
    return spec;
  }

  /// out[i] = Σ_j k(i - j) in[j], both N×N row-major, given the kernel spectrum.
  void apply(const std::vector<std::complex<double>>& spectrum, const double* in, double* out) const {
    if (spectrum.size() != M_ * H_) throw DomainError("PaddedConvolution: spectrum size mismatch");
    auto buf = detail::fftw_alloc<double>(M_ * M_);
    auto freq = detail::fftw_alloc<fftw_complex>(M_ * H_);
    std::fill(buf.get(), buf.get() + M_ * M_, 0.0);
    for (std::size_t i = 0; i < N_; ++i)
      for (std::size_t j = 0; j < N_; ++j) buf[i * M_ + j] = in[i * N_ + j];
    fftw_execute_dft_r2c(fwd_, buf.get(), freq.get());
    for (std::size_t i = 0; i < M_ * H_; ++i) {
      const std::complex<double> z(freq[i][0], freq[i][1]);
      const auto w = z * spectrum[i];
      freq[i][0] = w.real();
      freq[i][1] = w.imag();
    }
    fftw_execute_dft_c2r(bwd_, freq.get(), buf.get());
    const double scale = 1.0 / static_cast<double>(M_ * M_);
    for (std::size_t i = 0; i < N_; ++i)
      for (std::size_t j = 0; j < N_; ++j) out[i * N_ + j] = buf[i * M_ + j] * scale;
  }

  std::vector<double> apply(const std::vector<std::complex<double>>& spectrum, const std::vector<double>& in) const {
    if (in.size() != N_ * N_) throw DomainError("PaddedConvolution: input size mismatch");
    std::vector<double> out(N_ * N_);
    apply(spectrum, in.data(), out.data());
    return out;
  }

private:
  std::size_t N_, M_, H_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

} // namespace fraclab
