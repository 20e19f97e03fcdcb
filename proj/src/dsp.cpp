// Copyright 2026 The ismconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ism/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "ism/errors.hpp"

namespace ism::dsp {
namespace {

// The FFTW planner mutates global state; executing a made plan does not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double bessel_i0(double x) { return std::cyl_bessel_i(0.0, x); }

double kaiser_beta(double atten_db) {
  if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
  if (atten_db >= 21.0) {
    return 0.5842 * std::pow(atten_db - 21.0, 0.4) +
           0.07886 * (atten_db - 21.0);
  }
  return 0.0;
}

}  // namespace

std::vector<double> hann_window(std::size_t n) {
  if (n == 0) throw InvalidArgumentError("window length must be positive");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                 static_cast<double>(i) /
                                 static_cast<double>(n)));
  }
  return w;
}

struct RealFft::State {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* complex = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(std::size_t size) : state_(std::make_unique<State>()) {
  if (size < 2) {
    throw InvalidArgumentError("FFT size must be at least 2, got " +
                               std::to_string(size));
  }
  state_->n = size;
  state_->real = fftw_alloc_real(size);
  state_->complex = fftw_alloc_complex(size / 2 + 1);
  if (state_->real == nullptr || state_->complex == nullptr) {
    throw Error("FFT buffer allocation failed");
  }
  std::lock_guard<std::mutex> lock(planner_mutex());
  int n = static_cast<int>(size);
  state_->forward = fftw_plan_dft_r2c_1d(n, state_->real, state_->complex,
                                         FFTW_ESTIMATE);
  state_->inverse = fftw_plan_dft_c2r_1d(n, state_->complex, state_->real,
                                         FFTW_ESTIMATE);
  if (state_->forward == nullptr || state_->inverse == nullptr) {
    throw Error("FFT planning failed for size " + std::to_string(size));
  }
}

RealFft::~RealFft() {
  if (state_ == nullptr) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (state_->forward != nullptr) fftw_destroy_plan(state_->forward);
  if (state_->inverse != nullptr) fftw_destroy_plan(state_->inverse);
  if (state_->real != nullptr) fftw_free(state_->real);
  if (state_->complex != nullptr) fftw_free(state_->complex);
}

std::size_t RealFft::size() const { return state_->n; }

void RealFft::forward(std::span<const double> in,
                      std::vector<std::complex<double>>& out) const {
  if (in.size() != state_->n) {
    throw InvalidArgumentError("FFT input size " + std::to_string(in.size()) +
                               " does not match plan size " +
                               std::to_string(state_->n));
  }
  std::memcpy(state_->real, in.data(), state_->n * sizeof(double));
  fftw_execute(state_->forward);
  std::size_t bins = state_->n / 2 + 1;
  out.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i] = {state_->complex[i][0], state_->complex[i][1]};
  }
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::vector<double>& out) const {
  std::size_t bins = state_->n / 2 + 1;
  if (in.size() != bins) {
    throw InvalidArgumentError("FFT spectrum size " +
                               std::to_string(in.size()) +
                               " does not match plan size " +
                               std::to_string(state_->n));
  }
  for (std::size_t i = 0; i < bins; ++i) {
    state_->complex[i][0] = in[i].real();
    state_->complex[i][1] = in[i].imag();
  }
  fftw_execute(state_->inverse);
  out.assign(state_->real, state_->real + state_->n);
}

FirFilter design_kaiser_lowpass(double pass_hz, double stop_hz,
                                double sample_rate_hz, double stop_atten_db) {
  if (!(pass_hz > 0.0) || !(stop_hz > pass_hz) ||
      !(stop_hz < sample_rate_hz / 2.0)) {
    throw InvalidArgumentError(
        "low-pass band edges must satisfy 0 < pass < stop < rate/2, got " +
        std::to_string(pass_hz) + " / " + std::to_string(stop_hz) + " at " +
        std::to_string(sample_rate_hz) + " Hz");
  }
  if (!(stop_atten_db > 0.0)) {
    throw InvalidArgumentError("stop-band attenuation must be positive");
  }
  double beta = kaiser_beta(stop_atten_db);
  double delta_omega =
      2.0 * std::numbers::pi * (stop_hz - pass_hz) / sample_rate_hz;
  std::size_t taps = static_cast<std::size_t>(
                         std::ceil((stop_atten_db - 7.95) /
                                   (2.285 * delta_omega))) +
                     1;
  if (taps % 2 == 0) ++taps;
  if (taps < 3) taps = 3;

  double fc = 0.5 * (pass_hz + stop_hz) / sample_rate_hz;
  std::size_t half = (taps - 1) / 2;
  double i0_beta = bessel_i0(beta);
  FirFilter filter;
  filter.taps.resize(taps);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    double n = static_cast<double>(i) - static_cast<double>(half);
    double frac = n / static_cast<double>(half);
    double window = bessel_i0(beta * std::sqrt(1.0 - frac * frac)) / i0_beta;
    double tap = 2.0 * fc * sinc(2.0 * fc * n) * window;
    filter.taps[i] = tap;
    sum += tap;
  }
  for (double& tap : filter.taps) tap /= sum;
  return filter;
}

namespace {

std::vector<double> replicate_edges(std::span<const double> in,
                                    std::size_t pad) {
  std::vector<double> ext;
  ext.reserve(in.size() + 2 * pad);
  ext.insert(ext.end(), pad, in.front());
  ext.insert(ext.end(), in.begin(), in.end());
  ext.insert(ext.end(), pad, in.back());
  return ext;
}

std::vector<double> convolve_valid_direct(const std::vector<double>& ext,
                                          const std::vector<double>& taps,
                                          std::size_t out_size) {
  std::vector<double> out(out_size);
  for (std::size_t i = 0; i < out_size; ++i) {
    double acc = 0.0;
    const double* x = ext.data() + i;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      acc += x[k] * taps[k];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> convolve_valid_fft(const std::vector<double>& ext,
                                       const std::vector<double>& taps,
                                       std::size_t out_size) {
  std::size_t full = ext.size() + taps.size() - 1;
  std::size_t m = 1;
  while (m < full) m <<= 1;
  RealFft fft(m);

  std::vector<double> buf(m, 0.0);
  std::copy(ext.begin(), ext.end(), buf.begin());
  std::vector<std::complex<double>> spec_x;
  fft.forward(buf, spec_x);

  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(taps.begin(), taps.end(), buf.begin());
  std::vector<std::complex<double>> spec_h;
  fft.forward(buf, spec_h);

  for (std::size_t i = 0; i < spec_x.size(); ++i) spec_x[i] *= spec_h[i];
  std::vector<double> conv;
  fft.inverse(spec_x, conv);

  std::vector<double> out(out_size);
  double scale = 1.0 / static_cast<double>(m);
  std::size_t offset = taps.size() - 1;
  for (std::size_t i = 0; i < out_size; ++i) {
    out[i] = conv[offset + i] * scale;
  }
  return out;
}

}  // namespace

std::vector<double> filter_zero_phase(std::span<const double> in,
                                      const FirFilter& filter) {
  if (filter.taps.empty() || filter.taps.size() % 2 == 0) {
    throw InvalidArgumentError("zero-phase filtering needs odd-length taps");
  }
  if (in.empty()) return {};
  std::size_t half = filter.half_span();
  std::vector<double> ext = replicate_edges(in, half);
  bool large = in.size() * filter.taps.size() > (1u << 22);
  return large ? convolve_valid_fft(ext, filter.taps, in.size())
               : convolve_valid_direct(ext, filter.taps, in.size());
}

namespace {

// Interpolation kernel: sinc rolled off to 0.45 of the input rate under a
// Kaiser window.  Each output sample renormalizes by the local kernel sum
// so a constant series stays constant.
constexpr int kResampleHalfWidth = 16;
constexpr double kResampleBeta = 8.6;
constexpr double kResampleRolloff = 0.9;

double resample_weight(double d) {
  double frac = d / kResampleHalfWidth;
  double window =
      bessel_i0(kResampleBeta * std::sqrt(std::max(0.0, 1.0 - frac * frac))) /
      bessel_i0(kResampleBeta);
  return sinc(kResampleRolloff * d) * window;
}

double sample_clamped(std::span<const double> in, std::ptrdiff_t idx) {
  std::ptrdiff_t last = static_cast<std::ptrdiff_t>(in.size()) - 1;
  return in[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last))];
}

}  // namespace

std::vector<double> resample_bandlimited(std::span<const double> in,
                                         double in_rate_hz,
                                         double out_rate_hz,
                                         std::size_t out_size) {
  if (in.empty()) throw InvalidArgumentError("cannot resample an empty series");
  if (!(in_rate_hz > 0.0) || !(out_rate_hz > 0.0)) {
    throw InvalidArgumentError("resample rates must be positive");
  }
  constexpr int kTaps = 2 * kResampleHalfWidth;
  std::vector<double> out(out_size);

  // Integer upsampling covers the common audio-rate/envelope-rate pairs;
  // there the kernel only depends on the output phase, so build one bank of
  // kernels per phase instead of evaluating Bessel terms per sample.
  double ratio = out_rate_hz / in_rate_hz;
  std::size_t phases = static_cast<std::size_t>(std::llround(ratio));
  if (phases >= 1 && phases <= 65536 &&
      std::abs(ratio - static_cast<double>(phases)) < 1e-9 * ratio) {
    std::vector<double> bank(phases * kTaps);
    std::vector<double> norm(phases);
    for (std::size_t p = 0; p < phases; ++p) {
      double sum = 0.0;
      for (int m = 0; m < kTaps; ++m) {
        std::ptrdiff_t offset = m - (kResampleHalfWidth - 1);
        double w = resample_weight(static_cast<double>(p) / phases -
                                   static_cast<double>(offset));
        bank[p * kTaps + m] = w;
        sum += w;
      }
      norm[p] = sum;
    }
    for (std::size_t n = 0; n < out_size; ++n) {
      std::size_t p = n % phases;
      std::ptrdiff_t q = static_cast<std::ptrdiff_t>((n - p) / phases);
      const double* kernel = bank.data() + p * kTaps;
      double acc = 0.0;
      for (int m = 0; m < kTaps; ++m) {
        std::ptrdiff_t offset = m - (kResampleHalfWidth - 1);
        acc += kernel[m] * sample_clamped(in, q + offset);
      }
      out[n] = acc / norm[p];
    }
    return out;
  }

  double step = in_rate_hz / out_rate_hz;
  for (std::size_t n = 0; n < out_size; ++n) {
    double t = static_cast<double>(n) * step;
    std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(std::floor(t));
    double acc = 0.0;
    double norm = 0.0;
    for (std::ptrdiff_t j = j0 - kResampleHalfWidth + 1;
         j <= j0 + kResampleHalfWidth; ++j) {
      double w = resample_weight(t - static_cast<double>(j));
      acc += w * sample_clamped(in, j);
      norm += w;
    }
    out[n] = acc / norm;
  }
  return out;
}

}  // namespace ism::dsp
