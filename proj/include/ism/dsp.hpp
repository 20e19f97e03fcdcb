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

#ifndef ISM_DSP_HPP_
#define ISM_DSP_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ism::dsp {

// Periodic Hann window w[n] = 0.5 * (1 - cos(2*pi*n/N)).  For this window
// sum(w) == N/2 and sum(w^2) == 3N/8 exactly.
std::vector<double> hann_window(std::size_t n);

inline constexpr double kHannCoherentGain = 0.5;
inline constexpr double kHannPowerGain = 0.375;

// Real-input FFT of a fixed size, deterministic across runs.  forward()
// fills size()/2 + 1 complex bins; inverse() is its unnormalized adjoint
// (inverse(forward(x)) == size() * x).  Not thread safe; use one instance
// per thread.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const;
  void forward(std::span<const double> in,
               std::vector<std::complex<double>>& out) const;
  void inverse(std::span<const std::complex<double>> in,
               std::vector<double>& out) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Symmetric odd-length FIR low-pass designed with the Kaiser window method.
// Taps sum to exactly 1 (unity DC gain).
struct FirFilter {
  std::vector<double> taps;

  std::size_t half_span() const { return (taps.size() - 1) / 2; }
};

// Designs for at least stop_atten_db of rejection above stop_hz while
// passing content below pass_hz.  Requires 0 < pass_hz < stop_hz <
// sample_rate_hz / 2.
FirFilter design_kaiser_lowpass(double pass_hz, double stop_hz,
                                double sample_rate_hz, double stop_atten_db);

// Zero-phase filtering by center-aligned convolution with the symmetric
// taps.  The input is extended by replicating the edge values, so a
// constant input comes back unchanged and the output has the input's
// length.  Switches to FFT convolution for large workloads; both paths
// compute the same sums.
std::vector<double> filter_zero_phase(std::span<const double> in,
                                      const FirFilter& filter);

// Band-limited resampling of a uniformly sampled envelope to a new rate
// using a normalized Kaiser-windowed sinc kernel.  Sample k of the input
// sits at time k / in_rate_hz; output sample n at n / out_rate_hz.  Edges
// replicate.  A constant input maps to the same constant.
std::vector<double> resample_bandlimited(std::span<const double> in,
                                         double in_rate_hz,
                                         double out_rate_hz,
                                         std::size_t out_size);

}  // namespace ism::dsp

#endif  // ISM_DSP_HPP_
