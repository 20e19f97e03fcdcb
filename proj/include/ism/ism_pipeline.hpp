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

#ifndef ISM_ISM_PIPELINE_HPP_
#define ISM_ISM_PIPELINE_HPP_

#include <cstddef>
#include <vector>

#include "ism/audio_signal.hpp"
#include "ism/perception_model.hpp"

namespace ism {

// Carrier frequencies the Pacinian channel follows well; other values are
// allowed only when explicitly forced.
inline constexpr double kMinCarrierHz = 150.0;
inline constexpr double kMaxCarrierHz = 300.0;

enum class Window {
  kHann,
};

struct IsmConfig {
  double carrier_hz = 200.0;
  double segment_len_s = 0.010;
  double hop_s = 0.0025;
  double hf_cutoff_hz = 100.0;
  double envelope_cutoff_hz = 100.0;
  double output_gain = 1.0;
  bool lowpass_passthrough = false;
  bool allow_any_carrier = false;
  Window window = Window::kHann;

  double envelope_rate_hz() const { return 1.0 / hop_s; }

  // Throws InvalidArgumentError when any field is out of range or the
  // fields are inconsistent (hop > segment, envelope rate below Nyquist
  // for the envelope cutoff, cutoff at or above the carrier).
  void validate(int sample_rate) const;
};

// One analysis frame: windowed samples centered at t_center_s.
struct Frame {
  std::vector<double> samples;
  double t_center_s = 0.0;
};

// Single-sided amplitude spectrum of one frame.  Window attenuation is
// compensated, so a full-scale in-band sinusoid at a bin center shows its
// true amplitude in that bin.
struct SpectralFrame {
  std::vector<double> bin_freq_hz;
  std::vector<double> bin_amp;
  double t_center_s = 0.0;
  double coherent_gain = 0.0;
  double power_gain = 0.0;

  double bin_width_hz() const {
    return bin_freq_hz.size() > 1 ? bin_freq_hz[1] - bin_freq_hz[0] : 0.0;
  }
};

// Uniformly sampled series with sample k at time t0_s + k / rate_hz.
struct IntensityEnvelope {
  std::vector<double> values;
  double rate_hz = 0.0;
  double t0_s = 0.0;
};

struct AmplitudeEnvelope {
  std::vector<double> values;  // in [0, 1]
  double rate_hz = 0.0;
  double t0_s = 0.0;
  double carrier_hz = 0.0;
};

struct ConvertReport {
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::size_t envelope_size = 0;
  double envelope_rate_hz = 0.0;
  // Envelope samples that exceeded full scale before the clamp to [0, 1],
  // after output_gain.
  std::size_t clip_count = 0;
  // Largest pre-clamp envelope value, after output_gain.
  double peak_amplitude = 0.0;
};

struct ConvertResult {
  AudioSignal output;
  IntensityEnvelope intensity;
  AmplitudeEnvelope amplitude;
  ConvertReport report;
};

// Slices the signal into windowed frames centered at k * hop_s for
// k = 0 .. ceil(size / hop_samples) - 1, zero-padding beyond the signal
// edges.  Requires the frame length to come out at 16 samples or more.
std::vector<Frame> segment(const AudioSignal& signal, const IsmConfig& config);

// Requires a frame produced with the Hann window.
SpectralFrame spectrum(const Frame& frame, int sample_rate);

// Perceptual intensity of the frame's content above hf_cutoff_hz.  Bins are
// grouped into spectral components around local maxima of bin power; each
// component contributes model.intensity at its root-sum-square amplitude
// and interpolated peak frequency, and the contributions add.  Components
// at or below the cutoff contribute nothing.  Silence maps to exactly 0.
double segment_intensity(const SpectralFrame& frame,
                         const PerceptionModel& model, double hf_cutoff_hz);

// segment + spectrum + segment_intensity over the whole signal.
IntensityEnvelope intensity_series(const AudioSignal& signal,
                                   const PerceptionModel& model,
                                   const IsmConfig& config);

struct AmplitudeSeriesResult {
  AmplitudeEnvelope envelope;
  std::size_t clip_count = 0;
  double peak_amplitude = 0.0;
};

// Maps each intensity value to the carrier amplitude that reproduces it,
// low-pass filters the result below the envelope cutoff, applies
// output_gain, and clamps to [0, 1].
AmplitudeSeriesResult amplitude_series(const IntensityEnvelope& intensity,
                                       const PerceptionModel& model,
                                       const IsmConfig& config);

// Band-limited interpolation of the envelope to the audio rate, multiplied
// onto sin(2*pi*carrier*t) with zero initial phase.
AudioSignal synthesize_am(const AmplitudeEnvelope& envelope, int sample_rate);

// The whole chain.  With lowpass_passthrough the input's content below
// hf_cutoff_hz is added to the synthesized output.  Output is clamped to
// [-1, 1]; the report counts envelope clipping.
ConvertResult convert(const AudioSignal& signal, const PerceptionModel& model,
                      const IsmConfig& config);

}  // namespace ism

#endif  // ISM_ISM_PIPELINE_HPP_
