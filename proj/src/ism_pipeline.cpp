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

#include "ism/ism_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ism/dsp.hpp"
#include "ism/errors.hpp"

namespace ism {
namespace {

// Spectral components with a root-sum-square amplitude below this are
// numerical dust (far below any curve threshold) and are dropped, which
// keeps digital silence at intensity exactly 0.
constexpr double kComponentFloor = 1e-9;

std::size_t frame_samples(const IsmConfig& config, int sample_rate) {
  return static_cast<std::size_t>(
      std::llround(config.segment_len_s * sample_rate));
}

std::size_t hop_samples(const IsmConfig& config, int sample_rate) {
  return static_cast<std::size_t>(std::llround(config.hop_s * sample_rate));
}

SpectralFrame spectrum_with(const dsp::RealFft& fft, const Frame& frame,
                            int sample_rate) {
  std::size_t n = frame.samples.size();
  std::vector<std::complex<double>> bins;
  fft.forward(frame.samples, bins);

  SpectralFrame out;
  out.t_center_s = frame.t_center_s;
  out.coherent_gain = dsp::kHannCoherentGain;
  out.power_gain = dsp::kHannPowerGain;
  out.bin_freq_hz.resize(bins.size());
  out.bin_amp.resize(bins.size());
  double window_sum = static_cast<double>(n) * dsp::kHannCoherentGain;
  double bin_width = static_cast<double>(sample_rate) / static_cast<double>(n);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bool single_sided_pair = b != 0 && b != bins.size() - 1;
    double scale = (single_sided_pair ? 2.0 : 1.0) / window_sum;
    out.bin_freq_hz[b] = static_cast<double>(b) * bin_width;
    out.bin_amp[b] = std::abs(bins[b]) * scale;
  }
  return out;
}

}  // namespace

void IsmConfig::validate(int sample_rate) const {
  if (sample_rate < kMinSampleRate || sample_rate > kMaxSampleRate) {
    throw InvalidArgumentError("sample rate " + std::to_string(sample_rate) +
                               " is outside [" +
                               std::to_string(kMinSampleRate) + ", " +
                               std::to_string(kMaxSampleRate) + "] Hz");
  }
  if (!std::isfinite(carrier_hz) || carrier_hz <= 0.0) {
    throw InvalidArgumentError("carrier frequency must be positive");
  }
  if (!allow_any_carrier &&
      (carrier_hz < kMinCarrierHz || carrier_hz > kMaxCarrierHz)) {
    throw InvalidArgumentError(
        "carrier " + std::to_string(carrier_hz) +
        " Hz is outside the supported range [" + std::to_string(kMinCarrierHz) +
        ", " + std::to_string(kMaxCarrierHz) +
        "] Hz; pass allow_any_carrier to override");
  }
  if (carrier_hz >= sample_rate / 2.0) {
    throw InvalidArgumentError("carrier " + std::to_string(carrier_hz) +
                               " Hz is at or above the Nyquist limit");
  }
  if (!std::isfinite(segment_len_s) || segment_len_s <= 0.0 ||
      !std::isfinite(hop_s) || hop_s <= 0.0) {
    throw InvalidArgumentError("segment length and hop must be positive");
  }
  std::size_t frame = frame_samples(*this, sample_rate);
  std::size_t hop = hop_samples(*this, sample_rate);
  if (frame < 16) {
    throw InvalidArgumentError("segment of " + std::to_string(segment_len_s) +
                               " s is under 16 samples at " +
                               std::to_string(sample_rate) + " Hz");
  }
  if (hop < 1 || hop > frame) {
    throw InvalidArgumentError(
        "hop of " + std::to_string(hop_s) +
        " s must be at least one sample and no longer than the segment");
  }
  if (!std::isfinite(hf_cutoff_hz) || hf_cutoff_hz <= 0.0 ||
      hf_cutoff_hz >= carrier_hz) {
    throw InvalidArgumentError(
        "high-frequency cutoff must be positive and below the carrier");
  }
  if (lowpass_passthrough && 2.0 * hf_cutoff_hz >= sample_rate / 2.0) {
    throw InvalidArgumentError(
        "high-frequency cutoff too close to Nyquist for passthrough");
  }
  if (!std::isfinite(envelope_cutoff_hz) || envelope_cutoff_hz <= 0.0) {
    throw InvalidArgumentError("envelope cutoff must be positive");
  }
  double envelope_rate =
      static_cast<double>(sample_rate) / static_cast<double>(hop);
  if (envelope_rate < 2.0 * envelope_cutoff_hz) {
    throw InvalidArgumentError(
        "envelope rate " + std::to_string(envelope_rate) +
        " Hz cannot represent content up to the envelope cutoff of " +
        std::to_string(envelope_cutoff_hz) + " Hz");
  }
  if (!std::isfinite(output_gain) || output_gain < 0.0) {
    throw InvalidArgumentError("output gain must be non-negative");
  }
}

std::vector<Frame> segment(const AudioSignal& signal,
                           const IsmConfig& config) {
  validate(signal);
  config.validate(signal.sample_rate);

  std::size_t frame_len = frame_samples(config, signal.sample_rate);
  std::size_t hop = hop_samples(config, signal.sample_rate);
  std::size_t count = (signal.size() + hop - 1) / hop;
  std::vector<double> window = dsp::hann_window(frame_len);

  std::vector<Frame> frames(count);
  std::ptrdiff_t n = static_cast<std::ptrdiff_t>(signal.size());
  std::ptrdiff_t half = static_cast<std::ptrdiff_t>(frame_len) / 2;
  for (std::size_t k = 0; k < count; ++k) {
    Frame& frame = frames[k];
    std::ptrdiff_t center = static_cast<std::ptrdiff_t>(k * hop);
    frame.t_center_s =
        static_cast<double>(center) / static_cast<double>(signal.sample_rate);
    frame.samples.resize(frame_len);
    std::ptrdiff_t start = center - half;
    for (std::size_t i = 0; i < frame_len; ++i) {
      std::ptrdiff_t src = start + static_cast<std::ptrdiff_t>(i);
      double s = (src >= 0 && src < n)
                     ? signal.samples[static_cast<std::size_t>(src)]
                     : 0.0;
      frame.samples[i] = s * window[i];
    }
  }
  return frames;
}

SpectralFrame spectrum(const Frame& frame, int sample_rate) {
  if (frame.samples.size() < 2) {
    throw InvalidArgumentError("spectral frame needs at least 2 samples");
  }
  dsp::RealFft fft(frame.samples.size());
  return spectrum_with(fft, frame, sample_rate);
}

double segment_intensity(const SpectralFrame& frame,
                         const PerceptionModel& model, double hf_cutoff_hz) {
  if (!std::isfinite(hf_cutoff_hz) || hf_cutoff_hz <= 0.0) {
    throw InvalidArgumentError("high-frequency cutoff must be positive");
  }
  std::size_t nb = frame.bin_amp.size();
  if (nb < 2 || frame.bin_freq_hz.size() != nb) {
    throw InvalidArgumentError("spectral frame is inconsistent");
  }

  // Per-bin contribution to signal power, scaled so that summing a
  // component's bins and taking the square root recovers the component's
  // sinusoidal amplitude.  For the Hann window that scale is cg^2 / pg.
  double power_scale = frame.coherent_gain * frame.coherent_gain /
                       frame.power_gain;
  std::vector<double> u(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double amp = frame.bin_amp[b];
    u[b] = amp * amp * power_scale;
  }
  u[0] *= 0.5;
  u[nb - 1] *= 0.5;

  // Watershed clustering: every bin walks uphill in u to a local maximum;
  // bins draining to the same maximum form one spectral component.  Ties
  // walk toward the lower bin.
  std::vector<std::ptrdiff_t> owner(nb, -1);
  std::vector<std::ptrdiff_t> path;
  for (std::size_t b = 0; b < nb; ++b) {
    if (owner[b] >= 0) continue;
    path.clear();
    std::ptrdiff_t c = static_cast<std::ptrdiff_t>(b);
    while (owner[c] < 0) {
      double left = c > 0 ? u[c - 1] : -1.0;
      double right =
          c + 1 < static_cast<std::ptrdiff_t>(nb) ? u[c + 1] : -1.0;
      if (u[c] >= left && u[c] >= right) break;
      path.push_back(c);
      c += left >= right ? -1 : 1;
    }
    std::ptrdiff_t peak = owner[c] >= 0 ? owner[c] : c;
    owner[c] = peak;
    for (std::ptrdiff_t q : path) owner[q] = peak;
  }

  std::vector<double> cluster_power(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    if (u[b] == 0.0) continue;
    cluster_power[static_cast<std::size_t>(owner[b])] += u[b];
  }

  double bin_hz = frame.bin_width_hz();
  double total = 0.0;
  for (std::size_t p = 0; p < nb; ++p) {
    if (cluster_power[p] <= 0.0) continue;
    double amplitude = std::sqrt(cluster_power[p]);
    if (amplitude < kComponentFloor) continue;

    // Component frequency from the peak bin and its louder neighbor.  For
    // a Hann window, the amplitude ratio r of the two bins around a lone
    // sinusoid puts it (2r - 1) / (r + 1) bins from the peak; ratios below
    // 1/2 mean the neighbor carries no mainlobe energy and the peak bin
    // itself is the estimate.  The single-sided amplitudes are compared
    // as-is: the DC and Nyquist bins hold the coherent sum of a sinusoid's
    // two spectral images, which their half-scale convention maps onto the
    // same per-image scale as the interior bins, shrunk by up to the frame
    // phase cosine.  A shrunk end bin only weakens its pull on the
    // estimate, so a component next to DC is never dragged below the
    // cutoff by a phase accident, while a genuinely sub-cutoff component
    // still interpolates to the cutoff or below in every frame.
    double here = frame.bin_amp[p];
    double left = p > 0 ? frame.bin_amp[p - 1] : 0.0;
    double right = p + 1 < nb ? frame.bin_amp[p + 1] : 0.0;
    double side = left >= right ? -1.0 : 1.0;
    double neighbor = left >= right ? left : right;
    double offset = 0.0;
    if (here > 0.0) {
      double ratio = neighbor / here;
      offset = std::clamp((2.0 * ratio - 1.0) / (ratio + 1.0), 0.0, 1.0);
    }
    double frequency_hz = frame.bin_freq_hz[p] + side * offset * bin_hz;

    if (frequency_hz <= hf_cutoff_hz) continue;
    total += model.intensity(frequency_hz, amplitude);
  }
  return total;
}

IntensityEnvelope intensity_series(const AudioSignal& signal,
                                   const PerceptionModel& model,
                                   const IsmConfig& config) {
  std::vector<Frame> frames = segment(signal, config);
  dsp::RealFft fft(frames.front().samples.size());

  IntensityEnvelope envelope;
  envelope.rate_hz =
      static_cast<double>(signal.sample_rate) /
      static_cast<double>(hop_samples(config, signal.sample_rate));
  envelope.t0_s = 0.0;
  envelope.values.reserve(frames.size());
  for (const Frame& frame : frames) {
    SpectralFrame sf = spectrum_with(fft, frame, signal.sample_rate);
    envelope.values.push_back(
        segment_intensity(sf, model, config.hf_cutoff_hz));
  }
  return envelope;
}

AmplitudeSeriesResult amplitude_series(const IntensityEnvelope& intensity,
                                       const PerceptionModel& model,
                                       const IsmConfig& config) {
  if (intensity.values.empty() || intensity.rate_hz <= 0.0) {
    throw InvalidArgumentError("intensity envelope is empty or has no rate");
  }
  for (std::size_t i = 0; i < intensity.values.size(); ++i) {
    if (!std::isfinite(intensity.values[i]) || intensity.values[i] < 0.0) {
      throw InvalidArgumentError("intensity value " + std::to_string(i) +
                                 " must be finite and non-negative");
    }
  }

  std::vector<double> raw(intensity.values.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = model.amplitude_for_intensity(config.carrier_hz,
                                           intensity.values[i]);
  }

  // Smooth so fluctuations above the envelope cutoff land in the filter's
  // stopband; the passband ends one transition width below the cutoff.
  // The stop edge stays clear of the envelope Nyquist so the design is
  // valid at minimum legal rates.
  double stop_hz =
      std::min(config.envelope_cutoff_hz, 0.495 * intensity.rate_hz);
  double pass_hz = stop_hz / 1.15;
  dsp::FirFilter lowpass =
      dsp::design_kaiser_lowpass(pass_hz, stop_hz, intensity.rate_hz, 60.0);
  std::vector<double> smooth = dsp::filter_zero_phase(raw, lowpass);

  AmplitudeSeriesResult result;
  result.envelope.rate_hz = intensity.rate_hz;
  result.envelope.t0_s = intensity.t0_s;
  result.envelope.carrier_hz = config.carrier_hz;
  result.envelope.values.resize(smooth.size());
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    double v = smooth[i] * config.output_gain;
    result.peak_amplitude = std::max(result.peak_amplitude, v);
    if (v > 1.0) ++result.clip_count;
    result.envelope.values[i] = std::clamp(v, 0.0, 1.0);
  }
  return result;
}

AudioSignal synthesize_am(const AmplitudeEnvelope& envelope,
                          int sample_rate) {
  if (envelope.values.empty() || envelope.rate_hz <= 0.0) {
    throw InvalidArgumentError("amplitude envelope is empty or has no rate");
  }
  if (sample_rate < kMinSampleRate || sample_rate > kMaxSampleRate) {
    throw InvalidArgumentError("sample rate " + std::to_string(sample_rate) +
                               " is outside the supported range");
  }
  if (!std::isfinite(envelope.carrier_hz) || envelope.carrier_hz <= 0.0 ||
      envelope.carrier_hz >= sample_rate / 2.0) {
    throw InvalidArgumentError("carrier must be positive and below Nyquist");
  }

  double duration =
      static_cast<double>(envelope.values.size()) / envelope.rate_hz;
  std::size_t out_size = static_cast<std::size_t>(
      std::ceil(duration * sample_rate - 1e-9));
  std::vector<double> env = dsp::resample_bandlimited(
      envelope.values, envelope.rate_hz, sample_rate, out_size);

  AudioSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(out_size);
  double omega = 2.0 * std::numbers::pi * envelope.carrier_hz /
                 static_cast<double>(sample_rate);
  for (std::size_t n = 0; n < out_size; ++n) {
    double a = std::clamp(env[n], 0.0, 1.0);
    out.samples[n] = a * std::sin(omega * static_cast<double>(n));
  }
  return out;
}

ConvertResult convert(const AudioSignal& signal, const PerceptionModel& model,
                      const IsmConfig& config) {
  validate(signal);
  config.validate(signal.sample_rate);

  ConvertResult result;
  result.intensity = intensity_series(signal, model, config);
  AmplitudeSeriesResult series =
      amplitude_series(result.intensity, model, config);
  result.amplitude = std::move(series.envelope);
  result.output = synthesize_am(result.amplitude, signal.sample_rate);

  result.report.input_size = signal.size();
  result.report.envelope_size = result.amplitude.values.size();
  result.report.envelope_rate_hz = result.amplitude.rate_hz;
  result.report.clip_count = series.clip_count;
  result.report.peak_amplitude = series.peak_amplitude;

  if (config.lowpass_passthrough) {
    dsp::FirFilter lowpass = dsp::design_kaiser_lowpass(
        config.hf_cutoff_hz, 2.0 * config.hf_cutoff_hz, signal.sample_rate,
        60.0);
    std::vector<double> low = dsp::filter_zero_phase(signal.samples, lowpass);
    std::size_t overlap = std::min(low.size(), result.output.samples.size());
    for (std::size_t i = 0; i < overlap; ++i) {
      result.output.samples[i] += low[i];
    }
  }

  for (double& s : result.output.samples) {
    if (s > 1.0 || s < -1.0) {
      ++result.report.clip_count;
      s = std::clamp(s, -1.0, 1.0);
    }
  }
  result.report.output_size = result.output.samples.size();
  return result;
}

}  // namespace ism
