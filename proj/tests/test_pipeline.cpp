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
#include <numbers>
#include <vector>

#include <doctest.h>

#include "ism/errors.hpp"
#include "oracle.hpp"
#include "testsignals.hpp"

using ism::AudioSignal;
using ism::IsmConfig;
using ism::default_model;

namespace {

double series_mean(const std::vector<double>& v, std::size_t lo,
                   std::size_t hi) {
  double sum = 0.0;
  for (std::size_t i = lo; i < hi; ++i) sum += v[i];
  return sum / static_cast<double>(hi - lo);
}

double series_cov(const std::vector<double>& v, std::size_t lo,
                  std::size_t hi) {
  double mean = series_mean(v, lo, hi);
  double var = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    var += (v[i] - mean) * (v[i] - mean);
  }
  var /= static_cast<double>(hi - lo);
  return std::sqrt(var) / mean;
}

}  // namespace

TEST_CASE("segmentation produces centered frames on the hop grid") {
  const int rate = 48000;
  AudioSignal signal = testsignals::sine(250.0, 0.5, 1.0, rate);
  IsmConfig config;
  std::vector<ism::Frame> frames = ism::segment(signal, config);

  // 48000 samples at a 120 sample hop.
  REQUIRE(frames.size() == 400);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    CHECK(frames[k].samples.size() == 480);
    CHECK(frames[k].t_center_s ==
          doctest::Approx(static_cast<double>(k) * 0.0025).epsilon(1e-12));
  }

  // The first frame is centered at sample 0, so its left half covers
  // negative time and must be zero-padded.
  const std::vector<double>& first = frames.front().samples;
  for (std::size_t i = 0; i < 240; ++i) CHECK(first[i] == 0.0);
}

TEST_CASE("frame count covers the whole signal for non-multiple sizes") {
  const int rate = 48000;
  AudioSignal signal = testsignals::sine(250.0, 0.5, 1.0, rate);
  signal.samples.resize(48101);
  IsmConfig config;
  std::vector<ism::Frame> frames = ism::segment(signal, config);
  CHECK(frames.size() == (48101 + 119) / 120);
}

TEST_CASE("spectrum matches a direct-summation reference") {
  const int rate = 48000;
  AudioSignal signal = testsignals::chord(400.0, 1150.0, 0.3, 0.1, rate);
  IsmConfig config;
  std::vector<ism::Frame> frames = ism::segment(signal, config);
  const ism::Frame& frame = frames[frames.size() / 2];
  ism::SpectralFrame spec = ism::spectrum(frame, rate);

  REQUIRE(spec.bin_amp.size() == 241);
  CHECK(spec.bin_width_hz() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(spec.coherent_gain == 0.5);
  CHECK(spec.power_gain == 0.375);

  std::vector<double> want =
      oracle::dft_amplitudes(frame.samples, 480.0 * 0.5);
  REQUIRE(want.size() == spec.bin_amp.size());
  for (std::size_t b = 0; b < want.size(); ++b) {
    CHECK(spec.bin_amp[b] == doctest::Approx(want[b]).epsilon(1e-6));
    CHECK(std::abs(spec.bin_amp[b] - want[b]) < 1e-9);
  }
}

TEST_CASE("spectrum reports a bin-centered tone at its true amplitude") {
  const int rate = 48000;
  // 400 Hz sits exactly on the 100 Hz bin grid.
  AudioSignal signal = testsignals::sine(400.0, 0.25, 0.2, rate);
  IsmConfig config;
  std::vector<ism::Frame> frames = ism::segment(signal, config);
  ism::SpectralFrame spec = ism::spectrum(frames[frames.size() / 2], rate);
  CHECK(spec.bin_amp[4] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("segment intensity of a pure tone equals the model's value") {
  const int rate = 48000;
  const ism::PerceptionModel& model = default_model();
  IsmConfig config;

  for (double f : {400.0, 437.0, 951.0}) {
    AudioSignal signal = testsignals::sine(f, 0.3, 0.2, rate);
    std::vector<ism::Frame> frames = ism::segment(signal, config);
    ism::SpectralFrame spec = ism::spectrum(frames[frames.size() / 2], rate);
    double got = ism::segment_intensity(spec, model, config.hf_cutoff_hz);
    double want = model.intensity(f, 0.3);
    CHECK(got == doctest::Approx(want).epsilon(0.03));
  }
}

TEST_CASE("segment intensity adds the contributions of separated tones") {
  const int rate = 48000;
  const ism::PerceptionModel& model = default_model();
  IsmConfig config;
  AudioSignal signal = testsignals::chord(400.0, 800.0, 0.2, 0.2, rate);
  std::vector<ism::Frame> frames = ism::segment(signal, config);
  ism::SpectralFrame spec = ism::spectrum(frames[frames.size() / 2], rate);
  double got = ism::segment_intensity(spec, model, config.hf_cutoff_hz);
  double want = model.intensity(400.0, 0.2) + model.intensity(800.0, 0.2);
  CHECK(got == doctest::Approx(want).epsilon(0.03));
}

TEST_CASE("segment intensity ignores content at or below the cutoff") {
  const int rate = 48000;
  const ism::PerceptionModel& model = default_model();
  IsmConfig config;
  // 50 Hz falls below the 100 Hz cutoff and must contribute nothing.
  AudioSignal lofi = testsignals::sine(50.0, 0.8, 0.2, rate);
  std::vector<ism::Frame> frames = ism::segment(lofi, config);
  ism::SpectralFrame spec = ism::spectrum(frames[frames.size() / 2], rate);
  double got = ism::segment_intensity(spec, model, config.hf_cutoff_hz);
  CHECK(got < model.intensity(400.0, 0.01));
}

TEST_CASE("segment intensity of silence is exactly zero") {
  const int rate = 48000;
  AudioSignal signal;
  signal.sample_rate = rate;
  signal.samples.assign(4800, 0.0);
  IsmConfig config;
  std::vector<ism::Frame> frames = ism::segment(signal, config);
  ism::SpectralFrame spec = ism::spectrum(frames[2], rate);
  CHECK(ism::segment_intensity(spec, default_model(), config.hf_cutoff_hz) ==
        0.0);
}

TEST_CASE("segment intensity agrees with the reference grouping") {
  const int rate = 48000;
  const ism::PerceptionModel& model = default_model();
  oracle::Model ref = oracle::load_default_model();
  IsmConfig config;
  AudioSignal signal =
      testsignals::noise_burst(0.03, 0.4, rate, 0.05, 0.35, 77);
  std::vector<ism::Frame> frames = ism::segment(signal, config);
  for (std::size_t k = 20; k < frames.size(); k += 25) {
    ism::SpectralFrame spec = ism::spectrum(frames[k], rate);
    double got = ism::segment_intensity(spec, model, config.hf_cutoff_hz);
    std::vector<double> amps =
        oracle::dft_amplitudes(frames[k].samples, 480.0 * 0.5);
    double want =
        oracle::frame_intensity(amps, 100.0, ref, config.hf_cutoff_hz);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("intensity series is flat for a stationary tone") {
  const int rate = 48000;
  AudioSignal signal = testsignals::sine(500.0, 0.3, 1.0, rate);
  IsmConfig config;
  ism::IntensityEnvelope series =
      ism::intensity_series(signal, default_model(), config);
  REQUIRE(series.values.size() == 400);
  CHECK(series.rate_hz == doctest::Approx(400.0).epsilon(1e-12));
  CHECK(series.t0_s == 0.0);
  CHECK(series_cov(series.values, 20, 380) < 0.02);
}

TEST_CASE("intensity series matches the full reference chain") {
  const int rate = 48000;
  IsmConfig config;
  AudioSignal signal = testsignals::chord(300.0, 620.0, 0.2, 0.5, rate);
  ism::IntensityEnvelope got =
      ism::intensity_series(signal, default_model(), config);
  std::vector<double> want = oracle::intensity_series(
      signal.samples, rate, oracle::load_default_model(), config.segment_len_s,
      config.hop_s, config.hf_cutoff_hz);
  REQUIRE(got.values.size() == want.size());
  CHECK(oracle::rel_rms_error(got.values, want, 0, want.size()) < 1e-6);
}

TEST_CASE("intensity series tracks an amplitude step within a frame length") {
  const int rate = 48000;
  AudioSignal signal = testsignals::step_tone(400.0, 0.1, 0.3, 1.0, rate);
  IsmConfig config;
  ism::IntensityEnvelope series =
      ism::intensity_series(signal, default_model(), config);

  const ism::PerceptionModel& model = default_model();
  double lo = model.intensity(400.0, 0.1);
  double hi = model.intensity(400.0, 0.3);
  // Frame length is 10 ms, hop 2.5 ms; the transition at 0.5 s must be
  // complete within ceil(frame/hop) = 4 hops on either side.
  std::size_t mid = 200;
  CHECK(series.values[mid - 5] == doctest::Approx(lo).epsilon(0.05));
  CHECK(series.values[mid + 5] == doctest::Approx(hi).epsilon(0.05));
}

TEST_CASE("amplitude series inverts intensity for a stationary input") {
  const int rate = 48000;
  const ism::PerceptionModel& model = default_model();
  IsmConfig config;
  AudioSignal signal = testsignals::sine(500.0, 0.3, 1.0, rate);
  ism::IntensityEnvelope intensity =
      ism::intensity_series(signal, model, config);
  ism::AmplitudeSeriesResult result =
      ism::amplitude_series(intensity, model, config);

  REQUIRE(result.envelope.values.size() == intensity.values.size());
  CHECK(result.envelope.rate_hz == intensity.rate_hz);
  CHECK(result.envelope.carrier_hz == config.carrier_hz);
  CHECK(result.clip_count == 0);

  double mid_intensity = series_mean(intensity.values, 100, 300);
  double want = model.amplitude_for_intensity(config.carrier_hz, mid_intensity);
  double got = series_mean(result.envelope.values, 100, 300);
  CHECK(got == doctest::Approx(want).epsilon(0.01));
  CHECK(result.peak_amplitude >= got);
}

TEST_CASE("amplitude series maps silence to exact zeros") {
  IsmConfig config;
  ism::IntensityEnvelope intensity;
  intensity.values.assign(400, 0.0);
  intensity.rate_hz = 400.0;
  ism::AmplitudeSeriesResult result =
      ism::amplitude_series(intensity, default_model(), config);
  for (double v : result.envelope.values) CHECK(v == 0.0);
  CHECK(result.peak_amplitude == 0.0);
  CHECK(result.clip_count == 0);
}

TEST_CASE("amplitude series suppresses modulation above the envelope cutoff") {
  IsmConfig config;
  const double rate = 400.0;

  // Build two intensity series modulated at 50 Hz and at 150 Hz and
  // compare how much of each modulation survives filtering.
  auto modulated = [&](double mod_hz) {
    ism::IntensityEnvelope intensity;
    intensity.rate_hz = rate;
    intensity.values.resize(1200);
    for (std::size_t k = 0; k < intensity.values.size(); ++k) {
      double t = static_cast<double>(k) / rate;
      intensity.values[k] =
          1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * mod_hz * t);
    }
    return ism::amplitude_series(intensity, default_model(), config).envelope;
  };

  ism::AmplitudeEnvelope pass = modulated(50.0);
  ism::AmplitudeEnvelope stop = modulated(150.0);

  auto swing = [](const ism::AmplitudeEnvelope& env) {
    auto lo = std::min_element(env.values.begin() + 200,
                               env.values.end() - 200);
    auto hi = std::max_element(env.values.begin() + 200,
                               env.values.end() - 200);
    return *hi - *lo;
  };
  CHECK(swing(pass) > 10.0 * swing(stop));
}

TEST_CASE("amplitude series counts clipped samples and clamps them") {
  IsmConfig config;
  config.output_gain = 4.0;
  ism::IntensityEnvelope intensity;
  intensity.rate_hz = 400.0;
  // An intensity of 60 at the default carrier maps to roughly 0.3 drive,
  // so a gain of 4 pushes it past full scale.
  intensity.values.assign(400, 60.0);
  ism::AmplitudeSeriesResult result =
      ism::amplitude_series(intensity, default_model(), config);
  CHECK(result.clip_count == 400);
  CHECK(result.peak_amplitude > 1.0);
  for (double v : result.envelope.values) CHECK(v == 1.0);
}

TEST_CASE("synthesize_am renders the envelope onto the carrier") {
  ism::AmplitudeEnvelope envelope;
  envelope.rate_hz = 400.0;
  envelope.carrier_hz = 200.0;
  envelope.values.assign(400, 0.5);
  const int rate = 48000;
  AudioSignal out = ism::synthesize_am(envelope, rate);
  REQUIRE(out.size() == 48000);
  CHECK(out.sample_rate == rate);

  for (std::size_t n = 1000; n < 47000; n += 997) {
    double t = static_cast<double>(n) / rate;
    double want = 0.5 * std::sin(2.0 * std::numbers::pi * 200.0 * t);
    CHECK(out.samples[n] == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("synthesize_am output length follows the envelope duration") {
  ism::AmplitudeEnvelope envelope;
  envelope.rate_hz = 400.0;
  envelope.carrier_hz = 200.0;
  envelope.values.assign(100, 0.1);
  AudioSignal out = ism::synthesize_am(envelope, 48000);
  CHECK(out.size() == 12000);
}

TEST_CASE("conversion reproduces a tone's intensity at the carrier") {
  const int rate = 48000;
  const ism::PerceptionModel& model = default_model();
  IsmConfig config;
  AudioSignal signal = testsignals::sine(500.0, 0.3, 1.0, rate);
  ism::ConvertResult result = ism::convert(signal, model, config);

  CHECK(result.output.size() == signal.size());
  CHECK(result.report.input_size == signal.size());
  CHECK(result.report.output_size == result.output.size());
  CHECK(result.report.envelope_size == result.amplitude.values.size());
  CHECK(result.report.clip_count == 0);

  // The demodulation product is envelope * (1 - cos(2 * carrier * t)), so
  // its mean over whole double-carrier periods recovers the envelope level.
  // 28080 samples at 48 kHz span exactly 234 such periods of the 200 Hz
  // carrier.
  std::vector<double> product =
      oracle::demodulation_product(result.output.samples, rate, 200.0);
  double want = model.amplitude_for_intensity(
      200.0, model.intensity(500.0, 0.3));
  double got = series_mean(product, 10080, 10080 + 28080);
  CHECK(got == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("conversion of silence returns exact silence") {
  const int rate = 48000;
  AudioSignal signal;
  signal.sample_rate = rate;
  signal.samples.assign(24000, 0.0);
  ism::ConvertResult result =
      ism::convert(signal, default_model(), IsmConfig{});
  for (double v : result.output.samples) CHECK(v == 0.0);
  CHECK(result.report.peak_amplitude == 0.0);
}

TEST_CASE("a louder input never produces a quieter envelope") {
  const int rate = 48000;
  IsmConfig config;
  const ism::PerceptionModel& model = default_model();
  std::vector<double> levels = {0.05, 0.1, 0.2, 0.4};
  double prev = -1.0;
  for (double level : levels) {
    AudioSignal signal = testsignals::sine(600.0, level, 0.5, rate);
    ism::ConvertResult result = ism::convert(signal, model, config);
    double mid = series_mean(result.amplitude.values, 50, 150);
    CHECK(mid > prev);
    prev = mid;
  }
}

TEST_CASE("conversion is deterministic") {
  const int rate = 48000;
  AudioSignal signal =
      testsignals::noise_burst(0.03, 0.5, rate, 0.1, 0.4, 1234);
  ism::ConvertResult a = ism::convert(signal, default_model(), IsmConfig{});
  ism::ConvertResult b = ism::convert(signal, default_model(), IsmConfig{});
  REQUIRE(a.output.samples.size() == b.output.samples.size());
  for (std::size_t n = 0; n < a.output.samples.size(); ++n) {
    CHECK(a.output.samples[n] == b.output.samples[n]);
  }
}

TEST_CASE("low-pass passthrough forwards sub-cutoff content") {
  const int rate = 48000;
  AudioSignal signal = testsignals::sine(60.0, 0.4, 1.0, rate);

  IsmConfig plain;
  ism::ConvertResult without = ism::convert(signal, default_model(), plain);

  IsmConfig with = plain;
  with.lowpass_passthrough = true;
  ism::ConvertResult result = ism::convert(signal, default_model(), with);

  double rms_without = testsignals::rms(without.output.samples, 10000, 38000);
  double rms_with = testsignals::rms(result.output.samples, 10000, 38000);
  CHECK(rms_without < 0.01);
  CHECK(rms_with == doctest::Approx(0.4 / std::numbers::sqrt2).epsilon(0.05));
}

TEST_CASE("configuration validation rejects out-of-range settings") {
  IsmConfig config;
  config.validate(48000);

  IsmConfig bad = config;
  bad.carrier_hz = 50.0;
  CHECK_THROWS_WITH_AS(bad.validate(48000), doctest::Contains("150"),
                       ism::InvalidArgumentError);
  CHECK_THROWS_WITH_AS(bad.validate(48000), doctest::Contains("300"),
                       ism::InvalidArgumentError);
  bad.allow_any_carrier = true;
  bad.hf_cutoff_hz = 40.0;
  bad.envelope_cutoff_hz = 40.0;
  bad.validate(48000);

  bad = config;
  bad.hop_s = 0.02;
  CHECK_THROWS_AS(bad.validate(48000), ism::InvalidArgumentError);

  bad = config;
  bad.hf_cutoff_hz = 250.0;
  CHECK_THROWS_AS(bad.validate(48000), ism::InvalidArgumentError);

  bad = config;
  bad.segment_len_s = 0.0001;
  CHECK_THROWS_AS(bad.validate(48000), ism::InvalidArgumentError);

  bad = config;
  bad.output_gain = -1.0;
  CHECK_THROWS_AS(bad.validate(48000), ism::InvalidArgumentError);

  bad = config;
  bad.hop_s = 0.02;
  bad.segment_len_s = 0.04;
  CHECK_THROWS_AS(bad.validate(48000), ism::InvalidArgumentError);

  CHECK_THROWS_AS(config.validate(1000), ism::InvalidArgumentError);
}

TEST_CASE("conversion validates the signal") {
  AudioSignal empty;
  empty.sample_rate = 48000;
  CHECK_THROWS_AS(ism::convert(empty, default_model(), IsmConfig{}),
                  ism::InvalidArgumentError);

  AudioSignal bad_rate;
  bad_rate.sample_rate = 100;
  bad_rate.samples.assign(100, 0.0);
  CHECK_THROWS_AS(ism::convert(bad_rate, default_model(), IsmConfig{}),
                  ism::InvalidArgumentError);
}
