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

#include "ism/perception_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ism/errors.hpp"

#include "default_curves.inc"

namespace ism {

PerceptionModel::PerceptionModel(FrequencyCurve threshold,
                                 FrequencyCurve exponent,
                                 double min_frequency_hz,
                                 double max_frequency_hz)
    : threshold_(std::move(threshold)),
      exponent_(std::move(exponent)),
      min_frequency_hz_(min_frequency_hz),
      max_frequency_hz_(max_frequency_hz) {
  if (!std::isfinite(min_frequency_hz_) || !std::isfinite(max_frequency_hz_) ||
      min_frequency_hz_ <= 0.0 || max_frequency_hz_ <= min_frequency_hz_) {
    throw InvalidArgumentError("perception model band [" +
                               std::to_string(min_frequency_hz_) + ", " +
                               std::to_string(max_frequency_hz_) +
                               "] Hz is not a positive interval");
  }
  if (threshold_.min_frequency() > min_frequency_hz_ ||
      threshold_.max_frequency() < max_frequency_hz_) {
    throw InvalidArgumentError(
        "threshold curve covers [" + std::to_string(threshold_.min_frequency()) +
        ", " + std::to_string(threshold_.max_frequency()) +
        "] Hz but the model band is [" + std::to_string(min_frequency_hz_) +
        ", " + std::to_string(max_frequency_hz_) + "] Hz");
  }
  // The exponent is piecewise monotone between knots in log-log space, so
  // checking the band edges and every in-band knot bounds it everywhere.
  auto check_alpha = [this](double f) {
    double a = exponent_.value_at(f);
    if (a <= 0.0 || a > 2.0) {
      throw InvalidArgumentError("exponent " + std::to_string(a) + " at " +
                                 std::to_string(f) +
                                 " Hz is outside (0, 2]");
    }
  };
  check_alpha(min_frequency_hz_);
  check_alpha(max_frequency_hz_);
  for (const CurvePoint& p : exponent_.points()) {
    if (p.frequency_hz > min_frequency_hz_ &&
        p.frequency_hz < max_frequency_hz_) {
      check_alpha(p.frequency_hz);
    }
  }
}

double PerceptionModel::clamp_frequency(double frequency_hz) const {
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0) {
    throw InvalidArgumentError("frequency must be positive, got " +
                               std::to_string(frequency_hz));
  }
  return std::clamp(frequency_hz, min_frequency_hz_, max_frequency_hz_);
}

double PerceptionModel::threshold_at(double frequency_hz) const {
  return threshold_.value_at(clamp_frequency(frequency_hz));
}

double PerceptionModel::exponent_at(double frequency_hz) const {
  return exponent_.value_at(clamp_frequency(frequency_hz));
}

double PerceptionModel::intensity(double frequency_hz,
                                  double amplitude) const {
  double f = clamp_frequency(frequency_hz);
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw InvalidArgumentError("amplitude must be non-negative, got " +
                               std::to_string(amplitude));
  }
  if (amplitude == 0.0) return 0.0;
  double ratio = amplitude / threshold_.value_at(f);
  return std::pow(ratio * ratio, exponent_.value_at(f));
}

double PerceptionModel::amplitude_for_intensity(double frequency_hz,
                                                double intensity) const {
  double f = clamp_frequency(frequency_hz);
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw InvalidArgumentError("intensity must be non-negative, got " +
                               std::to_string(intensity));
  }
  if (intensity == 0.0) return 0.0;
  return threshold_.value_at(f) *
         std::pow(intensity, 1.0 / (2.0 * exponent_.value_at(f)));
}

const PerceptionModel& default_model() {
  static const PerceptionModel model(
      FrequencyCurve::parse_text(kDefaultThresholdCurve,
                                 "<built-in threshold>"),
      FrequencyCurve::parse_text(kDefaultExponentCurve, "<built-in exponent>"),
      kDefaultModelMinHz, kDefaultModelMaxHz);
  return model;
}

PerceptionModel load_model(const std::filesystem::path& threshold_path,
                           const std::filesystem::path& exponent_path) {
  return PerceptionModel(FrequencyCurve::load(threshold_path),
                         FrequencyCurve::load(exponent_path),
                         kDefaultModelMinHz, kDefaultModelMaxHz);
}

}  // namespace ism
