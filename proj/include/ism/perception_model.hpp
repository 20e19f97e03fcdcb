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

#ifndef ISM_PERCEPTION_MODEL_HPP_
#define ISM_PERCEPTION_MODEL_HPP_

#include <filesystem>

#include "ism/frequency_curve.hpp"

namespace ism {

// Psychophysical intensity model for vibrotactile stimulation.  A sinusoid
// of amplitude a at frequency f maps to the scalar intensity
//
//   I(f, a) = ((a / A_T(f))^2) ^ alpha(f)
//
// where A_T is the detection threshold curve and alpha the compression
// exponent curve.  Frequencies are clamped to [min_frequency_hz,
// max_frequency_hz] before evaluating either curve, so out-of-band queries
// use the band-edge characteristics.
class PerceptionModel {
 public:
  // Requires: threshold knots cover the whole valid band, and alpha lies in
  // (0, 2] everywhere on it.  Throws InvalidArgumentError otherwise.
  PerceptionModel(FrequencyCurve threshold, FrequencyCurve exponent,
                  double min_frequency_hz, double max_frequency_hz);

  double threshold_at(double frequency_hz) const;
  double exponent_at(double frequency_hz) const;

  // intensity(f, 0) == 0, intensity(f, A_T(f)) == 1, strictly increasing in
  // the amplitude.  Throws InvalidArgumentError on a negative or non-finite
  // amplitude or a non-positive frequency.
  double intensity(double frequency_hz, double amplitude) const;

  // Exact inverse of intensity() in the amplitude argument.
  double amplitude_for_intensity(double frequency_hz, double intensity) const;

  double min_frequency_hz() const { return min_frequency_hz_; }
  double max_frequency_hz() const { return max_frequency_hz_; }
  const FrequencyCurve& threshold_curve() const { return threshold_; }
  const FrequencyCurve& exponent_curve() const { return exponent_; }

 private:
  double clamp_frequency(double frequency_hz) const;

  FrequencyCurve threshold_;
  FrequencyCurve exponent_;
  double min_frequency_hz_;
  double max_frequency_hz_;
};

inline constexpr double kDefaultModelMinHz = 100.0;
inline constexpr double kDefaultModelMaxHz = 1000.0;

// The model built from the curve tables shipped in data/, baked in at
// compile time.
const PerceptionModel& default_model();

// Builds a model from curve files on disk, using the default valid band.
PerceptionModel load_model(const std::filesystem::path& threshold_path,
                           const std::filesystem::path& exponent_path);

}  // namespace ism

#endif  // ISM_PERCEPTION_MODEL_HPP_
