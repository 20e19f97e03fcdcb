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

#ifndef ISM_HAPTIC_EXPORT_HPP_
#define ISM_HAPTIC_EXPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ism/ism_pipeline.hpp"

namespace ism {

inline constexpr const char kClipSchemaVersion[] = "1.0";
inline constexpr double kClipValueTolerance = 0.01;
inline constexpr std::size_t kClipMaxPointsDefault = 2000;

struct EnvelopePoint {
  double time_s = 0.0;
  double value = 0.0;

  friend bool operator==(const EnvelopePoint&, const EnvelopePoint&) = default;
};

// Piecewise-linear map in plain coordinates (unlike FrequencyCurve this
// allows zero), clamped outside the knot range.  X must be strictly
// increasing and everything finite; values must lie in [0, 1].
class PiecewiseLinearMap {
 public:
  explicit PiecewiseLinearMap(std::vector<EnvelopePoint> points);

  static PiecewiseLinearMap load(const std::filesystem::path& path);

  double value_at(double x) const;
  const std::vector<EnvelopePoint>& points() const { return points_; }

 private:
  std::vector<EnvelopePoint> points_;
};

// Device response correction applied on export.  amplitude_map takes the
// physical drive in [0, 1] to the haptic API amplitude; frequency_map
// takes the carrier frequency in Hz to the API frequency control.  Both
// outputs are in [0, 1].
struct DeviceCalibration {
  PiecewiseLinearMap amplitude_map;
  PiecewiseLinearMap frequency_map;

  static DeviceCalibration identity();
};

struct ClipMetadata {
  std::string source;
  double carrier_hz = 0.0;
  std::string tool_version;
  std::string config_hash;
  // Metadata keys this library does not define, preserved on rewrite.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct HapticClip {
  std::string version = kClipSchemaVersion;
  ClipMetadata metadata;
  std::vector<EnvelopePoint> amplitude;  // time-ordered, values in [0, 1]
  std::vector<EnvelopePoint> frequency;
  // Unknown top-level keys, preserved on rewrite.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

// Reduces a sampled polyline (as time/value points) to at most max_points
// points by greedily inserting the point with the largest vertical
// deviation from the current approximation until that deviation drops to
// tolerance or the budget is exhausted.  Endpoints are always kept.
std::vector<EnvelopePoint> simplify_polyline(std::span<const EnvelopePoint> in,
                                             double tolerance,
                                             std::size_t max_points);

// Converts an amplitude envelope to a clip: calibrates each value through
// calibration.amplitude_map, simplifies to at most max_points amplitude
// points (piecewise-linear reconstruction error at the envelope's sample
// times stays within kClipValueTolerance when the budget allows), and lays
// down a constant two-point frequency track at
// calibration.frequency_map(envelope.carrier_hz).  metadata.carrier_hz is
// filled from the envelope.
HapticClip to_haptic_clip(const AmplitudeEnvelope& envelope,
                          const DeviceCalibration& calibration,
                          std::size_t max_points = kClipMaxPointsDefault,
                          ClipMetadata metadata = {});

// Checks clip invariants: version, non-empty point lists starting at time
// 0 with non-decreasing times, finite values in [0, 1], amplitude track at
// least as long as the frequency track.  Throws ClipFormatError naming the
// first offending element.
void validate_clip(const HapticClip& clip);

// Serialization is canonical: key order fixed, two-space indent, shortest
// round-trip number form.  Equal clips give equal bytes, and
// serialize(parse(s)) == s for any s this library wrote.
std::string serialize_clip(const HapticClip& clip);
void write_clip(const HapticClip& clip, const std::filesystem::path& path);

HapticClip parse_clip_text(const std::string& text);
HapticClip parse_clip(const std::filesystem::path& path);

struct LintReport {
  std::size_t amplitude_points = 0;
  double duration_s = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  // Smallest positive spacing between consecutive amplitude points.
  double min_spacing_s = 0.0;
  std::vector<std::string> warnings;
  std::size_t bandwidth_warning_count = 0;
};

// Flags amplitude fluctuation the device cannot follow: value reversals of
// kClipValueTolerance or more whose spacing implies a fluctuation rate
// above cutoff_hz.
LintReport lint_clip(const HapticClip& clip, double cutoff_hz = 100.0);

}  // namespace ism

#endif  // ISM_HAPTIC_EXPORT_HPP_
