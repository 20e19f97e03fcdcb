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

#include "ism/haptic_export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "ism/errors.hpp"

namespace ism {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void schema_error(const std::string& what) {
  throw ClipFormatError(ClipFormatError::Kind::kSchemaViolation, what);
}

[[noreturn]] void invariant_error(const std::string& what) {
  throw ClipFormatError(ClipFormatError::Kind::kInvariantViolation, what);
}

std::string format_time(double t) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << t;
  return out.str();
}

}  // namespace

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<EnvelopePoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidArgumentError("calibration map needs at least 2 points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const EnvelopePoint& p = points_[i];
    if (!std::isfinite(p.time_s) || !std::isfinite(p.value)) {
      throw InvalidArgumentError("calibration point " + std::to_string(i) +
                                 " is not finite");
    }
    if (p.value < 0.0 || p.value > 1.0) {
      throw InvalidArgumentError("calibration value at point " +
                                 std::to_string(i) +
                                 " is outside [0, 1]");
    }
    if (i > 0 && p.time_s <= points_[i - 1].time_s) {
      throw InvalidArgumentError(
          "calibration inputs must be strictly increasing (point " +
          std::to_string(i) + ")");
    }
  }
}

PiecewiseLinearMap PiecewiseLinearMap::load(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open calibration file " + path.string());
  }
  std::vector<EnvelopePoint> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    std::istringstream fields(text);
    EnvelopePoint p;
    std::string rest;
    if (!(fields >> p.time_s >> p.value) || (fields >> rest)) {
      throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                            ": expected two numeric columns, got \"" + text +
                            "\"");
    }
    points.push_back(p);
  }
  try {
    return PiecewiseLinearMap(std::move(points));
  } catch (const InvalidArgumentError& e) {
    throw FileFormatError(path.string() + ": " + e.what());
  }
}

double PiecewiseLinearMap::value_at(double x) const {
  if (!std::isfinite(x)) {
    throw InvalidArgumentError("calibration input is not finite");
  }
  if (x <= points_.front().time_s) return points_.front().value;
  if (x >= points_.back().time_s) return points_.back().value;
  auto it = std::upper_bound(
      points_.begin(), points_.end(), x,
      [](double q, const EnvelopePoint& p) { return q < p.time_s; });
  std::size_t hi = static_cast<std::size_t>(it - points_.begin());
  const EnvelopePoint& a = points_[hi - 1];
  const EnvelopePoint& b = points_[hi];
  if (a.time_s == x) return a.value;
  double t = (x - a.time_s) / (b.time_s - a.time_s);
  return a.value + t * (b.value - a.value);
}

DeviceCalibration DeviceCalibration::identity() {
  return DeviceCalibration{
      PiecewiseLinearMap({{0.0, 0.0}, {1.0, 1.0}}),
      PiecewiseLinearMap({{0.0, 0.0}, {500.0, 1.0}}),
  };
}

std::vector<EnvelopePoint> simplify_polyline(std::span<const EnvelopePoint> in,
                                             double tolerance,
                                             std::size_t max_points) {
  if (in.empty()) {
    throw InvalidArgumentError("cannot simplify an empty polyline");
  }
  if (max_points < 2) {
    throw InvalidArgumentError("point budget must be at least 2");
  }
  if (!(tolerance >= 0.0)) {
    throw InvalidArgumentError("tolerance must be non-negative");
  }
  if (in.size() <= 2) {
    return {in.begin(), in.end()};
  }
  std::size_t last = in.size() - 1;

  // Vertical deviation of the worst interior sample from the (i, j) chord.
  auto worst_in = [&](std::size_t i, std::size_t j) {
    double best_err = 0.0;
    std::size_t best_k = i;
    double t0 = in[i].time_s;
    double t1 = in[j].time_s;
    double span = t1 - t0;
    for (std::size_t k = i + 1; k < j; ++k) {
      double f = span > 0.0 ? (in[k].time_s - t0) / span : 0.0;
      double chord = in[i].value + f * (in[j].value - in[i].value);
      double err = std::abs(in[k].value - chord);
      if (err > best_err) {
        best_err = err;
        best_k = k;
      }
    }
    return std::make_pair(best_err, best_k);
  };

  using Entry = std::tuple<double, std::size_t, std::size_t, std::size_t>;
  std::priority_queue<Entry> heap;
  std::map<std::size_t, std::size_t> segments;

  auto add_segment = [&](std::size_t i, std::size_t j) {
    segments[i] = j;
    if (j > i + 1) {
      auto [err, k] = worst_in(i, j);
      if (err > tolerance) heap.push({err, i, j, k});
    }
  };

  add_segment(0, last);
  std::size_t kept = 2;
  while (!heap.empty() && kept < max_points) {
    auto [err, i, j, k] = heap.top();
    heap.pop();
    if (segments[i] != j) continue;  // split since queued
    add_segment(i, k);
    add_segment(k, j);
    ++kept;
  }

  std::vector<EnvelopePoint> out;
  out.reserve(kept);
  out.push_back(in[0]);
  std::size_t idx = 0;
  while (idx != last) {
    idx = segments[idx];
    out.push_back(in[idx]);
  }
  return out;
}

HapticClip to_haptic_clip(const AmplitudeEnvelope& envelope,
                          const DeviceCalibration& calibration,
                          std::size_t max_points, ClipMetadata metadata) {
  if (envelope.values.empty() || envelope.rate_hz <= 0.0) {
    throw InvalidArgumentError("amplitude envelope is empty or has no rate");
  }
  if (!std::isfinite(envelope.carrier_hz) || envelope.carrier_hz <= 0.0) {
    throw InvalidArgumentError("amplitude envelope carrier must be positive");
  }

  std::vector<EnvelopePoint> sampled(envelope.values.size());
  for (std::size_t k = 0; k < sampled.size(); ++k) {
    double v = envelope.values[k];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw InvalidArgumentError("envelope value " + std::to_string(k) +
                                 " is outside [0, 1]");
    }
    sampled[k].time_s = static_cast<double>(k) / envelope.rate_hz;
    sampled[k].value = calibration.amplitude_map.value_at(v);
  }

  HapticClip clip;
  clip.metadata = std::move(metadata);
  clip.metadata.carrier_hz = envelope.carrier_hz;
  clip.amplitude = simplify_polyline(sampled, kClipValueTolerance, max_points);

  double duration = sampled.back().time_s;
  double api_frequency =
      calibration.frequency_map.value_at(envelope.carrier_hz);
  clip.frequency.push_back({0.0, api_frequency});
  if (duration > 0.0) {
    clip.frequency.push_back({duration, api_frequency});
  }
  return clip;
}

void validate_clip(const HapticClip& clip) {
  if (clip.version != kClipSchemaVersion) {
    schema_error("clip version \"" + clip.version +
                 "\" is not supported; expected \"" + kClipSchemaVersion +
                 "\"");
  }
  if (!std::isfinite(clip.metadata.carrier_hz) ||
      clip.metadata.carrier_hz < 0.0) {
    invariant_error("metadata carrier_hz must be finite and non-negative");
  }

  auto check_track = [](const std::vector<EnvelopePoint>& track,
                        const char* name) {
    if (track.empty()) {
      invariant_error(std::string(name) + " track is empty");
    }
    if (track.front().time_s != 0.0) {
      invariant_error(std::string(name) + " track must start at time 0, got " +
                      format_time(track.front().time_s));
    }
    for (std::size_t i = 0; i < track.size(); ++i) {
      const EnvelopePoint& p = track[i];
      if (!std::isfinite(p.time_s) || p.time_s < 0.0) {
        invariant_error(std::string(name) + " point " + std::to_string(i) +
                        " has a bad time");
      }
      if (!std::isfinite(p.value) || p.value < 0.0 || p.value > 1.0) {
        invariant_error(std::string(name) + " point " + std::to_string(i) +
                        " has a value outside [0, 1]");
      }
      if (i > 0 && p.time_s < track[i - 1].time_s) {
        invariant_error(std::string(name) + " point " + std::to_string(i) +
                        " goes back in time");
      }
    }
  };
  check_track(clip.amplitude, "amplitude");
  check_track(clip.frequency, "frequency");
  if (clip.frequency.back().time_s > clip.amplitude.back().time_s) {
    invariant_error("frequency track outlasts the amplitude track");
  }
}

std::string serialize_clip(const HapticClip& clip) {
  validate_clip(clip);
  ordered_json j;
  j["version"] = clip.version;
  ordered_json meta;
  meta["source"] = clip.metadata.source;
  meta["carrier_hz"] = clip.metadata.carrier_hz;
  meta["tool_version"] = clip.metadata.tool_version;
  meta["config_hash"] = clip.metadata.config_hash;
  for (const auto& [key, value] : clip.metadata.extra.items()) {
    meta[key] = value;
  }
  j["metadata"] = std::move(meta);
  auto track = [](const std::vector<EnvelopePoint>& points) {
    ordered_json list = ordered_json::array();
    for (const EnvelopePoint& p : points) {
      ordered_json entry;
      entry["time"] = p.time_s;
      entry["value"] = p.value;
      list.push_back(std::move(entry));
    }
    return list;
  };
  j["amplitude"] = track(clip.amplitude);
  j["frequency"] = track(clip.frequency);
  for (const auto& [key, value] : clip.extra.items()) {
    j[key] = value;
  }
  return j.dump(2) + "\n";
}

void write_clip(const HapticClip& clip, const std::filesystem::path& path) {
  std::string text = serialize_clip(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

namespace {

std::vector<EnvelopePoint> parse_track(const ordered_json& list,
                                       const std::string& name) {
  if (!list.is_array()) {
    schema_error("\"" + name + "\" must be an array of points");
  }
  std::vector<EnvelopePoint> track;
  track.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const ordered_json& entry = list[i];
    if (!entry.is_object()) {
      schema_error(name + " point " + std::to_string(i) +
                   " must be an object");
    }
    EnvelopePoint p;
    bool have_time = false;
    bool have_value = false;
    for (const auto& [key, value] : entry.items()) {
      if (key == "time") {
        if (!value.is_number()) {
          schema_error(name + " point " + std::to_string(i) +
                       ": \"time\" must be a number");
        }
        p.time_s = value.get<double>();
        have_time = true;
      } else if (key == "value") {
        if (!value.is_number()) {
          schema_error(name + " point " + std::to_string(i) +
                       ": \"value\" must be a number");
        }
        p.value = value.get<double>();
        have_value = true;
      } else {
        schema_error(name + " point " + std::to_string(i) +
                     " has unknown key \"" + key + "\"");
      }
    }
    if (!have_time || !have_value) {
      schema_error(name + " point " + std::to_string(i) +
                   " needs \"time\" and \"value\"");
    }
    track.push_back(p);
  }
  return track;
}

}  // namespace

HapticClip parse_clip_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ClipFormatError(ClipFormatError::Kind::kMalformedJson, e.what());
  }
  if (!j.is_object()) {
    schema_error("clip root must be a JSON object");
  }

  HapticClip clip;
  clip.version.clear();
  bool have_version = false;
  bool have_amplitude = false;
  bool have_frequency = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "version") {
      if (!value.is_string()) schema_error("\"version\" must be a string");
      clip.version = value.get<std::string>();
      have_version = true;
    } else if (key == "metadata") {
      if (!value.is_object()) schema_error("\"metadata\" must be an object");
      for (const auto& [mkey, mvalue] : value.items()) {
        if (mkey == "source") {
          if (!mvalue.is_string()) {
            schema_error("metadata \"source\" must be a string");
          }
          clip.metadata.source = mvalue.get<std::string>();
        } else if (mkey == "carrier_hz") {
          if (!mvalue.is_number()) {
            schema_error("metadata \"carrier_hz\" must be a number");
          }
          clip.metadata.carrier_hz = mvalue.get<double>();
        } else if (mkey == "tool_version") {
          if (!mvalue.is_string()) {
            schema_error("metadata \"tool_version\" must be a string");
          }
          clip.metadata.tool_version = mvalue.get<std::string>();
        } else if (mkey == "config_hash") {
          if (!mvalue.is_string()) {
            schema_error("metadata \"config_hash\" must be a string");
          }
          clip.metadata.config_hash = mvalue.get<std::string>();
        } else {
          clip.metadata.extra[mkey] = mvalue;
        }
      }
    } else if (key == "amplitude") {
      clip.amplitude = parse_track(value, "amplitude");
      have_amplitude = true;
    } else if (key == "frequency") {
      clip.frequency = parse_track(value, "frequency");
      have_frequency = true;
    } else {
      clip.extra[key] = value;
    }
  }
  if (!have_version) schema_error("clip is missing \"version\"");
  if (!have_amplitude) schema_error("clip is missing \"amplitude\"");
  if (!have_frequency) schema_error("clip is missing \"frequency\"");

  validate_clip(clip);
  return clip;
}

HapticClip parse_clip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed on " + path.string());
  }
  try {
    return parse_clip_text(buffer.str());
  } catch (const ClipFormatError& e) {
    throw ClipFormatError(e.kind(), path.string() + ": " + e.what());
  }
}

LintReport lint_clip(const HapticClip& clip, double cutoff_hz) {
  if (!std::isfinite(cutoff_hz) || cutoff_hz <= 0.0) {
    throw InvalidArgumentError("lint cutoff must be positive");
  }
  validate_clip(clip);

  const std::vector<EnvelopePoint>& amp = clip.amplitude;
  LintReport report;
  report.amplitude_points = amp.size();
  report.duration_s = amp.back().time_s;
  report.min_value = amp.front().value;
  report.max_value = amp.front().value;
  report.min_spacing_s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    report.min_value = std::min(report.min_value, amp[i].value);
    report.max_value = std::max(report.max_value, amp[i].value);
    if (i > 0) {
      double gap = amp[i].time_s - amp[i - 1].time_s;
      if (gap > 0.0) report.min_spacing_s = std::min(report.min_spacing_s, gap);
    }
  }
  if (!std::isfinite(report.min_spacing_s)) report.min_spacing_s = 0.0;

  // Compress the track to alternating extrema; a run of moves in one
  // direction keeps only its endpoint.
  std::vector<EnvelopePoint> extrema;
  extrema.push_back(amp.front());
  int direction = 0;
  for (std::size_t i = 1; i < amp.size(); ++i) {
    double d = amp[i].value - extrema.back().value;
    if (d == 0.0) continue;
    int s = d > 0.0 ? 1 : -1;
    if (s == direction) {
      extrema.back() = amp[i];
    } else {
      extrema.push_back(amp[i]);
      direction = s;
    }
  }

  constexpr std::size_t kMaxListedWarnings = 20;
  for (std::size_t j = 1; j + 1 < extrema.size(); ++j) {
    double swing_before = std::abs(extrema[j].value - extrema[j - 1].value);
    double swing_after = std::abs(extrema[j + 1].value - extrema[j].value);
    if (std::min(swing_before, swing_after) < kClipValueTolerance) continue;
    double gap = std::min(extrema[j].time_s - extrema[j - 1].time_s,
                          extrema[j + 1].time_s - extrema[j].time_s);
    double implied_hz = gap > 0.0 ? 1.0 / (2.0 * gap)
                                  : std::numeric_limits<double>::infinity();
    if (implied_hz <= cutoff_hz) continue;
    ++report.bandwidth_warning_count;
    if (report.warnings.size() < kMaxListedWarnings) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "amplitude reversal at t=" << format_time(extrema[j].time_s)
          << " s implies a " << std::llround(implied_hz)
          << " Hz fluctuation, above the " << cutoff_hz << " Hz limit";
      report.warnings.push_back(msg.str());
    }
  }
  if (report.bandwidth_warning_count > report.warnings.size()) {
    report.warnings.push_back(
        "... and " +
        std::to_string(report.bandwidth_warning_count -
                       report.warnings.size()) +
        " more bandwidth warnings");
  }
  return report;
}

}  // namespace ism
