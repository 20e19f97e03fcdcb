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

#include "ism/frequency_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ism/errors.hpp"

namespace ism {
namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

FrequencyCurve::FrequencyCurve(std::vector<CurvePoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidArgumentError("frequency curve needs at least 2 points, got " +
                               std::to_string(points_.size()));
  }
  log_f_.reserve(points_.size());
  log_v_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const CurvePoint& p = points_[i];
    if (!std::isfinite(p.frequency_hz) || !std::isfinite(p.value) ||
        p.frequency_hz <= 0.0 || p.value <= 0.0) {
      throw InvalidArgumentError(
          "frequency curve point " + std::to_string(i) +
          " must have positive finite coordinates");
    }
    if (i > 0 && p.frequency_hz <= points_[i - 1].frequency_hz) {
      throw InvalidArgumentError(
          "frequency curve frequencies must be strictly increasing (point " +
          std::to_string(i) + ")");
    }
    log_f_.push_back(std::log(p.frequency_hz));
    log_v_.push_back(std::log(p.value));
  }
}

FrequencyCurve FrequencyCurve::parse(std::istream& in,
                                     const std::string& origin) {
  std::vector<CurvePoint> points;
  std::string units;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty()) continue;
    if (text[0] == '#') {
      auto pos = text.find("units:");
      if (pos != std::string::npos) units = trim(text.substr(pos + 6));
      continue;
    }
    std::istringstream fields(text);
    CurvePoint p;
    std::string rest;
    if (!(fields >> p.frequency_hz >> p.value) || (fields >> rest)) {
      throw FileFormatError(origin + ":" + std::to_string(line_no) +
                            ": expected two numeric columns, got \"" + text +
                            "\"");
    }
    points.push_back(p);
  }
  try {
    FrequencyCurve curve(std::move(points));
    curve.units_ = units;
    return curve;
  } catch (const InvalidArgumentError& e) {
    throw FileFormatError(origin + ": " + e.what());
  }
}

FrequencyCurve FrequencyCurve::parse_text(const std::string& text,
                                          const std::string& origin) {
  std::istringstream in(text);
  return parse(in, origin);
}

FrequencyCurve FrequencyCurve::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open curve file " + path.string());
  }
  return parse(in, path.string());
}

double FrequencyCurve::value_at(double frequency_hz) const {
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0) {
    throw InvalidArgumentError("curve query frequency must be positive, got " +
                               std::to_string(frequency_hz));
  }
  if (frequency_hz <= points_.front().frequency_hz) {
    return points_.front().value;
  }
  if (frequency_hz >= points_.back().frequency_hz) {
    return points_.back().value;
  }
  auto it = std::upper_bound(
      points_.begin(), points_.end(), frequency_hz,
      [](double f, const CurvePoint& p) { return f < p.frequency_hz; });
  std::size_t hi = static_cast<std::size_t>(it - points_.begin());
  if (points_[hi - 1].frequency_hz == frequency_hz) {
    return points_[hi - 1].value;
  }
  double t = (std::log(frequency_hz) - log_f_[hi - 1]) /
             (log_f_[hi] - log_f_[hi - 1]);
  return std::exp(log_v_[hi - 1] + t * (log_v_[hi] - log_v_[hi - 1]));
}

}  // namespace ism
