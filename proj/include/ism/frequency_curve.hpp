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

#ifndef ISM_FREQUENCY_CURVE_HPP_
#define ISM_FREQUENCY_CURVE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ism {

struct CurvePoint {
  double frequency_hz = 0.0;
  double value = 0.0;
};

// A positive-valued function of frequency given by knots, interpolated
// linearly in log-frequency / log-value space.  Queries outside the knot
// range clamp to the end values.  Knot frequencies must be strictly
// increasing and all coordinates strictly positive.
class FrequencyCurve {
 public:
  explicit FrequencyCurve(std::vector<CurvePoint> points);

  // Parses the tabular text format: two whitespace-separated columns
  // (frequency, value) per line, '#' comments, blank lines ignored.
  // A comment of the form "# units: <tag>" sets the units tag.
  // Throws FileFormatError with a line number on bad input.
  static FrequencyCurve parse(std::istream& in, const std::string& origin);
  static FrequencyCurve parse_text(const std::string& text,
                                   const std::string& origin);
  static FrequencyCurve load(const std::filesystem::path& path);

  // Exact at knots: value_at(points()[i].frequency_hz) returns
  // points()[i].value bit for bit.  Throws InvalidArgumentError if
  // frequency_hz is not finite and positive.
  double value_at(double frequency_hz) const;

  double min_frequency() const { return points_.front().frequency_hz; }
  double max_frequency() const { return points_.back().frequency_hz; }
  const std::vector<CurvePoint>& points() const { return points_; }
  const std::string& units() const { return units_; }

 private:
  std::vector<CurvePoint> points_;
  std::vector<double> log_f_;
  std::vector<double> log_v_;
  std::string units_;
};

}  // namespace ism

#endif  // ISM_FREQUENCY_CURVE_HPP_
