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

#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "ism/errors.hpp"

using ism::CurvePoint;
using ism::FrequencyCurve;

namespace {

FrequencyCurve make_curve() {
  return FrequencyCurve({{100.0, 0.012},
                         {200.0, 0.0032},
                         {400.0, 0.004},
                         {800.0, 0.02}});
}

}  // namespace

TEST_CASE("curve returns knot values bit for bit") {
  FrequencyCurve curve = make_curve();
  for (const CurvePoint& p : curve.points()) {
    CHECK(curve.value_at(p.frequency_hz) == p.value);
  }
}

TEST_CASE("curve interpolates along straight lines in log-log space") {
  FrequencyCurve curve = make_curve();
  // At the geometric midpoint of two knots the value is their geometric
  // mean.
  double f_mid = std::sqrt(100.0 * 200.0);
  double expected = std::sqrt(0.012 * 0.0032);
  CHECK(curve.value_at(f_mid) == doctest::Approx(expected).epsilon(1e-12));

  f_mid = std::sqrt(400.0 * 800.0);
  expected = std::sqrt(0.004 * 0.02);
  CHECK(curve.value_at(f_mid) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("curve clamps outside the knot range") {
  FrequencyCurve curve = make_curve();
  CHECK(curve.value_at(1.0) == 0.012);
  CHECK(curve.value_at(99.999) == 0.012);
  CHECK(curve.value_at(800.001) == 0.02);
  CHECK(curve.value_at(100000.0) == 0.02);
}

TEST_CASE("interpolated values stay between the bracketing knots") {
  FrequencyCurve curve = make_curve();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pick(100.0, 800.0);
  for (int i = 0; i < 2000; ++i) {
    double f = pick(rng);
    const auto& pts = curve.points();
    for (std::size_t k = 1; k < pts.size(); ++k) {
      if (f > pts[k].frequency_hz) continue;
      double lo = std::min(pts[k - 1].value, pts[k].value);
      double hi = std::max(pts[k - 1].value, pts[k].value);
      double v = curve.value_at(f);
      CHECK(v >= lo - 1e-15);
      CHECK(v <= hi + 1e-15);
      break;
    }
  }
}

TEST_CASE("curve rejects bad point sets") {
  CHECK_THROWS_AS(FrequencyCurve({{100.0, 1.0}}), ism::InvalidArgumentError);
  CHECK_THROWS_AS(FrequencyCurve({{200.0, 1.0}, {100.0, 2.0}}),
                  ism::InvalidArgumentError);
  CHECK_THROWS_AS(FrequencyCurve({{100.0, 1.0}, {100.0, 2.0}}),
                  ism::InvalidArgumentError);
  CHECK_THROWS_AS(FrequencyCurve({{-5.0, 1.0}, {100.0, 2.0}}),
                  ism::InvalidArgumentError);
  CHECK_THROWS_AS(FrequencyCurve({{50.0, 0.0}, {100.0, 2.0}}),
                  ism::InvalidArgumentError);
  double nan = std::nan("");
  CHECK_THROWS_AS(FrequencyCurve({{50.0, nan}, {100.0, 2.0}}),
                  ism::InvalidArgumentError);
}

TEST_CASE("curve rejects bad queries") {
  FrequencyCurve curve = make_curve();
  CHECK_THROWS_AS(curve.value_at(0.0), ism::InvalidArgumentError);
  CHECK_THROWS_AS(curve.value_at(-10.0), ism::InvalidArgumentError);
  CHECK_THROWS_AS(curve.value_at(std::nan("")), ism::InvalidArgumentError);
}

TEST_CASE("parser reads columns, comments, and the units tag") {
  std::istringstream in(
      "# detection threshold\n"
      "# units: normalized-drive\n"
      "\n"
      "100  0.012\n"
      "  200\t0.0032  \n"
      "# trailing comment\n"
      "400 0.004\n");
  FrequencyCurve curve = FrequencyCurve::parse(in, "<test>");
  CHECK(curve.points().size() == 3);
  CHECK(curve.units() == "normalized-drive");
  CHECK(curve.value_at(200.0) == 0.0032);
}

TEST_CASE("parser reports the offending line") {
  std::istringstream in("100 0.012\nnonsense here today\n");
  CHECK_THROWS_WITH_AS(FrequencyCurve::parse(in, "<test>"),
                       doctest::Contains("<test>:2"), ism::FileFormatError);

  std::istringstream three_cols("100 0.012 7\n200 0.003\n");
  CHECK_THROWS_AS(FrequencyCurve::parse(three_cols, "<test>"),
                  ism::FileFormatError);
}

TEST_CASE("loading a missing curve file is an I/O error") {
  CHECK_THROWS_AS(FrequencyCurve::load("/nonexistent/curve.txt"),
                  ism::IoError);
}
