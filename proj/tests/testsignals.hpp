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

// Deterministic signal generators for tests.  The corpus generators model
// four families of percussive/textured source material entirely from seeded
// sines and noise, so the repository needs no audio assets.

#ifndef ISM_TESTS_TESTSGNALS_HPP_
#define ISM_TESTS_TESTSGNALS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ism/audio_signal.hpp"

namespace testsignals {

ism::AudioSignal sine(double freq_hz, double amplitude, double duration_s,
                      int rate);

// Two equal-amplitude tones.
ism::AudioSignal chord(double f1_hz, double f2_hz, double amplitude,
                       double duration_s, int rate);

// White noise under a trapezoid envelope from t0 to t1, silence elsewhere.
ism::AudioSignal noise_burst(double amplitude, double duration_s, int rate,
                             double t0, double t1, std::uint64_t seed);

// Tone whose amplitude steps from a1 to a2 at half time.
ism::AudioSignal step_tone(double freq_hz, double a1, double a2,
                           double duration_s, int rate);

// Band-limited burst (sum of seeded sines in [f_lo, f_hi]) in silence,
// for onset-timing checks.
ism::AudioSignal transient_burst(double duration_s, int rate, double t0,
                                 double burst_len_s, double f_lo, double f_hi,
                                 double amplitude, std::uint64_t seed);

// Corpus class 1: rhythmic friction strokes of band noise (sawing).
ism::AudioSignal corpus_saw(int rate);

// Corpus class 2: dense crackle of short decaying pops (fireworks).
ism::AudioSignal corpus_fireworks(int rate);

// Corpus class 3: impact plus ringing partials and shard tinkles
// (breaking glass).
ism::AudioSignal corpus_glass(int rate);

// Corpus class 4: accelerating pulse train under a rising ramp (tearing).
ism::AudioSignal corpus_tape_rip(int rate);

double peak(const std::vector<double>& x);
double rms(const std::vector<double>& x, std::size_t lo, std::size_t hi);

}  // namespace testsignals

#endif  // ISM_TESTS_TESTSGNALS_HPP_
