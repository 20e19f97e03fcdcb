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

#ifndef ISM_AUDIO_SIGNAL_HPP_
#define ISM_AUDIO_SIGNAL_HPP_

#include <cstddef>
#include <vector>

namespace ism {

inline constexpr int kMinSampleRate = 8000;
inline constexpr int kMaxSampleRate = 192000;

// A mono sample buffer.  Samples are nominally in [-1, 1]; operations that
// require that range say so and check it.
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// Throws InvalidArgumentError if the signal is empty, the rate is outside
// [kMinSampleRate, kMaxSampleRate], or any sample is not finite.
void validate(const AudioSignal& signal);

}  // namespace ism

#endif  // ISM_AUDIO_SIGNAL_HPP_
