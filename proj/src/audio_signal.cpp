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

#include "ism/audio_signal.hpp"

#include <cmath>
#include <string>

#include "ism/errors.hpp"

namespace ism {

void validate(const AudioSignal& signal) {
  if (signal.samples.empty()) {
    throw InvalidArgumentError("audio signal is empty");
  }
  if (signal.sample_rate < kMinSampleRate ||
      signal.sample_rate > kMaxSampleRate) {
    throw InvalidArgumentError(
        "sample rate " + std::to_string(signal.sample_rate) +
        " is outside [" + std::to_string(kMinSampleRate) + ", " +
        std::to_string(kMaxSampleRate) + "] Hz");
  }
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    if (!std::isfinite(signal.samples[i])) {
      throw InvalidArgumentError("sample " + std::to_string(i) +
                                 " is not finite");
    }
  }
}

}  // namespace ism
