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

#ifndef ISM_SIGNAL_IO_HPP_
#define ISM_SIGNAL_IO_HPP_

#include <cstddef>
#include <filesystem>

#include "ism/audio_signal.hpp"

namespace ism {

enum class SampleFormat {
  kPcm16,
  kPcm24,
  kFloat32,
};

struct WavSpec {
  int sample_rate = 48000;
  SampleFormat format = SampleFormat::kPcm16;
};

struct WavContents {
  AudioSignal signal;       // downmixed to mono
  WavSpec spec;
  int source_channels = 0;
  // Float samples outside [-1, 1] that were clamped while reading.
  std::size_t clamped_count = 0;
};

// Reads PCM 16/24-bit and IEEE float 32-bit WAV files.  Multi-channel data
// is downmixed by averaging.  Throws IoError when the file cannot be
// opened, MalformedWavError on container damage, UnsupportedWavError for
// codecs or layouts outside the above.
WavContents read_wav(const std::filesystem::path& path);

// Writes a mono WAV file.  All samples must be finite and in [-1, 1].
// Output bytes depend only on the arguments.
void write_wav(const AudioSignal& signal, const WavSpec& spec,
               const std::filesystem::path& path);

// Two equally long signals at the same rate, played as left/right.
struct StereoStimulus {
  AudioSignal left;
  AudioSignal right;

  int sample_rate() const { return left.sample_rate; }
};

// Left = original, right = converted.  The shorter signal is zero-padded
// at the end; sample 0 stays aligned to sample 0 so shared events keep
// their relative timing.  Rates must match.
StereoStimulus make_stereo_stimulus(const AudioSignal& original,
                                    const AudioSignal& converted);

void write_wav(const StereoStimulus& stimulus, SampleFormat format,
               const std::filesystem::path& path);

// Sine burst with raised-cosine fades of fade_s at both ends (shortened to
// half the signal when it is too short for two full fades).  Starts at
// phase 0.  frequency_hz must sit below the Nyquist limit.
AudioSignal reference_tone(double frequency_hz = 150.0,
                           double amplitude = 0.5, double duration_s = 1.0,
                           int sample_rate = 48000, double fade_s = 0.010);

}  // namespace ism

#endif  // ISM_SIGNAL_IO_HPP_
