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

#include "ism/signal_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "ism/errors.hpp"

namespace ism {
namespace {

constexpr int kMaxChannels = 64;
constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

int bits_for(SampleFormat format) {
  switch (format) {
    case SampleFormat::kPcm16: return 16;
    case SampleFormat::kPcm24: return 24;
    case SampleFormat::kFloat32: return 32;
  }
  throw InvalidArgumentError("unknown sample format");
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

void put_sample(std::vector<std::uint8_t>& out, double x,
                SampleFormat format) {
  switch (format) {
    case SampleFormat::kPcm16: {
      long long q = std::llround(x * 32768.0);
      q = std::clamp<long long>(q, -32768, 32767);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
      return;
    }
    case SampleFormat::kPcm24: {
      long long q = std::llround(x * 8388608.0);
      q = std::clamp<long long>(q, -8388608, 8388607);
      std::uint32_t u = static_cast<std::uint32_t>(q) & 0xFFFFFF;
      out.push_back(static_cast<std::uint8_t>(u & 0xFF));
      out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
      out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
      return;
    }
    case SampleFormat::kFloat32: {
      float f = static_cast<float>(x);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof(u));
      put_u32(out, u);
      return;
    }
  }
}

void check_writable_samples(const std::vector<double>& samples,
                            const char* label) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double s = samples[i];
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
      throw InvalidArgumentError(std::string(label) + " sample " +
                                 std::to_string(i) +
                                 " is outside [-1, 1] or not finite");
    }
  }
}

void write_wav_bytes(const std::vector<const std::vector<double>*>& channels,
                     int sample_rate, SampleFormat format,
                     const std::filesystem::path& path) {
  int num_channels = static_cast<int>(channels.size());
  std::size_t frames = channels[0]->size();
  int bits = bits_for(format);
  int block_align = num_channels * bits / 8;
  std::uint32_t data_size = static_cast<std::uint32_t>(frames * block_align);
  bool pad = data_size % 2 != 0;
  bool is_float = format == SampleFormat::kFloat32;
  // Float files carry the 18-byte fmt variant plus a fact chunk.
  std::uint32_t fmt_size = is_float ? 18 : 16;
  std::uint32_t riff_size = 4 + (8 + fmt_size) + (is_float ? 8 + 4 : 0) +
                            (8 + data_size + (pad ? 1 : 0));

  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + riff_size);
  put_tag(bytes, "RIFF");
  put_u32(bytes, riff_size);
  put_tag(bytes, "WAVE");
  put_tag(bytes, "fmt ");
  put_u32(bytes, fmt_size);
  put_u16(bytes, is_float ? kFormatIeeeFloat : kFormatPcm);
  put_u16(bytes, static_cast<std::uint16_t>(num_channels));
  put_u32(bytes, static_cast<std::uint32_t>(sample_rate));
  put_u32(bytes, static_cast<std::uint32_t>(sample_rate * block_align));
  put_u16(bytes, static_cast<std::uint16_t>(block_align));
  put_u16(bytes, static_cast<std::uint16_t>(bits));
  if (is_float) {
    put_u16(bytes, 0);  // no format extension
    put_tag(bytes, "fact");
    put_u32(bytes, 4);
    put_u32(bytes, static_cast<std::uint32_t>(frames));
  }
  put_tag(bytes, "data");
  put_u32(bytes, data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const std::vector<double>* channel : channels) {
      put_sample(bytes, (*channel)[i], format);
    }
  }
  if (pad) bytes.push_back(0);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

struct ByteReader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  bool has(std::size_t n) const { return bytes.size() - pos >= n; }

  std::string tag() {
    std::string t(reinterpret_cast<const char*>(bytes.data() + pos), 4);
    pos += 4;
    return t;
  }

  std::uint16_t u16() {
    std::uint16_t v = static_cast<std::uint16_t>(bytes[pos]) |
                      static_cast<std::uint16_t>(bytes[pos + 1]) << 8;
    pos += 2;
    return v;
  }

  std::uint32_t u32() {
    std::uint32_t v = static_cast<std::uint32_t>(bytes[pos]) |
                      static_cast<std::uint32_t>(bytes[pos + 1]) << 8 |
                      static_cast<std::uint32_t>(bytes[pos + 2]) << 16 |
                      static_cast<std::uint32_t>(bytes[pos + 3]) << 24;
    pos += 4;
    return v;
  }
};

}  // namespace

WavContents read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failed on " + path.string());
  }

  ByteReader r{bytes};
  if (!r.has(12)) {
    throw MalformedWavError(path.string() + ": too short for a RIFF header");
  }
  if (r.tag() != "RIFF") {
    throw MalformedWavError(path.string() + ": missing RIFF magic");
  }
  r.u32();  // declared RIFF size; tolerate sloppy writers
  if (r.tag() != "WAVE") {
    throw MalformedWavError(path.string() + ": not a WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0;
  int channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
  std::size_t data_pos = 0;
  std::size_t data_size = 0;
  bool have_data = false;

  while (r.has(8)) {
    std::string id = r.tag();
    std::uint32_t size = r.u32();
    if (!r.has(size)) {
      throw MalformedWavError(path.string() + ": chunk '" + id +
                              "' overruns the file");
    }
    if (id == "fmt ") {
      if (size < 16) {
        throw MalformedWavError(path.string() + ": fmt chunk is too small");
      }
      std::size_t end = r.pos + size;
      format_tag = r.u16();
      channels = r.u16();
      sample_rate = r.u32();
      r.u32();  // byte rate
      block_align = r.u16();
      bits = r.u16();
      r.pos = end;
      have_fmt = true;
    } else if (id == "data") {
      data_pos = r.pos;
      data_size = size;
      have_data = true;
      r.pos += size;
    } else {
      r.pos += size;
    }
    if (r.pos % 2 != 0 && r.has(1)) ++r.pos;  // chunk padding
  }

  if (!have_fmt) {
    throw MalformedWavError(path.string() + ": no fmt chunk");
  }
  if (!have_data) {
    throw MalformedWavError(path.string() + ": no data chunk");
  }
  if (format_tag == kFormatExtensible) {
    throw UnsupportedWavError(path.string() +
                              ": WAVE_FORMAT_EXTENSIBLE is not supported");
  }
  SampleFormat format;
  if (format_tag == kFormatPcm && bits == 16) {
    format = SampleFormat::kPcm16;
  } else if (format_tag == kFormatPcm && bits == 24) {
    format = SampleFormat::kPcm24;
  } else if (format_tag == kFormatIeeeFloat && bits == 32) {
    format = SampleFormat::kFloat32;
  } else {
    throw UnsupportedWavError(path.string() + ": codec " +
                              std::to_string(format_tag) + " at " +
                              std::to_string(bits) +
                              " bits is not supported");
  }
  if (channels < 1 || channels > kMaxChannels) {
    throw UnsupportedWavError(path.string() + ": " +
                              std::to_string(channels) +
                              " channels is not supported");
  }
  if (sample_rate < static_cast<std::uint32_t>(kMinSampleRate) ||
      sample_rate > static_cast<std::uint32_t>(kMaxSampleRate)) {
    throw UnsupportedWavError(path.string() + ": sample rate " +
                              std::to_string(sample_rate) +
                              " is outside the supported range");
  }
  std::size_t bytes_per_sample = bits / 8;
  std::size_t expected_align = bytes_per_sample * channels;
  if (block_align != expected_align || data_size % expected_align != 0) {
    throw MalformedWavError(path.string() +
                            ": data size does not match the frame layout");
  }

  std::size_t frames = data_size / expected_align;
  WavContents contents;
  contents.spec.sample_rate = static_cast<int>(sample_rate);
  contents.spec.format = format;
  contents.source_channels = channels;
  contents.signal.sample_rate = static_cast<int>(sample_rate);
  contents.signal.samples.resize(frames);

  const std::uint8_t* p = bytes.data() + data_pos;
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      double v = 0.0;
      switch (format) {
        case SampleFormat::kPcm16: {
          std::int16_t q = static_cast<std::int16_t>(
              static_cast<std::uint16_t>(p[0]) |
              static_cast<std::uint16_t>(p[1]) << 8);
          v = q / 32768.0;
          break;
        }
        case SampleFormat::kPcm24: {
          std::int32_t q = static_cast<std::int32_t>(
              (static_cast<std::uint32_t>(p[0]) << 8 |
               static_cast<std::uint32_t>(p[1]) << 16 |
               static_cast<std::uint32_t>(p[2]) << 24));
          v = (q >> 8) / 8388608.0;
          break;
        }
        case SampleFormat::kFloat32: {
          std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                            static_cast<std::uint32_t>(p[1]) << 8 |
                            static_cast<std::uint32_t>(p[2]) << 16 |
                            static_cast<std::uint32_t>(p[3]) << 24;
          float f;
          std::memcpy(&f, &u, sizeof(f));
          if (!std::isfinite(f)) {
            throw MalformedWavError(path.string() +
                                    ": non-finite float sample at frame " +
                                    std::to_string(i));
          }
          v = f;
          if (v < -1.0 || v > 1.0) {
            v = std::clamp(v, -1.0, 1.0);
            ++contents.clamped_count;
          }
          break;
        }
      }
      acc += v;
      p += bytes_per_sample;
    }
    contents.signal.samples[i] = acc / channels;
  }
  return contents;
}

void write_wav(const AudioSignal& signal, const WavSpec& spec,
               const std::filesystem::path& path) {
  validate(signal);
  if (spec.sample_rate != signal.sample_rate) {
    throw InvalidArgumentError("spec rate " + std::to_string(spec.sample_rate) +
                               " does not match signal rate " +
                               std::to_string(signal.sample_rate));
  }
  check_writable_samples(signal.samples, "signal");
  write_wav_bytes({&signal.samples}, signal.sample_rate, spec.format, path);
}

StereoStimulus make_stereo_stimulus(const AudioSignal& original,
                                    const AudioSignal& converted) {
  validate(original);
  validate(converted);
  if (original.sample_rate != converted.sample_rate) {
    throw InvalidArgumentError(
        "stereo stimulus needs matching rates, got " +
        std::to_string(original.sample_rate) + " and " +
        std::to_string(converted.sample_rate));
  }
  StereoStimulus stimulus{original, converted};
  std::size_t frames =
      std::max(stimulus.left.samples.size(), stimulus.right.samples.size());
  stimulus.left.samples.resize(frames, 0.0);
  stimulus.right.samples.resize(frames, 0.0);
  return stimulus;
}

void write_wav(const StereoStimulus& stimulus, SampleFormat format,
               const std::filesystem::path& path) {
  validate(stimulus.left);
  validate(stimulus.right);
  if (stimulus.left.sample_rate != stimulus.right.sample_rate ||
      stimulus.left.samples.size() != stimulus.right.samples.size()) {
    throw InvalidArgumentError("stereo stimulus channels are inconsistent");
  }
  check_writable_samples(stimulus.left.samples, "left");
  check_writable_samples(stimulus.right.samples, "right");
  write_wav_bytes({&stimulus.left.samples, &stimulus.right.samples},
                  stimulus.sample_rate(), format, path);
}

AudioSignal reference_tone(double frequency_hz, double amplitude,
                           double duration_s, int sample_rate, double fade_s) {
  if (sample_rate < kMinSampleRate || sample_rate > kMaxSampleRate) {
    throw InvalidArgumentError("sample rate " + std::to_string(sample_rate) +
                               " is outside the supported range");
  }
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0 ||
      frequency_hz >= sample_rate / 2.0) {
    throw InvalidArgumentError("tone frequency " +
                               std::to_string(frequency_hz) +
                               " Hz must be positive and below Nyquist");
  }
  if (!std::isfinite(amplitude) || amplitude < 0.0 || amplitude > 1.0) {
    throw InvalidArgumentError("tone amplitude must be in [0, 1]");
  }
  if (!std::isfinite(duration_s) || duration_s <= 0.0) {
    throw InvalidArgumentError("tone duration must be positive");
  }
  if (!std::isfinite(fade_s) || fade_s < 0.0) {
    throw InvalidArgumentError("tone fade must be non-negative");
  }

  std::size_t n = static_cast<std::size_t>(
      std::llround(duration_s * sample_rate));
  if (n == 0) n = 1;
  std::size_t fade_n = static_cast<std::size_t>(
      std::llround(fade_s * sample_rate));
  fade_n = std::min(fade_n, n / 2);

  AudioSignal tone;
  tone.sample_rate = sample_rate;
  tone.samples.resize(n);
  double omega = 2.0 * std::numbers::pi * frequency_hz / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    double gain = 1.0;
    if (fade_n > 0 && i < fade_n) {
      gain = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(fade_n));
    } else if (fade_n > 0 && i >= n - fade_n) {
      gain = 0.5 - 0.5 * std::cos(std::numbers::pi *
                                  static_cast<double>(n - 1 - i) /
                                  static_cast<double>(fade_n));
    }
    tone.samples[i] =
        amplitude * gain * std::sin(omega * static_cast<double>(i));
  }
  return tone;
}

}  // namespace ism
