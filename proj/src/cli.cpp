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

#include "ism/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ism/errors.hpp"
#include "ism/haptic_export.hpp"
#include "ism/ism_pipeline.hpp"
#include "ism/perception_model.hpp"
#include "ism/signal_io.hpp"
#include "ism/version.hpp"

namespace ism {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr const char kThresholdFileName[] = "pacinian_threshold.txt";
constexpr const char kExponentFileName[] = "pacinian_exponent.txt";

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << value;
  return out.str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ClipFormatError*>(&e) != nullptr) {
    return kExitValidationError;
  }
  if (dynamic_cast<const MalformedWavError*>(&e) != nullptr ||
      dynamic_cast<const UnsupportedWavError*>(&e) != nullptr) {
    return kExitIoError;
  }
  if (dynamic_cast<const FileFormatError*>(&e) != nullptr ||
      dynamic_cast<const InvalidArgumentError*>(&e) != nullptr) {
    return kExitValidationError;
  }
  return kExitIoError;
}

// Options shared by every command that runs the conversion pipeline.
struct PipelineOptions {
  IsmConfig config;
  std::string config_path;
  std::string model_dir;
  std::string threshold_path;
  std::string exponent_path;
  std::string cal_amplitude_path;
  std::string cal_frequency_path;
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& options) {
  cmd->add_option("--carrier", options.config.carrier_hz,
                  "Carrier frequency in Hz")
      ->capture_default_str();
  cmd->add_option("--segment-len", options.config.segment_len_s,
                  "Analysis segment length in seconds")
      ->capture_default_str();
  cmd->add_option("--hop", options.config.hop_s,
                  "Analysis hop in seconds (sets the envelope rate)")
      ->capture_default_str();
  cmd->add_option("--hf-cutoff", options.config.hf_cutoff_hz,
                  "Content above this frequency in Hz is remapped")
      ->capture_default_str();
  cmd->add_option("--envelope-cutoff", options.config.envelope_cutoff_hz,
                  "Envelope bandwidth limit in Hz")
      ->capture_default_str();
  cmd->add_option("--gain", options.config.output_gain,
                  "Gain applied to the output envelope")
      ->capture_default_str();
  cmd->add_flag("--passthrough", options.config.lowpass_passthrough,
                "Mix the input's content below the cutoff into the output");
  cmd->add_flag("--allow-any-carrier", options.config.allow_any_carrier,
                "Accept carriers outside the recommended range");
  cmd->add_option("--model-dir", options.model_dir,
                  "Directory holding " + std::string(kThresholdFileName) +
                      " and " + kExponentFileName)
      ->envname("ISM_MODEL_DIR");
  cmd->add_option("--threshold", options.threshold_path,
                  "Detection threshold curve file (overrides --model-dir)");
  cmd->add_option("--exponent", options.exponent_path,
                  "Intensity exponent curve file (overrides --model-dir)");
  cmd->add_option("--cal-amplitude", options.cal_amplitude_path,
                  "Device amplitude calibration map");
  cmd->add_option("--cal-frequency", options.cal_frequency_path,
                  "Device frequency calibration map");
  cmd->add_option("--config", options.config_path,
                  "Read options from a key=value file; flags take precedence");
}

// CLI11 only consults config files attached to the root command, so the
// per-subcommand file is applied here: each key=value line fills the
// matching option unless the command line already set it.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::vector<CLI::ConfigItem> items;
  try {
    items = cmd->get_config_formatter()->from_file(path);
  } catch (const CLI::FileError&) {
    throw IoError("cannot read config file " + path);
  }
  for (const CLI::ConfigItem& item : items) {
    CLI::Option* option = item.parents.empty()
                              ? cmd->get_option_no_throw("--" + item.name)
                              : nullptr;
    if (option == nullptr || item.name == "config") {
      throw InvalidArgumentError("config file key \"" + item.fullname() +
                                 "\" is not recognized");
    }
    if (!option->empty()) continue;
    if (option->get_expected_min() == 0) {
      std::string value = cmd->get_config_formatter()->to_flag(item);
      option->add_result(option->get_flag_value(item.name, value));
    } else {
      option->add_result(item.inputs);
    }
    option->run_callback();
  }
}

PerceptionModel resolve_model(const PipelineOptions& options) {
  if (!options.threshold_path.empty() || !options.exponent_path.empty()) {
    if (options.threshold_path.empty() || options.exponent_path.empty()) {
      throw InvalidArgumentError(
          "--threshold and --exponent must be given together");
    }
    return load_model(options.threshold_path, options.exponent_path);
  }
  if (!options.model_dir.empty()) {
    fs::path dir = options.model_dir;
    return load_model(dir / kThresholdFileName, dir / kExponentFileName);
  }
  return default_model();
}

DeviceCalibration resolve_calibration(const PipelineOptions& options) {
  DeviceCalibration calibration = DeviceCalibration::identity();
  if (!options.cal_amplitude_path.empty()) {
    calibration.amplitude_map =
        PiecewiseLinearMap::load(options.cal_amplitude_path);
  }
  if (!options.cal_frequency_path.empty()) {
    calibration.frequency_map =
        PiecewiseLinearMap::load(options.cal_frequency_path);
  }
  return calibration;
}

std::string describe_config(const IsmConfig& config,
                            const PerceptionModel& model,
                            const DeviceCalibration& calibration) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "carrier=" << config.carrier_hz
      << ";segment=" << config.segment_len_s << ";hop=" << config.hop_s
      << ";hf_cutoff=" << config.hf_cutoff_hz
      << ";envelope_cutoff=" << config.envelope_cutoff_hz
      << ";gain=" << config.output_gain
      << ";passthrough=" << (config.lowpass_passthrough ? 1 : 0)
      << ";window=hann";
  out << ";threshold=";
  for (const CurvePoint& p : model.threshold_curve().points()) {
    out << p.frequency_hz << ":" << p.value << ",";
  }
  out << ";exponent=";
  for (const CurvePoint& p : model.exponent_curve().points()) {
    out << p.frequency_hz << ":" << p.value << ",";
  }
  out << ";cal_amplitude=";
  for (const EnvelopePoint& p : calibration.amplitude_map.points()) {
    out << p.time_s << ":" << p.value << ",";
  }
  out << ";cal_frequency=";
  for (const EnvelopePoint& p : calibration.frequency_map.points()) {
    out << p.time_s << ":" << p.value << ",";
  }
  return out.str();
}

SampleFormat parse_format(const std::string& name) {
  if (name == "s16") return SampleFormat::kPcm16;
  if (name == "s24") return SampleFormat::kPcm24;
  if (name == "f32") return SampleFormat::kFloat32;
  throw InvalidArgumentError("unknown sample format \"" + name +
                             "\"; expected s16, s24, or f32");
}

class Reporter {
 public:
  Reporter(std::ostream& out, std::string format)
      : out_(out), json_(format == "json-lines") {}

  void emit(const ordered_json& record) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (json_) {
      out_ << record.dump() << "\n";
      return;
    }
    std::string line;
    std::vector<std::string> warnings;
    for (const auto& [key, value] : record.items()) {
      if (key == "event") {
        line += value.get<std::string>();
        continue;
      }
      if (key == "warnings") {
        for (const auto& w : value) warnings.push_back(w.get<std::string>());
        continue;
      }
      line += " " + key + "=";
      line += value.is_string() ? value.get<std::string>() : value.dump();
    }
    out_ << line << "\n";
    for (const std::string& w : warnings) {
      out_ << "  warning: " << w << "\n";
    }
  }

 private:
  std::ostream& out_;
  bool json_;
  std::mutex mutex_;
};

fs::path output_path(const fs::path& input, const std::string& out_flag,
                     const std::string& out_dir, const char* suffix) {
  if (!out_flag.empty()) return out_flag;
  fs::path name = input.stem();
  name += suffix;
  fs::path dir = out_dir.empty() ? input.parent_path() : fs::path(out_dir);
  return dir.empty() ? name : dir / name;
}

struct ConvertJob {
  fs::path input;
  fs::path wav_out;
  fs::path clip_out;
  fs::path envelope_out;
};

void write_envelope_csv(const AmplitudeEnvelope& envelope,
                        const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << "time,value\n" << std::setprecision(12);
  for (std::size_t k = 0; k < envelope.values.size(); ++k) {
    out << static_cast<double>(k) / envelope.rate_hz << ","
        << envelope.values[k] << "\n";
  }
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

AmplitudeEnvelope read_envelope_csv(const fs::path& path, double fallback_rate,
                                    double carrier_hz) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<double> times;
  std::vector<double> values;
  bool has_times = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    double a = 0.0;
    if (!(fields >> a)) {
      std::istringstream text(line);
      std::string word;
      bool blank = !(text >> word);
      if (blank || word[0] == '#' || (line_no == 1 && word == "time")) {
        continue;  // blank line, comment, or header
      }
      throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                            ": expected numeric columns");
    }
    double b = 0.0;
    if (fields >> b) {
      if (!values.empty() && !has_times) {
        throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                              ": inconsistent column count");
      }
      has_times = true;
      times.push_back(a);
      values.push_back(b);
    } else {
      if (!values.empty() && has_times) {
        throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                              ": inconsistent column count");
      }
      values.push_back(a);
    }
  }
  if (values.empty()) {
    throw FileFormatError(path.string() + ": no envelope samples");
  }

  AmplitudeEnvelope envelope;
  envelope.carrier_hz = carrier_hz;
  envelope.values = std::move(values);
  if (has_times && times.size() > 1) {
    double dt = times[1] - times[0];
    if (!(dt > 0.0)) {
      throw FileFormatError(path.string() + ": times must be increasing");
    }
    for (std::size_t i = 2; i < times.size(); ++i) {
      double gap = times[i] - times[i - 1];
      if (std::abs(gap - dt) > 1e-6 * dt) {
        throw FileFormatError(path.string() +
                              ": envelope times are not uniformly spaced");
      }
    }
    envelope.rate_hz = 1.0 / dt;
  } else {
    envelope.rate_hz = fallback_rate;
  }
  return envelope;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"ismconv: renders high-frequency audio as amplitude-modulated "
               "low-frequency vibration"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string report_format = "text";

  // convert
  auto* convert_cmd = app.add_subcommand(
      "convert", "Convert WAV files to vibration waveforms");
  std::vector<std::string> convert_inputs;
  PipelineOptions convert_options;
  std::string convert_out;
  std::string convert_out_dir;
  std::string convert_format = "s16";
  std::string convert_envelope_out;
  bool convert_clip = false;
  std::string convert_clip_out;
  std::size_t convert_max_points = kClipMaxPointsDefault;
  unsigned convert_jobs = 1;
  convert_cmd->add_option("inputs", convert_inputs, "Input WAV files")
      ->required();
  add_pipeline_options(convert_cmd, convert_options);
  convert_cmd->add_option("--out", convert_out,
                          "Output path (single input only)");
  convert_cmd->add_option("--out-dir", convert_out_dir,
                          "Directory for derived output names");
  convert_cmd->add_option("--format", convert_format,
                          "Output sample format: s16, s24, f32")
      ->capture_default_str();
  convert_cmd->add_option("--envelope-out", convert_envelope_out,
                          "Also write the amplitude envelope as CSV");
  convert_cmd->add_flag("--clip", convert_clip,
                        "Also write a haptic clip JSON per input");
  convert_cmd->add_option("--clip-out", convert_clip_out,
                          "Clip output path (single input only)");
  convert_cmd->add_option("--max-points", convert_max_points,
                          "Point budget for clip simplification")
      ->capture_default_str();
  convert_cmd->add_option("--jobs", convert_jobs,
                          "Process inputs with this many threads")
      ->capture_default_str();
  convert_cmd->add_option("--report", report_format,
                          "Report format: text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));

  // stereo
  auto* stereo_cmd = app.add_subcommand(
      "stereo", "Write an original-vs-converted stereo stimulus");
  std::string stereo_input;
  PipelineOptions stereo_options;
  std::string stereo_out;
  std::string stereo_format = "s16";
  stereo_cmd->add_option("input", stereo_input, "Input WAV file")->required();
  add_pipeline_options(stereo_cmd, stereo_options);
  stereo_cmd->add_option("--out", stereo_out, "Output path");
  stereo_cmd->add_option("--format", stereo_format,
                         "Output sample format: s16, s24, f32")
      ->capture_default_str();
  stereo_cmd->add_option("--report", report_format,
                         "Report format: text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));

  // tone
  auto* tone_cmd = app.add_subcommand(
      "tone", "Write a faded reference tone for level matching");
  double tone_freq = 150.0;
  double tone_amplitude = 0.5;
  double tone_duration = 1.0;
  double tone_fade = 0.010;
  int tone_rate = 48000;
  std::string tone_out = "reference_tone.wav";
  std::string tone_format = "s16";
  tone_cmd->add_option("--freq", tone_freq, "Tone frequency in Hz")
      ->capture_default_str();
  tone_cmd->add_option("--amplitude", tone_amplitude, "Peak amplitude [0, 1]")
      ->capture_default_str();
  tone_cmd->add_option("--duration", tone_duration, "Duration in seconds")
      ->capture_default_str();
  tone_cmd->add_option("--fade", tone_fade, "Fade length in seconds")
      ->capture_default_str();
  tone_cmd->add_option("--rate", tone_rate, "Sample rate in Hz")
      ->capture_default_str();
  tone_cmd->add_option("--out", tone_out, "Output path")
      ->capture_default_str();
  tone_cmd->add_option("--format", tone_format,
                       "Output sample format: s16, s24, f32")
      ->capture_default_str();
  tone_cmd->add_option("--report", report_format,
                       "Report format: text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));

  // clip
  auto* clip_cmd = app.add_subcommand(
      "clip", "Convert an amplitude envelope CSV to a haptic clip");
  std::string clip_input;
  PipelineOptions clip_options;
  std::string clip_out;
  double clip_rate = 400.0;
  std::size_t clip_max_points = kClipMaxPointsDefault;
  clip_cmd->add_option("input", clip_input, "Envelope CSV file")->required();
  add_pipeline_options(clip_cmd, clip_options);
  clip_cmd->add_option("--out", clip_out, "Output path");
  clip_cmd
      ->add_option("--rate", clip_rate,
                   "Envelope rate in Hz when the CSV has no time column")
      ->capture_default_str();
  clip_cmd->add_option("--max-points", clip_max_points,
                       "Point budget for clip simplification")
      ->capture_default_str();
  clip_cmd->add_option("--report", report_format,
                       "Report format: text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));

  // lint
  auto* lint_cmd =
      app.add_subcommand("lint", "Check a haptic clip against device limits");
  std::string lint_input;
  double lint_cutoff = 100.0;
  lint_cmd->add_option("input", lint_input, "Haptic clip JSON file")
      ->required();
  lint_cmd->add_option("--envelope-cutoff", lint_cutoff,
                       "Device amplitude bandwidth in Hz")
      ->capture_default_str();
  lint_cmd->add_option("--report", report_format,
                       "Report format: text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ismconv");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitValidationError;
  }

  try {
    if (convert_cmd->parsed()) {
      apply_config_file(convert_cmd, convert_options.config_path);
    } else if (stereo_cmd->parsed()) {
      apply_config_file(stereo_cmd, stereo_options.config_path);
    } else if (clip_cmd->parsed()) {
      apply_config_file(clip_cmd, clip_options.config_path);
    }
  } catch (const CLI::ParseError& e) {
    err << "ismconv: " << e.what() << "\n";
    return kExitValidationError;
  } catch (const std::exception& e) {
    err << "ismconv: " << e.what() << "\n";
    return exit_code_for(e);
  }

  Reporter reporter(out, report_format);
  try {
    if (convert_cmd->parsed()) {
      if (convert_inputs.size() > 1 &&
          (!convert_out.empty() || !convert_clip_out.empty() ||
           !convert_envelope_out.empty())) {
        throw InvalidArgumentError(
            "--out, --clip-out, and --envelope-out need a single input");
      }
      SampleFormat wav_format = parse_format(convert_format);
      PerceptionModel model = resolve_model(convert_options);
      DeviceCalibration calibration = resolve_calibration(convert_options);
      std::string hash = hex64(fnv1a(
          describe_config(convert_options.config, model, calibration)));

      std::vector<ConvertJob> jobs;
      for (const std::string& input : convert_inputs) {
        ConvertJob job;
        job.input = input;
        job.wav_out =
            output_path(job.input, convert_out, convert_out_dir, ".ism.wav");
        if (convert_clip || !convert_clip_out.empty()) {
          job.clip_out = output_path(job.input, convert_clip_out,
                                     convert_out_dir, ".haptic.json");
        }
        if (!convert_envelope_out.empty()) {
          job.envelope_out = convert_envelope_out;
        }
        jobs.push_back(job);
      }

      std::vector<int> job_codes(jobs.size(), kExitOk);
      std::mutex err_mutex;
      auto run_job = [&](std::size_t index) {
        const ConvertJob& job = jobs[index];
        try {
          WavContents contents = read_wav(job.input);
          ordered_json record;
          record["event"] = "convert";
          record["input"] = job.input.generic_string();
          record["output"] = job.wav_out.generic_string();

          auto start = std::chrono::steady_clock::now();
          ConvertResult result =
              convert(contents.signal, model, convert_options.config);
          std::chrono::duration<double> elapsed =
              std::chrono::steady_clock::now() - start;

          write_wav(result.output, {contents.signal.sample_rate, wav_format},
                    job.wav_out);

          std::vector<std::string> warnings;
          if (contents.source_channels > 1) {
            warnings.push_back("downmixed " +
                               std::to_string(contents.source_channels) +
                               " channels to mono");
          }
          if (contents.clamped_count > 0) {
            warnings.push_back(std::to_string(contents.clamped_count) +
                               " input samples clamped to [-1, 1]");
          }
          if (result.report.clip_count > 0) {
            warnings.push_back(
                std::to_string(result.report.clip_count) +
                " envelope values clipped; consider lowering --gain");
          }

          record["carrier_hz"] = convert_options.config.carrier_hz;
          record["duration_s"] = contents.signal.duration();
          record["envelope_rate_hz"] = result.report.envelope_rate_hz;
          record["envelope_points"] = result.report.envelope_size;
          record["peak_amplitude"] = result.report.peak_amplitude;
          record["clip_count"] = result.report.clip_count;
          record["elapsed_s"] = elapsed.count();
          record["rt_factor"] = elapsed.count() > 0.0
                                    ? contents.signal.duration() /
                                          elapsed.count()
                                    : 0.0;
          record["config_hash"] = hash;

          if (!job.envelope_out.empty()) {
            write_envelope_csv(result.amplitude, job.envelope_out);
            record["envelope_output"] = job.envelope_out.generic_string();
          }
          if (!job.clip_out.empty()) {
            ClipMetadata metadata;
            metadata.source = job.input.filename().generic_string();
            metadata.tool_version = kVersion;
            metadata.config_hash = hash;
            HapticClip clip = to_haptic_clip(result.amplitude, calibration,
                                             convert_max_points, metadata);
            write_clip(clip, job.clip_out);
            record["clip_output"] = job.clip_out.generic_string();
            record["clip_points"] = clip.amplitude.size();
          }
          record["warnings"] = warnings;
          reporter.emit(record);
        } catch (const std::exception& e) {
          job_codes[index] = exit_code_for(e);
          std::lock_guard<std::mutex> lock(err_mutex);
          err << "ismconv: " << e.what() << "\n";
        }
      };

      unsigned jobs_n = std::max(1u, convert_jobs);
      if (jobs_n == 1 || jobs.size() <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
      } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        unsigned count =
            std::min<unsigned>(jobs_n, static_cast<unsigned>(jobs.size()));
        for (unsigned w = 0; w < count; ++w) {
          workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < jobs.size();
                 i = next.fetch_add(1)) {
              run_job(i);
            }
          });
        }
        for (std::thread& worker : workers) worker.join();
      }
      for (int code : job_codes) {
        if (code != kExitOk) return code;
      }
      return kExitOk;
    }

    if (stereo_cmd->parsed()) {
      SampleFormat wav_format = parse_format(stereo_format);
      PerceptionModel model = resolve_model(stereo_options);
      DeviceCalibration calibration = resolve_calibration(stereo_options);
      std::string hash = hex64(
          fnv1a(describe_config(stereo_options.config, model, calibration)));

      fs::path input = stereo_input;
      fs::path output = output_path(input, stereo_out, "", ".stim.wav");
      WavContents contents = read_wav(input);

      auto start = std::chrono::steady_clock::now();
      ConvertResult result =
          convert(contents.signal, model, stereo_options.config);
      std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;

      StereoStimulus stimulus =
          make_stereo_stimulus(contents.signal, result.output);
      write_wav(stimulus, wav_format, output);

      std::vector<std::string> warnings;
      if (contents.source_channels > 1) {
        warnings.push_back("downmixed " +
                           std::to_string(contents.source_channels) +
                           " channels to mono");
      }
      if (result.report.clip_count > 0) {
        warnings.push_back(std::to_string(result.report.clip_count) +
                           " envelope values clipped; consider lowering "
                           "--gain");
      }

      ordered_json record;
      record["event"] = "stereo";
      record["input"] = input.generic_string();
      record["output"] = output.generic_string();
      record["carrier_hz"] = stereo_options.config.carrier_hz;
      record["duration_s"] = contents.signal.duration();
      record["peak_amplitude"] = result.report.peak_amplitude;
      record["clip_count"] = result.report.clip_count;
      record["elapsed_s"] = elapsed.count();
      record["rt_factor"] =
          elapsed.count() > 0.0 ? contents.signal.duration() / elapsed.count()
                                : 0.0;
      record["config_hash"] = hash;
      record["warnings"] = warnings;
      reporter.emit(record);
      return kExitOk;
    }

    if (tone_cmd->parsed()) {
      SampleFormat wav_format = parse_format(tone_format);
      AudioSignal tone = reference_tone(tone_freq, tone_amplitude,
                                        tone_duration, tone_rate, tone_fade);
      write_wav(tone, {tone_rate, wav_format}, tone_out);

      ordered_json record;
      record["event"] = "tone";
      record["output"] = fs::path(tone_out).generic_string();
      record["frequency_hz"] = tone_freq;
      record["amplitude"] = tone_amplitude;
      record["duration_s"] = tone_duration;
      record["sample_rate"] = tone_rate;
      reporter.emit(record);
      return kExitOk;
    }

    if (clip_cmd->parsed()) {
      PerceptionModel model = resolve_model(clip_options);
      DeviceCalibration calibration = resolve_calibration(clip_options);
      std::string hash = hex64(
          fnv1a(describe_config(clip_options.config, model, calibration)));
      clip_options.config.validate(48000);

      fs::path input = clip_input;
      fs::path output = output_path(input, clip_out, "", ".haptic.json");
      AmplitudeEnvelope envelope = read_envelope_csv(
          input, clip_rate, clip_options.config.carrier_hz);
      for (std::size_t i = 0; i < envelope.values.size(); ++i) {
        double v = envelope.values[i];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw InvalidArgumentError("envelope sample " + std::to_string(i) +
                                     " is outside [0, 1]");
        }
      }

      ClipMetadata metadata;
      metadata.source = input.filename().generic_string();
      metadata.tool_version = kVersion;
      metadata.config_hash = hash;
      HapticClip clip =
          to_haptic_clip(envelope, calibration, clip_max_points, metadata);
      write_clip(clip, output);

      ordered_json record;
      record["event"] = "clip";
      record["input"] = input.generic_string();
      record["output"] = output.generic_string();
      record["carrier_hz"] = clip_options.config.carrier_hz;
      record["clip_points"] = clip.amplitude.size();
      record["config_hash"] = hash;
      reporter.emit(record);
      return kExitOk;
    }

    if (lint_cmd->parsed()) {
      fs::path input = lint_input;
      HapticClip clip = parse_clip(input);
      LintReport lint = lint_clip(clip, lint_cutoff);

      ordered_json record;
      record["event"] = "lint";
      record["input"] = input.generic_string();
      record["amplitude_points"] = lint.amplitude_points;
      record["duration_s"] = lint.duration_s;
      record["min_value"] = lint.min_value;
      record["max_value"] = lint.max_value;
      record["min_spacing_s"] = lint.min_spacing_s;
      record["bandwidth_warnings"] = lint.bandwidth_warning_count;
      record["warnings"] = lint.warnings;
      reporter.emit(record);
      return kExitOk;
    }

    out << app.help();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "ismconv: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace ism
