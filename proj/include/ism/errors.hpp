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

#ifndef ISM_ERRORS_HPP_
#define ISM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ism {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A caller-supplied value violates a documented precondition or invariant.
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

// The operating system refused or failed a file operation.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// A file was readable but its contents do not parse.
class FileFormatError : public Error {
 public:
  explicit FileFormatError(const std::string& what) : Error(what) {}
};

// WAV container damage: bad magic, truncated chunks, inconsistent sizes.
class MalformedWavError : public FileFormatError {
 public:
  explicit MalformedWavError(const std::string& what) : FileFormatError(what) {}
};

// Structurally valid WAV using a codec or layout this library does not read.
class UnsupportedWavError : public FileFormatError {
 public:
  explicit UnsupportedWavError(const std::string& what)
      : FileFormatError(what) {}
};

// Haptic clip rejection, split by layer so tools can report precisely.
class ClipFormatError : public FileFormatError {
 public:
  enum class Kind {
    kMalformedJson,       // text is not valid JSON
    kSchemaViolation,     // JSON shape or types are wrong
    kInvariantViolation,  // shape is right but the data breaks a clip rule
  };

  ClipFormatError(Kind kind, const std::string& what)
      : FileFormatError(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace ism

#endif  // ISM_ERRORS_HPP_
