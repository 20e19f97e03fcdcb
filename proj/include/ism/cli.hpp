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

#ifndef ISM_CLI_HPP_
#define ISM_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace ism {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitValidationError = 2;

// Runs the ismconv command line.  args excludes the program name.  All
// regular output goes to out, diagnostics to err.  Returns one of the
// kExit* codes; never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ism

#endif  // ISM_CLI_HPP_
