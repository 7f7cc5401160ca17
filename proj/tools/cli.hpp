// Copyright 2026 The parafilter Authors
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


// The parafilter command-line front end. Kept in a library so tests can
// drive it in-process.

#ifndef PARAFILTER_TOOLS_CLI_HPP_
#define PARAFILTER_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace parafilter::cli {

// args excludes the program name. Returns the process exit code: 0 on
// success, 1 on data or structural errors, 2 on usage errors. On failure any
// artifact written by the command is removed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace parafilter::cli

#endif  // PARAFILTER_TOOLS_CLI_HPP_
