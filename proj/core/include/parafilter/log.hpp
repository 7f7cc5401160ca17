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

#ifndef PARAFILTER_LOG_HPP_
#define PARAFILTER_LOG_HPP_

#include <iostream>
#include <sstream>
#include <string_view>

namespace parafilter {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

LogLevel& log_threshold();
LogLevel parse_log_level(std::string_view text);

// Usage: PF_LOG(kInfo) << "scored " << n << " pairs";
// Messages go to stderr; data never does.
class LogLine {
 public:
  explicit LogLine(LogLevel level);
  ~LogLine();
  template <typename T>
  LogLine& operator<<(const T& v) {
    if (enabled_) buf_ << v;
    return *this;
  }

 private:
  bool enabled_;
  std::ostringstream buf_;
};

#define PF_LOG(level) ::parafilter::LogLine(::parafilter::LogLevel::level)

}  // namespace parafilter

#endif  // PARAFILTER_LOG_HPP_
