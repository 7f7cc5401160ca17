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

#include "parafilter/log.hpp"

#include <mutex>
#include <string>

#include "parafilter/error.hpp"

namespace parafilter {

LogLevel& log_threshold() {
  static LogLevel level = LogLevel::kInfo;
  return level;
}

LogLevel parse_log_level(std::string_view text) {
  if (text == "error") return LogLevel::kError;
  if (text == "warn") return LogLevel::kWarn;
  if (text == "info") return LogLevel::kInfo;
  if (text == "debug") return LogLevel::kDebug;
  throw UsageError("unknown log level '" + std::string(text) + "'");
}

LogLine::LogLine(LogLevel level) : enabled_(level <= log_threshold()) {
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  if (enabled_) buf_ << "[" << kNames[static_cast<int>(level)] << "] ";
}

LogLine::~LogLine() {
  if (!enabled_) return;
  static std::mutex mu;
  buf_ << '\n';
  std::lock_guard lock(mu);
  std::cerr << buf_.str();
}

}  // namespace parafilter
