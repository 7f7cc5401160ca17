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

#include "parafilter/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "parafilter/error.hpp"

namespace parafilter {

namespace {
constexpr std::size_t kReadBufferSize = 1 << 20;
}  // namespace

LineReader::LineReader(const std::filesystem::path& path)
    : path_(path), buffer_(new char[kReadBufferSize]) {
  in_.rdbuf()->pubsetbuf(buffer_.get(), kReadBufferSize);
  in_.open(path, std::ios::binary);
  if (!in_) throw IoError("cannot open " + path.string() + " for reading");
}

bool LineReader::next(std::string& line) {
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw IoError("read error on " + path_.string());
    return false;
  }
  ++line_number_;
  return true;
}

std::size_t count_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<char> buf(kReadBufferSize);
  std::size_t lines = 0;
  char last = '\n';
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) lines += buf[i] == '\n';
    if (got > 0) last = buf[got - 1];
  }
  if (last != '\n') ++lines;
  return lines;
}

AtomicOutput::AtomicOutput(std::filesystem::path path)
    : path_(std::move(path)), partial_(path_.string() + ".partial") {
  out_ = std::make_unique<std::ofstream>(partial_, std::ios::binary | std::ios::trunc);
  if (!*out_) throw IoError("cannot open " + partial_.string() + " for writing");
}

AtomicOutput::AtomicOutput(AtomicOutput&& other) noexcept
    : path_(std::move(other.path_)),
      partial_(std::move(other.partial_)),
      out_(std::move(other.out_)),
      committed_(other.committed_) {
  other.committed_ = true;
}

AtomicOutput& AtomicOutput::operator=(AtomicOutput&& other) noexcept {
  if (this != &other) {
    discard();
    path_ = std::move(other.path_);
    partial_ = std::move(other.partial_);
    out_ = std::move(other.out_);
    committed_ = other.committed_;
    other.committed_ = true;
  }
  return *this;
}

AtomicOutput::~AtomicOutput() { discard(); }

void AtomicOutput::discard() noexcept {
  if (committed_ || !out_) return;
  out_->close();
  std::error_code ec;
  std::filesystem::remove(partial_, ec);
}

void AtomicOutput::commit() {
  out_->flush();
  if (!*out_) throw IoError("write error on " + partial_.string());
  out_->close();
  std::filesystem::rename(partial_, path_);
  committed_ = true;
}

std::string format_score(double value) {
  if (std::isnan(value)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text == "NA") return std::nan("");
  double value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace parafilter
