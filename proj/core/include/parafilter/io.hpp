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

// Small text I/O helpers shared by every module: buffered line reading,
// all-or-nothing output files and locale-independent number formatting.

#ifndef PARAFILTER_IO_HPP_
#define PARAFILTER_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parafilter {

// Reads LF-terminated lines. A final line without LF still counts as a line;
// an empty file has zero lines. The LF is stripped, everything else is kept.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);

  // Returns false at end of input.
  bool next(std::string& line);

  // 1-based number of the line most recently returned.
  std::size_t line_number() const { return line_number_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::unique_ptr<char[]> buffer_;
  std::size_t line_number_ = 0;
};

// Number of lines LineReader would return for the file.
std::size_t count_lines(const std::filesystem::path& path);

// Output file written to "<path>.partial" and renamed into place by commit().
// If the object is destroyed without commit(), the partial file is removed,
// so a failed run never leaves a truncated artifact under the final name.
class AtomicOutput {
 public:
  explicit AtomicOutput(std::filesystem::path path);
  AtomicOutput(const AtomicOutput&) = delete;
  AtomicOutput& operator=(const AtomicOutput&) = delete;
  AtomicOutput(AtomicOutput&&) noexcept;
  AtomicOutput& operator=(AtomicOutput&&) noexcept;
  ~AtomicOutput();

  std::ostream& stream() { return *out_; }
  const std::filesystem::path& path() const { return path_; }
  void commit();

 private:
  void discard() noexcept;

  std::filesystem::path path_;
  std::filesystem::path partial_;
  std::unique_ptr<std::ofstream> out_;
  bool committed_ = false;
};

// %.6g-style formatting: six significant digits, no trailing zeros, integers
// without a decimal point ("1", "0.25", "1.38629e-05"). NaN prints as "NA".
std::string format_score(double value);

// Shortest representation that parses back to the identical double.
std::string format_exact(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

// Splits on a single character without collapsing empty fields.
std::vector<std::string_view> split_fields(std::string_view line, char sep);

}  // namespace parafilter

#endif  // PARAFILTER_IO_HPP_
