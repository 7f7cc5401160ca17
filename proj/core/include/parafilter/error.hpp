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

#ifndef PARAFILTER_ERROR_HPP_
#define PARAFILTER_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parafilter {

// Base of every error the library throws. Anything derived from Error maps to
// exit code 1 in the command-line tool; UsageError maps to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid UTF-8 input. offset is the byte offset within the offending line.
class DecodingError : public Error {
 public:
  DecodingError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Line-count mismatches, id gaps or duplicates, ids beyond the corpus end.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A line of a text format does not have the expected shape. line is 1-based.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Model or score file that cannot be parsed; line is 1-based, 0 when the
// problem is end-of-file.
class ParseError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Model file written by an incompatible version of the format.
class IncompatibleVersionError : public Error {
 public:
  using Error::Error;
};

class EmptySentenceError : public Error {
 public:
  EmptySentenceError() : Error("cross-entropy of an empty sentence is undefined") {}
};

class EmptySourceError : public Error {
 public:
  EmptySourceError()
      : Error("empty source sentence cannot generate a target without NULL") {}
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a score function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Lookup of an id that an external score table does not contain.
class MissingIdError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Wraps a scorer failure with the id of the pair being scored.
class ScoringError : public Error {
 public:
  ScoringError(const std::string& what, std::size_t pair_id)
      : Error(what), pair_id_(pair_id) {}
  std::size_t pair_id() const { return pair_id_; }

 private:
  std::size_t pair_id_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Bad command-line or configuration usage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parafilter

#endif  // PARAFILTER_ERROR_HPP_
