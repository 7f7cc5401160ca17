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

// Deterministic synthetic bitext for experiments and benchmarks.
//
// Source sentences are walks of a sparse random Markov chain over a word
// list; each source word is translated by a fixed substitution cipher into a
// disjoint target vocabulary, keeping word order. A small "noise vocabulary"
// of number tokens is interleaved and copied verbatim to both sides, the way
// names and numbers survive translation. A third language uses a different
// cipher over its own vocabulary.

#ifndef PARAFILTER_SYNTHETIC_HPP_
#define PARAFILTER_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "parafilter/corpus.hpp"

namespace parafilter {

struct SyntheticOptions {
  std::size_t vocab_size = 1000;
  std::size_t successors = 8;      // out-degree of every word in the chain
  std::size_t min_length = 6;
  std::size_t max_length = 14;
  double noise_token_rate = 0.05;  // per position
  std::size_t noise_vocab_size = 200;
  std::uint64_t seed = 1;          // fixes vocabularies, chain and ciphers
};

class SyntheticBitext {
 public:
  explicit SyntheticBitext(SyntheticOptions options = {});

  // Pair with the given id; sentence content depends on (sample_seed, id).
  SentencePair pair(std::size_t id, std::uint64_t sample_seed) const;
  std::vector<SentencePair> pairs(std::size_t n, std::uint64_t sample_seed) const;

  // A fluent sentence in the third language.
  Sentence third_language(std::size_t id, std::uint64_t sample_seed) const;
  std::vector<Sentence> third_language_sentences(std::size_t n, std::uint64_t sample_seed) const;

  const std::string& source_word(std::size_t i) const { return source_words_[i]; }
  const std::string& target_word(std::size_t i) const { return target_words_[cipher_[i]]; }

 private:
  // Word indices of one chain walk, noise tokens encoded as vocab_size + j.
  std::vector<std::size_t> walk(std::uint64_t seed) const;
  Sentence render(const std::vector<std::size_t>& walk, const std::vector<std::string>& words,
                  const std::vector<std::size_t>& cipher) const;

  SyntheticOptions options_;
  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::vector<std::string> third_words_;
  std::vector<std::string> noise_words_;
  std::vector<std::size_t> identity_;
  std::vector<std::size_t> cipher_;
  std::vector<std::size_t> third_cipher_;
  std::vector<std::vector<std::size_t>> next_;  // successors of each word
  std::vector<double> successor_cdf_;           // shared Zipf weights
  std::vector<double> start_cdf_;
};

}  // namespace parafilter

#endif  // PARAFILTER_SYNTHETIC_HPP_
