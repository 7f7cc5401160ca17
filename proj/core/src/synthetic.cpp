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

#include "parafilter/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <string_view>

#include "parafilter/error.hpp"
#include "parafilter/random.hpp"

namespace parafilter {

namespace {

// Consonant-vowel syllable alphabets. Every pair of languages differs in
// either the consonant or the vowel set, so the vocabularies are disjoint.
struct Alphabet {
  std::string_view consonants;
  std::string_view vowels;
};
constexpr Alphabet kSourceAlphabet{"bdgkmnprst", "aei"};
constexpr Alphabet kTargetAlphabet{"cfhjlqvwxz", "ouy"};
constexpr Alphabet kThirdAlphabet{"bdgkmnprst", "ouy"};

std::vector<std::string> make_words(std::size_t n, const Alphabet& a) {
  const std::size_t base = a.consonants.size() * a.vowels.size();
  std::vector<std::string> words;
  words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // i + base guarantees at least two syllables.
    std::string w;
    for (std::size_t v = i + base; v > 0; v /= base) {
      const std::size_t syl = v % base;
      w += a.consonants[syl / a.vowels.size()];
      w += a.vowels[syl % a.vowels.size()];
    }
    words.push_back(std::move(w));
  }
  return words;
}

std::vector<double> zipf_cdf(std::size_t n) {
  std::vector<double> cdf(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    cdf[i] = total;
  }
  for (auto& c : cdf) c /= total;
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform_unit(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<std::size_t> permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_below(rng, i)]);
  return p;
}

}  // namespace

SyntheticBitext::SyntheticBitext(SyntheticOptions options) : options_(options) {
  if (options_.vocab_size < 2 || options_.successors < 1 || options_.min_length < 1 ||
      options_.max_length < options_.min_length || options_.noise_vocab_size < 1) {
    throw ConfigError("invalid synthetic corpus options");
  }
  Rng rng(mix64(options_.seed, 0x5717));
  source_words_ = make_words(options_.vocab_size, kSourceAlphabet);
  target_words_ = make_words(options_.vocab_size, kTargetAlphabet);
  third_words_ = make_words(options_.vocab_size, kThirdAlphabet);
  for (std::size_t i = 0; i < options_.noise_vocab_size; ++i) {
    noise_words_.push_back(std::to_string(1000 + i));
  }
  identity_.resize(options_.vocab_size);
  std::iota(identity_.begin(), identity_.end(), 0);
  cipher_ = permutation(options_.vocab_size, rng);
  third_cipher_ = permutation(options_.vocab_size, rng);
  next_.resize(options_.vocab_size);
  for (auto& succ : next_) {
    for (std::size_t j = 0; j < options_.successors; ++j) {
      succ.push_back(uniform_below(rng, options_.vocab_size));
    }
  }
  successor_cdf_ = zipf_cdf(options_.successors);
  start_cdf_ = zipf_cdf(options_.vocab_size);
}

std::vector<std::size_t> SyntheticBitext::walk(std::uint64_t seed) const {
  Rng rng(seed);
  const std::size_t span = options_.max_length - options_.min_length + 1;
  const std::size_t length = options_.min_length + uniform_below(rng, span);
  std::vector<std::size_t> out;
  out.reserve(length);
  std::size_t word = draw(start_cdf_, rng);
  for (std::size_t i = 0; i < length; ++i) {
    if (uniform_unit(rng) < options_.noise_token_rate) {
      out.push_back(options_.vocab_size + uniform_below(rng, options_.noise_vocab_size));
      continue;
    }
    out.push_back(word);
    word = next_[word][draw(successor_cdf_, rng)];
  }
  return out;
}

Sentence SyntheticBitext::render(const std::vector<std::size_t>& w,
                                 const std::vector<std::string>& words,
                                 const std::vector<std::size_t>& cipher) const {
  std::vector<std::string> tokens;
  tokens.reserve(w.size());
  for (auto i : w) {
    tokens.push_back(i < options_.vocab_size ? words[cipher[i]]
                                             : noise_words_[i - options_.vocab_size]);
  }
  std::string raw;
  for (const auto& t : tokens) {
    if (!raw.empty()) raw += ' ';
    raw += t;
  }
  return Sentence{std::move(raw), std::move(tokens)};
}

SentencePair SyntheticBitext::pair(std::size_t id, std::uint64_t sample_seed) const {
  const auto w = walk(mix64(sample_seed, id));
  SentencePair p;
  p.id = id;
  p.src = render(w, source_words_, identity_);
  p.tgt = render(w, target_words_, cipher_);
  return p;
}

std::vector<SentencePair> SyntheticBitext::pairs(std::size_t n, std::uint64_t sample_seed) const {
  std::vector<SentencePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pair(i, sample_seed));
  return out;
}

Sentence SyntheticBitext::third_language(std::size_t id, std::uint64_t sample_seed) const {
  return render(walk(mix64(sample_seed ^ 0x7431, id)), third_words_, third_cipher_);
}

std::vector<Sentence> SyntheticBitext::third_language_sentences(std::size_t n,
                                                      std::uint64_t sample_seed) const {
  std::vector<Sentence> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(third_language(i, sample_seed));
  return out;
}

}  // namespace parafilter
