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

#ifndef PARAFILTER_SCORER_HPP_
#define PARAFILTER_SCORER_HPP_

#include "parafilter/corpus.hpp"

namespace parafilter {

// Anything that assigns a word-normalized cross-entropy (nats per token) to a
// sentence pair: a built-in translation or language model, or a table of
// scores computed elsewhere. Implementations must be safe to call
// concurrently from several threads.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual double cross_entropy(const SentencePair& pair) const = 0;
};

}  // namespace parafilter

#endif  // PARAFILTER_SCORER_HPP_
