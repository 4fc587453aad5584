#pragma once

#include <cstdint>

#include "pir/corpus.hpp"

namespace pir {

// Topic-mixture generator used for desk-scale simulations. The vocabulary
// "w000".."w<V-1>" is split into one block per topic (the first half of the
// vocabulary, evenly divided) and a shared tail (the rest). Each token comes
// from the document's topic block with probability `topic_mass`, otherwise
// from the shared tail; within either part words follow a Zipf(1) law.
// Documents carry exactly one topic label "topic<t>" and end a sentence every
// `sentence_length` tokens.
struct SynthConfig {
  std::size_t topics = 5;
  std::size_t docs_per_topic = 40;
  std::size_t vocab_size = 500;
  std::size_t doc_length = 60;
  std::uint64_t seed = 1;
  double topic_mass = 0.5;
  std::size_t sentence_length = 12;
};

// Throws kInvalidParameter if any count is zero, the vocabulary cannot hold
// one word per topic block plus a shared tail, or topic_mass is outside [0, 1].
Corpus synth_corpus(const SynthConfig& config);

}  // namespace pir
