#pragma once

#include <filesystem>

#include "pir/corpus.hpp"
#include "pir/corpus_io.hpp"
#include "pir/index.hpp"

namespace pir {

// Everything `ingest` produces for one corpus.
struct Workspace {
  Corpus corpus;
  Vocabulary vocab;
  CorpusStats stats;
  InvertedIndex index;

  static Workspace build(Corpus corpus, std::size_t vocab_size);
  // Reads documents.jsonl, vocab.txt, stats.txt and index.txt from `dir`.
  static Workspace load(const std::filesystem::path& dir);
  // Writes the four files into `dir`, creating it if needed.
  void save(const std::filesystem::path& dir) const;
};

}  // namespace pir
