#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pir/corpus.hpp"

namespace pir {

// Corpus files are UTF-8 JSON lines:
//   {"id": str, "title": str, "text": str, "topics": [str]}
// Blank lines are skipped. Throws kInvalidInput with the line number on
// malformed records.
Corpus read_corpus(std::istream& in);
Corpus read_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

// Vocabulary file:
//   pir-vocab 1
//   size<TAB>V
//   <id><TAB><word>        (V lines, id order, reserved tokens first)
void write_vocab(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocab(std::istream& in);

// Stats file:
//   pir-stats 1
//   num_docs<TAB>N
//   words<TAB>count
//   <word><TAB><doc_freq>  (count lines, lexicographic)
void write_stats(std::ostream& out, const CorpusStats& stats);
CorpusStats read_stats(std::istream& in);

// Layout of an ingest output directory.
struct IngestPaths {
  std::filesystem::path root;

  std::filesystem::path documents() const { return root / "documents.jsonl"; }
  std::filesystem::path vocab() const { return root / "vocab.txt"; }
  std::filesystem::path stats() const { return root / "stats.txt"; }
  std::filesystem::path index() const { return root / "index.txt"; }
};

// Opens a file for reading or throws kIo.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace pir
