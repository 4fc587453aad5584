#include "pir/workspace.hpp"

#include <fstream>

#include "pir/error.hpp"

namespace pir {

Workspace Workspace::build(Corpus corpus, std::size_t vocab_size) {
  Workspace ws;
  ws.vocab = build_vocab(corpus.documents(), vocab_size);
  ws.stats = compute_stats(corpus.documents());
  ws.index = InvertedIndex::build(corpus, ws.stats);
  ws.corpus = std::move(corpus);
  return ws;
}

Workspace Workspace::load(const std::filesystem::path& dir) {
  const IngestPaths paths{dir};
  Workspace ws;
  ws.corpus = read_corpus(paths.documents());
  {
    auto in = open_input(paths.vocab());
    ws.vocab = read_vocab(in);
  }
  {
    auto in = open_input(paths.stats());
    ws.stats = read_stats(in);
  }
  {
    auto in = open_input(paths.index());
    ws.index = InvertedIndex::load(in);
  }
  if (ws.index.num_docs() != ws.corpus.size() || ws.stats.num_docs() != ws.corpus.size()) {
    throw Error(ErrorCode::kInvalidInput, "ingest directory '" + dir.string() + "' is inconsistent");
  }
  for (std::size_t d = 0; d < ws.corpus.size(); ++d) {
    if (ws.index.doc_id(d) != ws.corpus[d].id) {
      throw Error(ErrorCode::kInvalidInput, "index and documents.jsonl disagree at position " + std::to_string(d));
    }
  }
  return ws;
}

void Workspace::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const IngestPaths paths{dir};
  write_corpus(paths.documents(), corpus);
  {
    auto out = open_output(paths.vocab());
    write_vocab(out, vocab);
  }
  {
    auto out = open_output(paths.stats());
    write_stats(out, stats);
  }
  {
    auto out = open_output(paths.index());
    index.save(out);
  }
}

}  // namespace pir
