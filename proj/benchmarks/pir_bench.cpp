#include <benchmark/benchmark.h>

#include "pir/beam.hpp"
#include "pir/linrel.hpp"
#include "pir/lstm.hpp"
#include "pir/ngram.hpp"
#include "pir/synth.hpp"
#include "pir/text.hpp"
#include "pir/workspace.hpp"

using namespace pir;

namespace {

// Shared desk: 10 topics x 100 documents, 5000 words.
struct Desk {
  Workspace ws;
  NGramModel ngram;

  Desk()
      : ws(Workspace::build(synth_corpus(SynthConfig{10, 100, 5000, 120, 3}), 10000)),
        ngram(NGramModel::train(ws.corpus, ws.vocab)) {}
};

const Desk& desk() {
  static const Desk d;
  return d;
}

std::vector<std::string> first_words(const Document& doc, std::size_t n) {
  auto toks = tokenize(doc.text);
  toks.resize(std::min(n, toks.size()));
  return toks;
}

void BM_IndexSearch(benchmark::State& state) {
  const auto& d = desk();
  const auto q = count_query(first_words(d.ws.corpus[17], static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(d.ws.index.search(q));
}
BENCHMARK(BM_IndexSearch)->Arg(3)->Arg(20)->Arg(120);

void BM_BeamExpandNGram(benchmark::State& state) {
  const auto& d = desk();
  const auto ctx = first_words(d.ws.corpus[5], 10);
  BeamParams p;
  p.branching = static_cast<std::size_t>(state.range(0));
  p.width = 5;
  p.depth = 3;
  for (auto _ : state) benchmark::DoNotOptimize(beam_expand(d.ngram, ctx, p));
}
BENCHMARK(BM_BeamExpandNGram)->Arg(2)->Arg(4)->Arg(8);

void BM_LinRelFactor(benchmark::State& state) {
  const auto& d = desk();
  const auto cols = sample_columns(d.ws.corpus.size(), static_cast<std::size_t>(state.range(0)), 1);
  const auto x = TermDocMatrix::build(d.ws.corpus, d.ws.stats, StopWords::english(), cols);
  for (auto _ : state) benchmark::DoNotOptimize(LinRelModel(x, 1.0));
}
BENCHMARK(BM_LinRelFactor)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_LinRelSolve(benchmark::State& state) {
  const auto& d = desk();
  const auto cols = sample_columns(d.ws.corpus.size(), static_cast<std::size_t>(state.range(0)), 1);
  const LinRelModel model(TermDocMatrix::build(d.ws.corpus, d.ws.stats, StopWords::english(), cols), 1.0);
  RelevanceState y(model.matrix().rows());
  update_relevance(y, model.matrix(), first_words(d.ws.corpus[cols.front()], 10));
  for (auto _ : state) benchmark::DoNotOptimize(model.solve(y.y()));
}
BENCHMARK(BM_LinRelSolve)->Arg(50)->Arg(200);

void BM_LstmStep(benchmark::State& state) {
  LstmConfig cfg;
  cfg.hidden = static_cast<std::size_t>(state.range(0));
  const LstmModel model(desk().ws.vocab, cfg);
  auto session = model.new_session();
  WordId w = 2;
  for (auto _ : state) {
    session->feed(w);
    benchmark::DoNotOptimize(session->next_distribution());
    w = 2 + (w * 31 + 7) % 1000;
  }
}
BENCHMARK(BM_LstmStep)->Arg(32)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
