#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They trade speed for directness: dense loops, explicit inverses,
// full enumeration. Nothing here calls into the code under test except the
// tokenizer and plain data types.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pir/corpus.hpp"
#include "pir/index.hpp"
#include "pir/lm.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;  // row-major

// Cosine over dense tf*idf vectors, idf = 1 + ln(N/N_w). Returns every
// document with a positive score, best first, ties by ascending id.
pir::SearchResult dense_search(const pir::Corpus& corpus, const pir::WeightedQuery& query,
                               std::span<const std::size_t> exclude = {});

// Next-word model whose distribution is a pseudo-random function of the whole
// history. Probabilities are small integers over a common denominator, so
// exact ties and exact zeros are frequent.
class HashModel final : public pir::NextWordModel {
 public:
  HashModel(pir::Vocabulary vocab, std::uint64_t seed, int levels = 4);
  std::string_view kind() const override { return "hash"; }
  const pir::Vocabulary& vocab() const override { return vocab_; }
  std::unique_ptr<pir::ModelSession> new_session() const override;
  void save(std::ostream&) const override {}
  std::vector<double> distribution(std::span<const pir::WordId> history) const;

 private:
  pir::Vocabulary vocab_;
  std::uint64_t seed_;
  int levels_;
};

struct BeamOracleNode {
  std::vector<pir::WordId> path;  // excluding the root
  double prob = 0.0;
  double path_score = 0.0;
  std::size_t parent = 0;
};

// Builds the complete b-ary tree of depth d (children of every node are its
// top-b successors), then applies per-level top-k from the top down.
// `history` maps a path to the model's distribution after context + path.
std::vector<std::vector<BeamOracleNode>> beam_enumerate(
    const pir::Vocabulary& vocab, const std::function<std::vector<double>(std::span<const pir::WordId>)>& history,
    std::size_t b, std::size_t k, std::size_t d);

struct LinRelReference {
  std::vector<double> intent, relevance, sigma;
};

// Evaluates w = (X^T X + mu I)^{-1} X^T y, y_hat = A y, sigma_i = |row_i(A)|^2
// with A formed explicitly from a Gauss-Jordan inverse.
LinRelReference linrel_explicit(const Matrix& x, const std::vector<double>& y, double mu);
Matrix gauss_jordan_inverse(Matrix a);

// Plain-loop LSTM forward pass reading the same flat parameter layout.
class PlainLstm {
 public:
  PlainLstm(std::vector<double> params, std::size_t vocab, std::size_t embed, std::size_t hidden, std::size_t layers);
  void reset();
  std::vector<double> step(std::uint32_t word);
  // Mean cross-entropy over a window, from a zero state.
  double loss(std::span<const std::uint32_t> inputs, std::span<const std::uint32_t> targets);

 private:
  std::vector<double> p_;
  std::size_t v_, e_, h_, layers_;
  std::vector<std::vector<double>> h_state_, c_state_;
};

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x, double h);

// |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_error(double a, double b);

}  // namespace oracle
