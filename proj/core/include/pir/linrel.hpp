#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pir/corpus.hpp"
#include "pir/text.hpp"

namespace pir {

// Word-by-document tf-idf matrix X (rows: words, columns: documents).
class TermDocMatrix {
 public:
  TermDocMatrix() = default;
  // Throws kInvalidInput on shape mismatch, duplicate row words or negative entries.
  TermDocMatrix(std::vector<std::string> row_words, Eigen::MatrixXd values,
                std::vector<std::string> column_ids = {});

  // Columns are the documents at `columns` (corpus positions); rows are every
  // non-stop word occurring in them, sorted. Entry = tf * idf(word) with the
  // corpus-level idf from `stats`.
  static TermDocMatrix build(const Corpus& corpus, const CorpusStats& stats, const StopWords& stopwords,
                             std::span<const std::size_t> columns);

  std::size_t rows() const { return words_.size(); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  const std::string& word(std::size_t row) const { return words_.at(row); }
  std::span<const std::string> words() const { return words_; }
  std::optional<std::size_t> row(std::string_view word) const;
  std::span<const std::string> column_ids() const { return column_ids_; }

 private:
  std::vector<std::string> words_;
  Eigen::MatrixXd values_;
  std::vector<std::string> column_ids_;
  std::unordered_map<std::string, std::size_t> rows_;
};

// Sorted sample of min(m, corpus_size) distinct document positions, drawn
// without replacement under `seed`.
std::vector<std::size_t> sample_columns(std::size_t corpus_size, std::size_t m, std::uint64_t seed);

inline constexpr std::size_t kDefaultIntentSample = 2000;

// Decaying relevance vector y over the rows of X. Each update() is one input
// window: observed words jump to 1; a word last seen n windows ago has
// y = 1/n, and drops to 0 once 1/n < tau.
class RelevanceState {
 public:
  explicit RelevanceState(std::size_t rows = 0, double tau = 0.1);

  void update(std::span<const std::size_t> observed_rows);
  void reset();

  const Eigen::VectorXd& y() const { return y_; }
  // Windows since the last occurrence; 0 for never-observed words.
  std::span<const std::uint32_t> since() const { return since_; }
  double tau() const { return tau_; }

 private:
  Eigen::VectorXd y_;
  std::vector<std::uint32_t> since_;
  double tau_;
};

// Maps window words to rows (unknown words are ignored) and ticks the state.
void update_relevance(RelevanceState& state, const TermDocMatrix& x, std::span<const std::string> window);

enum class SigmaForm {
  kSquaredRowNorm,  // sigma_i = |row_i(A)|^2
  kRowNorm,         // sigma_i = |row_i(A)|
};

struct LinRelSolution {
  Eigen::VectorXd intent;     // w = (X^T X + mu I)^{-1} X^T y, one weight per document
  Eigen::VectorXd relevance;  // y_hat = X w = A y
  Eigen::VectorXd sigma;      // confidence width per word

  // v = y_hat + c * sigma
  Eigen::VectorXd ucb(double c) const { return relevance + c * sigma; }
};

// Factors X^T X + mu I once (pivoted LDL^T, square-root free so X = I
// yields exact halves) and precomputes the confidence widths,
// which do not depend on y:
//   sigma_i = |row_i(A)|^2 = z_i^T (X^T X) z_i,  z_i = (X^T X + mu I)^{-1} x_i.
class LinRelModel {
 public:
  // Throws kInvalidParameter for mu < 0 and kNumericFailure when the system
  // is singular (possible only with mu == 0).
  LinRelModel(TermDocMatrix x, double mu = 1.0, SigmaForm form = SigmaForm::kSquaredRowNorm);

  LinRelSolution solve(const Eigen::VectorXd& y) const;

  const TermDocMatrix& matrix() const { return x_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  double mu() const { return mu_; }

 private:
  TermDocMatrix x_;
  double mu_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Eigen::VectorXd sigma_;
};

inline LinRelSolution linrel_solve(const TermDocMatrix& x, const Eigen::VectorXd& y, double mu) {
  return LinRelModel(x, mu).solve(y);
}

struct ScoredWord {
  std::string word;
  double score = 0.0;

  bool operator==(const ScoredWord&) const = default;
};

// Top n_exp rows by v = y_hat + c * sigma, excluding window words and stop
// words; ties lexicographic.
std::vector<ScoredWord> linrel_expand(const LinRelSolution& solution, const TermDocMatrix& x,
                                      std::span<const std::string> window, std::size_t n_exp, double c,
                                      const StopWords& stopwords = StopWords::english());

}  // namespace pir
