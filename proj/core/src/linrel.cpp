#include "pir/linrel.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

#include "pir/error.hpp"

namespace pir {

TermDocMatrix::TermDocMatrix(std::vector<std::string> row_words, Eigen::MatrixXd values,
                             std::vector<std::string> column_ids)
    : words_(std::move(row_words)), values_(std::move(values)), column_ids_(std::move(column_ids)) {
  if (static_cast<std::size_t>(values_.rows()) != words_.size()) {
    throw Error(ErrorCode::kInvalidInput, "term-document matrix row count does not match its words");
  }
  if (!column_ids_.empty() && column_ids_.size() != static_cast<std::size_t>(values_.cols())) {
    throw Error(ErrorCode::kInvalidInput, "term-document matrix column count does not match its ids");
  }
  if (values_.size() > 0 && !(values_.minCoeff() >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "term-document matrix entries must be nonnegative");
  }
  rows_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!rows_.emplace(words_[i], i).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate row word '" + words_[i] + "'");
    }
  }
}

TermDocMatrix TermDocMatrix::build(const Corpus& corpus, const CorpusStats& stats, const StopWords& stopwords,
                                   std::span<const std::size_t> columns) {
  std::vector<std::map<std::string, std::size_t>> tfs;
  std::map<std::string, std::size_t> rows;
  std::vector<std::string> ids;
  for (auto d : columns) {
    if (d >= corpus.size()) throw Error(ErrorCode::kInvalidParameter, "column index outside the corpus");
    std::map<std::string, std::size_t> tf;
    for (auto& tok : tokenize(corpus[d].text)) {
      if (stopwords.contains(tok)) continue;
      ++tf[std::move(tok)];
    }
    for (const auto& [w, _] : tf) rows.emplace(w, 0);
    tfs.push_back(std::move(tf));
    ids.push_back(corpus[d].id);
  }
  std::vector<std::string> words;
  words.reserve(rows.size());
  for (auto& [w, r] : rows) {
    r = words.size();
    words.push_back(w);
  }
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(words.size()),
                                                 static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < tfs.size(); ++j) {
    for (const auto& [w, tf] : tfs[j]) {
      values(static_cast<Eigen::Index>(rows.at(w)), static_cast<Eigen::Index>(j)) =
          static_cast<double>(tf) * stats.idf(w);
    }
  }
  return TermDocMatrix(std::move(words), std::move(values), std::move(ids));
}

std::optional<std::size_t> TermDocMatrix::row(std::string_view word) const {
  auto it = rows_.find(std::string(word));
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> sample_columns(std::size_t corpus_size, std::size_t m, std::uint64_t seed) {
  std::vector<std::size_t> all(corpus_size);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (m >= corpus_size) return all;
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(m);
  std::sort(all.begin(), all.end());
  return all;
}

RelevanceState::RelevanceState(std::size_t rows, double tau)
    : y_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows))), since_(rows, 0), tau_(tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::kInvalidParameter, "tau must lie in [0, 1]");
}

void RelevanceState::reset() {
  y_.setZero();
  std::fill(since_.begin(), since_.end(), 0);
}

void RelevanceState::update(std::span<const std::size_t> observed_rows) {
  for (std::size_t i = 0; i < since_.size(); ++i) {
    if (since_[i] > 0) ++since_[i];
  }
  for (auto r : observed_rows) {
    if (r >= since_.size()) throw Error(ErrorCode::kInvalidParameter, "relevance row out of range");
    since_[r] = 1;
  }
  for (std::size_t i = 0; i < since_.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (since_[i] == 0) {
      y_[idx] = 0.0;
      continue;
    }
    const double y = 1.0 / static_cast<double>(since_[i]);
    y_[idx] = y < tau_ ? 0.0 : y;
  }
}

void update_relevance(RelevanceState& state, const TermDocMatrix& x, std::span<const std::string> window) {
  std::vector<std::size_t> rows;
  for (const auto& w : window) {
    if (auto r = x.row(w)) rows.push_back(*r);
  }
  state.update(rows);
}

LinRelModel::LinRelModel(TermDocMatrix x, double mu, SigmaForm form) : x_(std::move(x)), mu_(mu) {
  if (!(mu >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "regularization mu must be nonnegative");
  const auto& X = x_.values();
  const auto m = X.cols();
  const Eigen::MatrixXd gram = X.transpose() * X;
  Eigen::MatrixXd system = gram;
  system.diagonal().array() += mu;
  ldlt_.compute(system);
  const double tolerance = static_cast<double>(std::max<Eigen::Index>(m, 1)) * std::numeric_limits<double>::epsilon();
  const auto d = ldlt_.vectorD().cwiseAbs();
  if (ldlt_.info() != Eigen::Success || (m > 0 && !(d.minCoeff() > tolerance * d.maxCoeff()))) {
    throw Error(ErrorCode::kNumericFailure, "regularized system X^T X + mu I is singular; use mu > 0");
  }
  // Z = (X^T X + mu I)^{-1} X^T, column i is z_i.
  const Eigen::MatrixXd z = ldlt_.solve(X.transpose());
  sigma_ = z.cwiseProduct(gram * z).colwise().sum().transpose();
  if (form == SigmaForm::kRowNorm) sigma_ = sigma_.cwiseMax(0.0).cwiseSqrt();
}

LinRelSolution LinRelModel::solve(const Eigen::VectorXd& y) const {
  const auto& X = x_.values();
  if (y.size() != X.rows()) throw Error(ErrorCode::kInvalidParameter, "relevance vector length does not match X");
  LinRelSolution s;
  s.intent = ldlt_.solve(X.transpose() * y);
  s.relevance = X * s.intent;
  s.sigma = sigma_;
  return s;
}

std::vector<ScoredWord> linrel_expand(const LinRelSolution& solution, const TermDocMatrix& x,
                                      std::span<const std::string> window, std::size_t n_exp, double c,
                                      const StopWords& stopwords) {
  if (!(c >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "exploration parameter c must be nonnegative");
  const std::unordered_set<std::string_view> in_window(window.begin(), window.end());
  const Eigen::VectorXd v = solution.ucb(c);
  std::vector<ScoredWord> words;
  words.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto& w = x.word(i);
    if (in_window.count(w) != 0 || stopwords.contains(w)) continue;
    words.push_back({w, v[static_cast<Eigen::Index>(i)]});
  }
  const auto better = [](const ScoredWord& a, const ScoredWord& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  };
  const auto k = std::min(n_exp, words.size());
  std::partial_sort(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(k), words.end(), better);
  words.resize(k);
  return words;
}

}  // namespace pir
