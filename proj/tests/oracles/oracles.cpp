#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "pir/text.hpp"

namespace oracle {

pir::SearchResult dense_search(const pir::Corpus& corpus, const pir::WeightedQuery& query,
                               std::span<const std::size_t> exclude) {
  const std::size_t n = corpus.size();
  std::vector<std::map<std::string, double>> tf(n);
  std::set<std::string> words;
  for (std::size_t d = 0; d < n; ++d) {
    for (const auto& t : pir::tokenize(corpus[d].text)) {
      tf[d][t] += 1.0;
      words.insert(t);
    }
  }
  const std::vector<std::string> sorted(words.begin(), words.end());
  std::vector<double> idf(sorted.size());
  for (std::size_t w = 0; w < sorted.size(); ++w) {
    std::size_t df = 0;
    for (std::size_t d = 0; d < n; ++d) df += tf[d].count(sorted[w]);
    idf[w] = 1.0 + std::log(static_cast<double>(n) / static_cast<double>(df));
  }
  // Dense matrix: doc x word.
  std::vector<std::vector<double>> dense(n, std::vector<double>(sorted.size(), 0.0));
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t w = 0; w < sorted.size(); ++w) {
      auto it = tf[d].find(sorted[w]);
      if (it != tf[d].end()) dense[d][w] = it->second * idf[w];
    }
  }
  std::vector<double> q(sorted.size(), 0.0);
  for (std::size_t w = 0; w < sorted.size(); ++w) {
    auto it = query.terms.find(sorted[w]);
    if (it != query.terms.end() && it->second > 0.0) q[w] = it->second * idf[w];
  }
  double qn = 0.0;
  for (double v : q) qn += v * v;
  qn = std::sqrt(qn);

  pir::SearchResult out;
  if (qn == 0.0) return out;
  for (std::size_t d = 0; d < n; ++d) {
    if (std::find(exclude.begin(), exclude.end(), d) != exclude.end()) continue;
    double dot = 0.0, dn = 0.0;
    for (std::size_t w = 0; w < sorted.size(); ++w) {
      dot += q[w] * dense[d][w];
      dn += dense[d][w] * dense[d][w];
    }
    if (dot > 0.0) out.push_back({d, corpus[d].id, dot / (qn * std::sqrt(dn))});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
  return out;
}

namespace {

class HashSession final : public pir::ModelSession {
 public:
  explicit HashSession(const HashModel* m) : m_(m) {}
  void reset() override { history_.clear(); }
  void feed(pir::WordId w) override { history_.push_back(w); }
  std::vector<double> next_distribution() const override { return m_->distribution(history_); }
  std::unique_ptr<pir::ModelSession> clone() const override { return std::make_unique<HashSession>(*this); }

 private:
  const HashModel* m_;
  std::vector<pir::WordId> history_;
};

}  // namespace

HashModel::HashModel(pir::Vocabulary vocab, std::uint64_t seed, int levels)
    : vocab_(std::move(vocab)), seed_(seed), levels_(levels) {}

std::unique_ptr<pir::ModelSession> HashModel::new_session() const { return std::make_unique<HashSession>(this); }

std::vector<double> HashModel::distribution(std::span<const pir::WordId> history) const {
  std::vector<std::uint32_t> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  key.insert(key.end(), history.begin(), history.end());
  std::seed_seq seq(key.begin(), key.end());
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> level(0, levels_);
  std::vector<double> p(vocab_.size());
  double total = 0.0;
  for (auto& v : p) total += (v = level(rng));
  if (total == 0.0) {
    p.assign(p.size(), 1.0);
    total = static_cast<double>(p.size());
  }
  for (auto& v : p) v /= total;
  return p;
}

std::vector<std::vector<BeamOracleNode>> beam_enumerate(
    const pir::Vocabulary& vocab, const std::function<std::vector<double>(std::span<const pir::WordId>)>& history,
    std::size_t b, std::size_t k, std::size_t d) {
  // top-b successors of a path, by (p desc, word asc)
  auto successors = [&](const std::vector<pir::WordId>& path) {
    const auto dist = history(path);
    std::vector<pir::WordId> ids;
    for (pir::WordId w = 0; w < dist.size(); ++w) {
      if (w != pir::Vocabulary::kUnk && dist[w] > 0.0) ids.push_back(w);
    }
    std::sort(ids.begin(), ids.end(), [&](auto a, auto c) {
      return dist[a] != dist[c] ? dist[a] > dist[c] : vocab.word(a) < vocab.word(c);
    });
    if (ids.size() > b) ids.resize(b);
    std::vector<std::pair<pir::WordId, double>> out;
    for (auto w : ids) out.emplace_back(w, dist[w]);
    return out;
  };

  // Full tree, level by level; each node remembers its probabilities along the path.
  struct Full {
    std::vector<pir::WordId> path;
    std::vector<double> probs;
    std::size_t parent;  // index in the previous full level
  };
  std::vector<std::vector<Full>> full(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (j == 0) {
      for (auto [w, p] : successors({})) full[0].push_back({{w}, {p}, 0});
      continue;
    }
    for (std::size_t i = 0; i < full[j - 1].size(); ++i) {
      const auto& parent = full[j - 1][i];
      for (auto [w, p] : successors(parent.path)) {
        Full node{parent.path, parent.probs, i};
        node.path.push_back(w);
        node.probs.push_back(p);
        full[j].push_back(std::move(node));
      }
    }
  }

  // Top-down pruning.
  std::vector<std::vector<BeamOracleNode>> levels;
  std::map<std::size_t, std::size_t> survivor_rank;  // full index -> survivor position
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::pair<BeamOracleNode, std::size_t>> cands;
    for (std::size_t i = 0; i < full[j].size(); ++i) {
      const auto& f = full[j][i];
      std::size_t parent = 0;
      if (j > 0) {
        auto it = survivor_rank.find(f.parent);
        if (it == survivor_rank.end()) continue;
        parent = it->second;
      }
      double r = 1.0;
      for (double p : f.probs) r *= p;
      cands.push_back({{f.path, f.probs.back(), r, parent}, i});
    }
    std::sort(cands.begin(), cands.end(), [&](const auto& x, const auto& y) {
      const auto& a = x.first;
      const auto& c = y.first;
      if (a.path_score != c.path_score) return a.path_score > c.path_score;
      if (a.prob != c.prob) return a.prob > c.prob;
      const auto& wa = vocab.word(a.path.back());
      const auto& wc = vocab.word(c.path.back());
      if (wa != wc) return wa < wc;
      return a.parent < c.parent;
    });
    if (cands.size() > k) cands.resize(k);
    if (cands.empty()) break;
    survivor_rank.clear();
    std::vector<BeamOracleNode> level;
    for (std::size_t s = 0; s < cands.size(); ++s) {
      survivor_rank[cands[s].second] = s;
      level.push_back(cands[s].first);
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

Matrix gauss_jordan_inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular matrix");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double diag = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= diag;
      inv[col][c] /= diag;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

LinRelReference linrel_explicit(const Matrix& x, const std::vector<double>& y, double mu) {
  const std::size_t rows = x.size();
  const std::size_t m = rows ? x[0].size() : 0;
  Matrix g(m, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t i = 0; i < rows; ++i) g[a][b] += x[i][a] * x[i][b];
      if (a == b) g[a][b] += mu;
    }
  const Matrix inv = gauss_jordan_inverse(g);
  // P = inv * X^T  (m x rows)
  Matrix p(m, std::vector<double>(rows, 0.0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t b = 0; b < m; ++b) p[a][i] += inv[a][b] * x[i][b];
  // A = X * P  (rows x rows)
  Matrix amat(rows, std::vector<double>(rows, 0.0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t a = 0; a < m; ++a) amat[i][j] += x[i][a] * p[a][j];

  LinRelReference out;
  out.intent.assign(m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < rows; ++i) out.intent[a] += p[a][i] * y[i];
  out.relevance.assign(rows, 0.0);
  out.sigma.assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j) {
      out.relevance[i] += amat[i][j] * y[j];
      out.sigma[i] += amat[i][j] * amat[i][j];
    }
  return out;
}

PlainLstm::PlainLstm(std::vector<double> params, std::size_t vocab, std::size_t embed, std::size_t hidden,
                     std::size_t layers)
    : p_(std::move(params)), v_(vocab), e_(embed), h_(hidden), layers_(layers) {
  reset();
}

void PlainLstm::reset() {
  h_state_.assign(layers_, std::vector<double>(h_, 0.0));
  c_state_.assign(layers_, std::vector<double>(h_, 0.0));
}

std::vector<double> PlainLstm::step(std::uint32_t word) {
  auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  std::size_t at = 0;
  std::vector<double> x(e_);
  for (std::size_t r = 0; r < e_; ++r) x[r] = p_[at + word * e_ + r];  // column-major E x V
  at += e_ * v_;
  for (std::size_t l = 0; l < layers_; ++l) {
    const std::size_t in = x.size();
    const std::size_t rows = 4 * h_, cols = in + h_;
    const std::size_t w_at = at, b_at = at + rows * cols;
    at = b_at + rows;
    std::vector<double> z(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = p_[b_at + r];
      for (std::size_t c = 0; c < in; ++c) s += p_[w_at + c * rows + r] * x[c];
      for (std::size_t c = 0; c < h_; ++c) s += p_[w_at + (in + c) * rows + r] * h_state_[l][c];
      z[r] = s;
    }
    for (std::size_t u = 0; u < h_; ++u) {
      const double i = sig(z[u]), f = sig(z[h_ + u]), g = std::tanh(z[2 * h_ + u]), o = sig(z[3 * h_ + u]);
      c_state_[l][u] = f * c_state_[l][u] + i * g;
      h_state_[l][u] = o * std::tanh(c_state_[l][u]);
    }
    x = h_state_[l];
  }
  std::vector<double> logits(v_);
  const std::size_t ow = at, ob = at + v_ * h_;
  double mx = -INFINITY;
  for (std::size_t r = 0; r < v_; ++r) {
    double s = p_[ob + r];
    for (std::size_t c = 0; c < h_; ++c) s += p_[ow + c * v_ + r] * x[c];
    logits[r] = s;
    mx = std::max(mx, s);
  }
  double total = 0.0;
  for (auto& s : logits) total += (s = std::exp(s - mx));
  for (auto& s : logits) s /= total;
  return logits;
}

double PlainLstm::loss(std::span<const std::uint32_t> inputs, std::span<const std::uint32_t> targets) {
  reset();
  double total = 0.0;
  for (std::size_t t = 0; t < inputs.size(); ++t) total -= std::log(step(inputs[t])[targets[t]]);
  return total / static_cast<double>(inputs.size());
}

std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
