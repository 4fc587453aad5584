#include "pir/ngram.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "pir/error.hpp"

namespace pir {
namespace {

class NGramSession final : public ModelSession {
 public:
  explicit NGramSession(const NGramModel& model) : model_(&model) {}

  void reset() override { history_.clear(); }

  void feed(WordId word) override {
    const auto keep = model_->config().order - 1;
    if (keep == 0) return;
    history_.push_back(word);
    if (history_.size() > keep) history_.erase(history_.begin());
  }

  std::vector<double> next_distribution() const override { return model_->distribution(history_); }

  std::unique_ptr<ModelSession> clone() const override { return std::make_unique<NGramSession>(*this); }

 private:
  const NGramModel* model_;
  std::vector<WordId> history_;
};

}  // namespace

NGramModel NGramModel::train(const Corpus& corpus, Vocabulary vocab, NGramConfig config) {
  std::vector<std::vector<WordId>> streams;
  streams.reserve(corpus.size());
  for (const auto& doc : corpus) streams.push_back(token_stream(doc, vocab));
  return train(streams, std::move(vocab), config);
}

NGramModel NGramModel::train(std::span<const std::vector<WordId>> streams, Vocabulary vocab, NGramConfig config) {
  if (config.order == 0) throw Error(ErrorCode::kInvalidParameter, "n-gram order must be at least 1");
  if (!(config.alpha >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "smoothing constant must be nonnegative");
  const bool any = std::any_of(streams.begin(), streams.end(), [](const auto& s) { return !s.empty(); });
  if (!any) throw Error(ErrorCode::kInvalidInput, "cannot train an n-gram model on an empty corpus");

  std::map<std::vector<WordId>, std::map<WordId, std::uint64_t>> raw;
  for (const auto& stream : streams) {
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (stream[i] >= vocab.size()) throw Error(ErrorCode::kInvalidInput, "word id outside the vocabulary");
      for (std::size_t len = 0; len < config.order && len <= i; ++len) {
        std::vector<WordId> ctx(stream.begin() + static_cast<std::ptrdiff_t>(i - len),
                                stream.begin() + static_cast<std::ptrdiff_t>(i));
        ++raw[std::move(ctx)][stream[i]];
      }
    }
  }
  NGramModel model(std::move(vocab), config);
  for (auto& [ctx, nexts] : raw) {
    ContextCounts counts;
    counts.next.assign(nexts.begin(), nexts.end());
    for (const auto& [_, c] : counts.next) counts.total += c;
    model.tables_.emplace(ctx, std::move(counts));
  }
  return model;
}

const NGramModel::ContextCounts* NGramModel::counts(std::span<const WordId> context) const {
  auto it = tables_.find(std::vector<WordId>(context.begin(), context.end()));
  return it == tables_.end() ? nullptr : &it->second;
}

std::vector<double> NGramModel::distribution(std::span<const WordId> history) const {
  const std::size_t v = vocab_.size();
  const std::size_t max_len = std::min(history.size(), config_.order - 1);
  const ContextCounts* table = nullptr;
  for (std::size_t len = max_len + 1; len-- > 0;) {
    table = counts(history.subspan(history.size() - len));
    if (table != nullptr && table->total > 0) break;
  }
  std::vector<double> dist(v);
  if (table == nullptr || table->total == 0) {
    std::fill(dist.begin(), dist.end(), 1.0 / static_cast<double>(v));
    return dist;
  }
  const double denom = static_cast<double>(table->total) + config_.alpha * static_cast<double>(v);
  std::fill(dist.begin(), dist.end(), config_.alpha / denom);
  for (const auto& [word, c] : table->next) dist[word] = (static_cast<double>(c) + config_.alpha) / denom;
  return dist;
}

std::unique_ptr<ModelSession> NGramModel::new_session() const { return std::make_unique<NGramSession>(*this); }

void NGramModel::save(std::ostream& out) const {
  out.precision(17);
  out << "order\t" << config_.order << '\n';
  out << "alpha\t" << config_.alpha << '\n';
  out << "contexts\t" << tables_.size() << '\n';
  for (const auto& [ctx, counts] : tables_) {
    out << ctx.size();
    for (auto w : ctx) out << ' ' << w;
    out << '\t' << counts.next.size();
    for (const auto& [w, c] : counts.next) out << ' ' << w << ':' << c;
    out << '\n';
  }
}

NGramModel NGramModel::load(std::istream& in, Vocabulary vocab) {
  const auto fail = [](const std::string& what) { return Error(ErrorCode::kInvalidInput, "n-gram model: " + what); };
  NGramConfig config;
  std::string key;
  std::size_t contexts = 0;
  if (!(in >> key >> config.order) || key != "order") throw fail("missing order");
  if (!(in >> key >> config.alpha) || key != "alpha") throw fail("missing alpha");
  if (!(in >> key >> contexts) || key != "contexts") throw fail("missing context count");
  if (config.order == 0) throw fail("order must be positive");
  NGramModel model(std::move(vocab), config);
  const auto v = model.vocab_.size();
  for (std::size_t i = 0; i < contexts; ++i) {
    std::size_t len = 0, n = 0;
    if (!(in >> len) || len >= config.order) throw fail("bad context length");
    std::vector<WordId> ctx(len);
    for (auto& w : ctx) {
      if (!(in >> w) || w >= v) throw fail("bad context word");
    }
    ContextCounts counts;
    if (!(in >> n)) throw fail("bad successor count");
    counts.next.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      WordId w = 0;
      std::uint64_t c = 0;
      char colon = 0;
      if (!(in >> w >> colon >> c) || colon != ':' || w >= v) throw fail("bad successor entry");
      counts.next.emplace_back(w, c);
      counts.total += c;
    }
    model.tables_.emplace(std::move(ctx), std::move(counts));
  }
  return model;
}

}  // namespace pir
