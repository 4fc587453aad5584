#include "pir/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "pir/error.hpp"
#include "pir/text.hpp"

namespace pir {
namespace {

std::unique_ptr<Expander> make_expander(const SimulationContext& ctx, ExpanderKind method) {
  switch (method) {
    case ExpanderKind::kBaseline:
      return nullptr;
    case ExpanderKind::kLmBeam:
      if (ctx.model == nullptr || ctx.stats == nullptr) {
        throw Error(ErrorCode::kInvalidParameter, "lm-beam simulation needs a language model and corpus stats");
      }
      return std::make_unique<BeamExpander>(*ctx.model, *ctx.stats, ctx.beam);
    case ExpanderKind::kIntentLinRel:
      if (ctx.linrel == nullptr) {
        throw Error(ErrorCode::kInvalidParameter, "intent-linrel simulation needs a LinRel model");
      }
      return std::make_unique<IntentExpander>(*ctx.linrel, ctx.intent);
  }
  return nullptr;
}

bool shares_topic(const Document& a, const Document& b) {
  // Topic lists are sorted and unique.
  auto i = a.topics.begin();
  auto j = b.topics.begin();
  while (i != a.topics.end() && j != b.topics.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

template <typename Fn>
void for_each_trial(std::size_t trials, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, trials));
  if (threads == 1) {
    for (std::size_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < trials; t = next++) {
          try {
            fn(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void summarize(CellResult& cell) {
  std::vector<double> values;
  for (const auto& t : cell.trials) {
    if (t.skipped) {
      ++cell.skips;
    } else {
      values.push_back(t.value);
    }
  }
  cell.completed = values.size();
  if (values.empty()) return;
  double sum = 0.0;
  for (double v : values) sum += v;
  cell.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - cell.mean) * (v - cell.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    cell.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
  }
}

void check_context(const SimulationContext& ctx, std::size_t n) {
  if (ctx.corpus == nullptr || ctx.index == nullptr) {
    throw Error(ErrorCode::kInvalidParameter, "simulation needs a corpus and an index");
  }
  if (ctx.corpus->empty()) throw Error(ErrorCode::kInvalidInput, "simulation corpus is empty");
  if (n == 0) throw Error(ErrorCode::kInvalidParameter, "context size n must be at least 1");
  if (ctx.top_k == 0) throw Error(ErrorCode::kInvalidParameter, "top_k must be at least 1");
}

// Runs every window of one trial through the proactive pipeline.
template <typename Judge>
void run_windows(const SimulationContext& ctx, ExpanderKind method, std::span<const std::string> tokens,
                 std::size_t n, std::span<const std::size_t> exclude, TrialOutcome& out, Judge&& judge) {
  auto expander = make_expander(ctx, method);
  for (const auto& window : sliding_windows(tokens, n)) {
    const auto q = make_query(window, expander.get(), ctx.query);
    if (q.fallback) ++out.fallbacks;
    const auto hits = recommend(*ctx.index, q.query, ctx.top_k, exclude);
    out.window_values.push_back(judge(hits));
  }
  double sum = 0.0;
  for (double v : out.window_values) sum += v;
  out.value = sum / static_cast<double>(out.window_values.size());
}

}  // namespace

std::string_view to_string(Task task) {
  return task == Task::kExploratory ? "exploratory" : "known-item";
}

std::optional<Task> parse_task(std::string_view name) {
  if (name == "exploratory") return Task::kExploratory;
  if (name == "known-item") return Task::kKnownItem;
  return std::nullopt;
}

std::size_t trial_document(std::size_t corpus_size, std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, corpus_size - 1);
  return pick(rng);
}

std::vector<std::vector<std::string>> sliding_windows(std::span<const std::string> tokens, std::size_t n) {
  std::vector<std::vector<std::string>> windows;
  if (n == 0 || tokens.size() < n) return windows;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) windows.emplace_back(tokens.begin() + i, tokens.begin() + i + n);
  return windows;
}

CellResult exploratory_precision(const SimulationContext& ctx, ExpanderKind method, std::size_t n,
                                 std::size_t trials, std::uint64_t seed) {
  check_context(ctx, n);
  make_expander(ctx, method);  // fail fast on a missing dependency
  CellResult cell;
  cell.task = Task::kExploratory;
  cell.method = method;
  cell.n = n;
  cell.requested = trials;
  cell.trials.resize(trials);
  const auto& corpus = *ctx.corpus;
  for_each_trial(trials, ctx.threads, [&](std::size_t t) {
    auto& out = cell.trials[t];
    out.trial = t;
    out.doc = trial_document(corpus.size(), seed, t);
    const auto& input = corpus[out.doc];
    const auto tokens = tokenize(input.text);
    if (tokens.size() < n || input.topics.empty()) {
      out.skipped = true;
      return;
    }
    const std::size_t exclude[] = {out.doc};
    run_windows(ctx, method, tokens, n, exclude, out, [&](const SearchResult& hits) {
      std::size_t relevant = 0;
      for (const auto& h : hits) relevant += shares_topic(corpus[h.doc], input) ? 1 : 0;
      // Fewer than top_k hits only happens when few documents match at all.
      return hits.empty() ? 0.0 : static_cast<double>(relevant) / static_cast<double>(hits.size());
    });
  });
  summarize(cell);
  return cell;
}

std::optional<std::size_t> known_item_target(const Corpus& corpus, const InvertedIndex& index, std::size_t doc) {
  const auto tokens = tokenize(corpus[doc].text);
  const std::size_t exclude[] = {doc};
  const auto hits = index.search(count_query(tokens), 1, exclude);
  if (hits.empty()) return std::nullopt;
  return hits.front().doc;
}

CellResult known_item_found(const SimulationContext& ctx, ExpanderKind method, std::size_t n, std::size_t trials,
                            std::uint64_t seed) {
  check_context(ctx, n);
  make_expander(ctx, method);
  CellResult cell;
  cell.task = Task::kKnownItem;
  cell.method = method;
  cell.n = n;
  cell.requested = trials;
  cell.trials.resize(trials);
  const auto& corpus = *ctx.corpus;
  for_each_trial(trials, ctx.threads, [&](std::size_t t) {
    auto& out = cell.trials[t];
    out.trial = t;
    out.doc = trial_document(corpus.size(), seed, t);
    const auto tokens = tokenize(corpus[out.doc].text);
    out.target = tokens.size() < n ? std::nullopt : known_item_target(corpus, *ctx.index, out.doc);
    if (!out.target) {
      out.skipped = true;
      return;
    }
    std::vector<std::size_t> exclude{out.doc};
    if (ctx.exclude_target) exclude.push_back(*out.target);
    const auto target = *out.target;
    run_windows(ctx, method, tokens, n, exclude, out, [&](const SearchResult& hits) {
      const bool found = std::any_of(hits.begin(), hits.end(), [&](const SearchHit& h) { return h.doc == target; });
      return found ? 1.0 : 0.0;
    });
  });
  summarize(cell);
  return cell;
}

}  // namespace pir
