#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pir/corpus.hpp"
#include "pir/index.hpp"
#include "pir/linrel.hpp"
#include "pir/lm.hpp"
#include "pir/proactive.hpp"

namespace pir {

enum class Task { kExploratory, kKnownItem };

std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view name);

// Everything a trial needs; all members are shared read-only across trials.
struct SimulationContext {
  const Corpus* corpus = nullptr;
  const InvertedIndex* index = nullptr;
  const CorpusStats* stats = nullptr;
  const NextWordModel* model = nullptr;   // required for kLmBeam
  const LinRelModel* linrel = nullptr;    // required for kIntentLinRel
  BeamExpanderOptions beam;
  IntentExpanderOptions intent;
  QueryOptions query;
  std::size_t top_k = kDefaultTopK;
  std::size_t threads = 1;                // trials run in parallel; results are order-independent
  bool exclude_target = false;            // known-item only: remove the target from retrieval
};

struct TrialOutcome {
  std::size_t trial = 0;
  std::size_t doc = 0;                    // input document (corpus position)
  bool skipped = false;
  std::optional<std::size_t> target;      // known-item target
  std::vector<double> window_values;      // per window: precision or found flag
  double value = 0.0;                     // mean over windows
  std::size_t fallbacks = 0;              // windows where the expander failed
};

struct CellResult {
  Task task = Task::kExploratory;
  ExpanderKind method = ExpanderKind::kBaseline;
  std::size_t n = 0;
  std::size_t requested = 0;
  std::size_t completed = 0;
  std::size_t skips = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<TrialOutcome> trials;
};

// Input documents are drawn uniformly under a per-trial seed derived from
// (seed, trial index), so every method and n sees the same documents.
std::size_t trial_document(std::size_t corpus_size, std::uint64_t seed, std::size_t trial);

// All length-n windows of `tokens`, in order. Empty if tokens are shorter than n.
std::vector<std::vector<std::string>> sliding_windows(std::span<const std::string> tokens, std::size_t n);

// Exploratory task: per window, the fraction of the (at most top_k) retrieved
// documents that share a topic with the input document, 0 when nothing is
// retrieved (input excluded from retrieval); windows are
// averaged per document, then over documents. Documents shorter than n or
// without topics are skipped.
CellResult exploratory_precision(const SimulationContext& ctx, ExpanderKind method, std::size_t n,
                                 std::size_t trials, std::uint64_t seed);

// Known-item task: the target is the best match for the whole input document
// over the rest of the corpus; per window the value is 1 if the target is in
// the top_k results.
CellResult known_item_found(const SimulationContext& ctx, ExpanderKind method, std::size_t n, std::size_t trials,
                            std::uint64_t seed);

// Target of the known-item task for one input document, if any document
// matches it at all.
std::optional<std::size_t> known_item_target(const Corpus& corpus, const InvertedIndex& index, std::size_t doc);

struct ReportRow {
  std::string task;
  std::string method;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t skips = 0;

  bool operator==(const ReportRow&) const = default;
};

// report.csv: header "task,method,n,trials,mean,stderr,skips", means and
// standard errors with six decimals. Failed cells have trials 0 and mean nan.
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);
std::vector<ReportRow> read_report_csv(std::istream& in);
// Line plot of mean versus n, one polyline per method, for the rows of `task`.
std::string render_svg(std::span<const ReportRow> rows, std::string_view task);

struct SuiteConfig {
  std::vector<Task> tasks{Task::kExploratory};
  std::vector<ExpanderKind> methods{ExpanderKind::kBaseline, ExpanderKind::kLmBeam, ExpanderKind::kIntentLinRel};
  std::vector<std::size_t> n_grid{3, 5, 10, 20, 40};
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
};

struct SuiteResult {
  std::vector<ReportRow> rows;
  std::vector<std::string> errors;  // one per failed cell
};

// Sweeps tasks x methods x n_grid. Writes report.csv, windows.csv (per-window
// values), config.txt, curve_<task>.svg and, if any cell failed, errors.txt
// into out_dir (created if missing). A failing cell is recorded and the
// sweep continues.
SuiteResult run_suite(const SimulationContext& ctx, const SuiteConfig& config);

}  // namespace pir
