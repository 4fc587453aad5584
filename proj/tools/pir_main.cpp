// pir: command-line front end for ingesting corpora, training next-word
// models, inspecting expansions, running simulations and serving sessions.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pir/beam.hpp"
#include "pir/corpus_io.hpp"
#include "pir/error.hpp"
#include "pir/linrel.hpp"
#include "pir/lstm.hpp"
#include "pir/ngram.hpp"
#include "pir/proactive.hpp"
#include "pir/service.hpp"
#include "pir/simulation.hpp"
#include "pir/synth.hpp"
#include "pir/text.hpp"
#include "pir/workspace.hpp"

namespace {

using namespace pir;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

LinRelModel build_linrel(const Workspace& ws, std::size_t sample, std::uint64_t seed, double mu, bool unsquared) {
  const auto columns = sample_columns(ws.corpus.size(), sample, seed);
  auto x = TermDocMatrix::build(ws.corpus, ws.stats, StopWords::english(), columns);
  return LinRelModel(std::move(x), mu, unsquared ? SigmaForm::kRowNorm : SigmaForm::kSquaredRowNorm);
}

void write_manifest(const std::filesystem::path& path, const LinRelModel& model, std::size_t sample,
                    std::uint64_t seed) {
  auto out = open_output(path);
  out << "pir-intent-sample 1\n";
  out << "requested\t" << sample << "\nseed\t" << seed << "\nmu\t" << model.mu() << '\n';
  out << "rows\t" << model.matrix().rows() << "\ncolumns\t" << model.matrix().cols() << '\n';
  for (const auto& id : model.matrix().column_ids()) out << id << '\n';
}

struct IngestArgs {
  std::string input;
  std::size_t vocab_size = 10000;
  std::string out;
};

int run_ingest(const IngestArgs& a) {
  auto ws = Workspace::build(read_corpus(a.input), a.vocab_size);
  ws.save(a.out);
  std::cout << "documents\t" << ws.corpus.size() << "\nvocabulary\t" << ws.vocab.size() << "\nterms\t"
            << ws.index.num_terms() << '\n';
  return 0;
}

struct QueryArgs {
  std::string index;
  std::string text;
  std::size_t top_k = kDefaultTopK;
};

int run_query(const QueryArgs& a) {
  const auto ws = Workspace::load(a.index);
  const auto tokens = tokenize(a.text);
  const auto hits = ws.index.search(count_query(tokens), a.top_k);
  std::cout << "rank\tdoc_id\tscore\n";
  for (std::size_t i = 0; i < hits.size(); ++i) std::cout << i + 1 << '\t' << hits[i].id << '\t' << num(hits[i].score) << '\n';
  if (hits.empty()) std::cerr << "no document matches the query\n";
  return 0;
}

struct TrainArgs {
  std::string model = "ngram";
  std::string corpus;
  std::size_t order = 3;
  double alpha = 0.1;
  std::size_t hidden = 64;
  std::size_t layers = 2;
  std::size_t unroll = 35;
  std::size_t epochs = 1;
  double lr = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string log;
};

int run_train(const TrainArgs& a) {
  const auto ws = Workspace::load(a.corpus);
  if (a.model == "ngram") {
    const auto model = NGramModel::train(ws.corpus, ws.vocab, {a.order, a.alpha});
    save_model_file(model, a.out);
    std::cout << "ngram order " << a.order << " alpha " << a.alpha << " written to " << a.out << '\n';
    return 0;
  }
  LstmConfig cfg;
  cfg.layers = a.layers;
  cfg.hidden = a.hidden;
  cfg.unroll = a.unroll;
  cfg.seed = a.seed;
  LstmModel model(ws.vocab, cfg);
  const auto stream = token_stream(ws.corpus, ws.vocab);
  LstmTrainOptions opts;
  opts.epochs = a.epochs;
  opts.learning_rate = a.lr;
  opts.unroll = a.unroll;
  const auto report = model.train(stream, opts);
  save_model_file(model, a.out);
  const auto log_path = a.log.empty() ? a.out + ".perplexity.csv" : a.log;
  auto log = open_output(log_path);
  log << "epoch,perplexity\n";
  for (std::size_t e = 0; e < report.perplexity.size(); ++e) {
    log << e + 1 << ',' << num(report.perplexity[e]) << '\n';
    std::cout << "epoch " << e + 1 << " perplexity " << num(report.perplexity[e]) << '\n';
  }
  return 0;
}

struct ExpandArgs {
  std::string model;
  std::string stats;
  std::string text;
  std::size_t b = 10, k = 80, d = 3, n_exp = 10;
};

int run_expand(const ExpandArgs& a) {
  const auto model = load_model_file(a.model);
  CorpusStats stats;
  {
    auto in = open_input(IngestPaths{a.stats}.stats());
    stats = read_stats(in);
  }
  const auto context = tokenize(a.text);
  BeamParams params;
  params.branching = a.b;
  params.width = a.k;
  params.depth = a.d;
  const auto tree = beam_expand(*model, context, params);
  const auto terms =
      select_expansion(score_candidates(tree, model->vocab(), stats, StopWords::english(), context), a.n_exp);
  std::cout << "word\tp\tR\tidf\tscore\tpath\n";
  for (const auto& t : terms) {
    std::string path;
    for (const auto& w : t.path) path += (path.empty() ? "" : " ") + w;
    std::cout << t.word << '\t' << num(t.prob) << '\t' << num(t.path_score) << '\t' << num(t.idf) << '\t'
              << num(t.score) << '\t' << path << '\n';
  }
  return 0;
}

struct IntentArgs {
  std::string index;
  std::size_t sample = kDefaultIntentSample;
  std::uint64_t seed = 1;
  double mu = 1.0, c = 1.0, tau = 0.1;
  std::size_t n_exp = 10;
  std::string text;
  std::string manifest;
  bool unsquared = false;
};

int run_intent(const IntentArgs& a) {
  const auto ws = Workspace::load(a.index);
  const auto model = build_linrel(ws, a.sample, a.seed, a.mu, a.unsquared);
  const auto manifest = a.manifest.empty() ? (std::filesystem::path(a.index) / "intent_manifest.txt").string() : a.manifest;
  write_manifest(manifest, model, a.sample, a.seed);

  const auto window = tokenize(a.text);
  RelevanceState state(model.matrix().rows(), a.tau);
  update_relevance(state, model.matrix(), window);
  const auto solution = model.solve(state.y());
  const auto v = solution.ucb(a.c);
  std::cout << "word\ty_hat\tsigma\tv\n";
  for (const auto& w : linrel_expand(solution, model.matrix(), window, a.n_exp, a.c)) {
    const auto r = static_cast<Eigen::Index>(*model.matrix().row(w.word));
    std::cout << w.word << '\t' << num(solution.relevance[r]) << '\t' << num(solution.sigma[r]) << '\t' << num(v[r])
              << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::string task = "exploratory";
  std::string method = "baseline,lm,intent";
  std::string corpus;
  std::string n_grid = "3,5,10,20,40";
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  std::string out;
  std::string model;
  std::size_t sample = kDefaultIntentSample;
  double mu = 1.0, c = 1.0, tau = 0.1;
  std::size_t b = 10, k = 80, d = 3, n_exp = 10, top_k = kDefaultTopK;
  std::size_t threads = 1;
  bool score_weighting = false;
};

int run_simulate(const SimulateArgs& a) {
  const auto ws = Workspace::load(a.corpus);
  SuiteConfig suite;
  suite.tasks.clear();
  for (const auto& t : split_list(a.task == "all" ? "exploratory,known-item" : a.task)) {
    auto task = parse_task(t);
    if (!task) throw Error(ErrorCode::kInvalidParameter, "unknown task '" + t + "'");
    suite.tasks.push_back(*task);
  }
  suite.methods.clear();
  for (const auto& m : split_list(a.method == "all" ? "baseline,lm,intent" : a.method)) {
    auto kind = parse_expander(m);
    if (!kind) throw Error(ErrorCode::kInvalidParameter, "unknown method '" + m + "'");
    suite.methods.push_back(*kind);
  }
  suite.n_grid.clear();
  for (const auto& n : split_list(a.n_grid)) suite.n_grid.push_back(std::stoull(n));
  suite.trials = a.trials;
  suite.seed = a.seed;
  suite.out_dir = a.out;

  const auto uses = [&](ExpanderKind k) {
    return std::find(suite.methods.begin(), suite.methods.end(), k) != suite.methods.end();
  };
  std::unique_ptr<NextWordModel> model;
  if (uses(ExpanderKind::kLmBeam)) {
    if (!a.model.empty()) {
      model = load_model_file(a.model);
    } else {
      model = std::make_unique<NGramModel>(NGramModel::train(ws.corpus, ws.vocab, {}));
    }
  }
  std::optional<LinRelModel> linrel;
  if (uses(ExpanderKind::kIntentLinRel)) linrel.emplace(build_linrel(ws, a.sample, a.seed, a.mu, false));

  SimulationContext ctx;
  ctx.corpus = &ws.corpus;
  ctx.index = &ws.index;
  ctx.stats = &ws.stats;
  ctx.model = model.get();
  ctx.linrel = linrel ? &*linrel : nullptr;
  ctx.beam = {a.b, a.k, a.d};
  ctx.intent = {a.c, a.tau};
  ctx.query = {a.n_exp, a.score_weighting};
  ctx.top_k = a.top_k;
  ctx.threads = a.threads;

  const auto result = run_suite(ctx, suite);
  write_report_csv(std::cout, result.rows);
  for (const auto& e : result.errors) std::cerr << "cell failed: " << e << '\n';
  return result.errors.empty() ? 0 : 3;
}

struct ServeArgs {
  std::string index;
  std::string model;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t window = 10;
  std::size_t sample = kDefaultIntentSample;
  std::uint64_t seed = 1;
  std::string static_dir;
  bool no_intent = false;
};

HttpApi* g_api = nullptr;

int run_serve(const ServeArgs& a) {
  const auto ws = Workspace::load(a.index);
  std::unique_ptr<NextWordModel> model;
  if (!a.model.empty()) model = load_model_file(a.model);
  std::optional<LinRelModel> linrel;
  if (!a.no_intent) linrel.emplace(build_linrel(ws, a.sample, a.seed, 1.0, false));

  ServiceConfig config;
  config.window = a.window;
  RecommendationService service(ws.corpus, ws.index, ws.stats, model.get(), linrel ? &*linrel : nullptr, config);
  HttpApi api(service);
  if (!a.static_dir.empty() && !api.mount_static(a.static_dir)) {
    throw Error(ErrorCode::kIo, "cannot serve static files from '" + a.static_dir + "'");
  }
  if (!api.bind(a.host, a.port)) throw Error(ErrorCode::kIo, "cannot bind " + a.host + ":" + std::to_string(a.port));
  g_api = &api;
  std::signal(SIGINT, [](int) { if (g_api) g_api->stop(); });
  std::signal(SIGTERM, [](int) { if (g_api) g_api->stop(); });

  std::atomic<bool> running{true};
  std::jthread janitor([&] {
    while (running) {
      std::this_thread::sleep_for(std::chrono::seconds(1));
      service.expire_idle(RecommendationService::Clock::now());
    }
  });
  std::cerr << "serving " << ws.corpus.size() << " documents on http://" << a.host << ':' << a.port
            << (model ? " (lm-beam enabled)" : "") << (linrel ? " (intent-linrel enabled)" : "") << '\n';
  api.listen_after_bind();
  running = false;
  g_api = nullptr;
  return 0;
}

struct SynthArgs {
  SynthConfig config;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  write_corpus(a.out, synth_corpus(a.config));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proactive retrieval toolkit: ingest, train, expand, simulate, serve"};
  app.require_subcommand(1);
  std::function<int()> action;

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Build vocabulary, corpus stats and index from a JSONL corpus");
  c_ingest->add_option("--input", ingest.input, "Corpus file (JSON lines)")->required();
  c_ingest->add_option("--vocab-size", ingest.vocab_size, "Vocabulary size including reserved tokens");
  c_ingest->add_option("--out", ingest.out, "Output directory")->required();
  c_ingest->callback([&] { action = [&] { return run_ingest(ingest); }; });

  QueryArgs query;
  auto* c_query = app.add_subcommand("query", "Cosine search over an ingested index");
  c_query->add_option("--index", query.index, "Ingest directory")->required();
  c_query->add_option("--text", query.text, "Query words")->required();
  c_query->add_option("--top-k", query.top_k, "Results to return");
  c_query->callback([&] { action = [&] { return run_query(query); }; });

  TrainArgs train;
  auto* c_train = app.add_subcommand("train-lm", "Train a next-word model");
  c_train->add_option("--model", train.model, "ngram or lstm")->check(CLI::IsMember({"ngram", "lstm"}));
  c_train->add_option("--corpus", train.corpus, "Ingest directory")->required();
  c_train->add_option("--order", train.order, "n-gram order");
  c_train->add_option("--alpha", train.alpha, "n-gram add-alpha smoothing");
  c_train->add_option("--hidden", train.hidden, "LSTM hidden units per layer");
  c_train->add_option("--layers", train.layers, "LSTM layers");
  c_train->add_option("--unroll", train.unroll, "BPTT window length");
  c_train->add_option("--epochs", train.epochs, "Training epochs");
  c_train->add_option("--lr", train.lr, "SGD learning rate");
  c_train->add_option("--seed", train.seed, "Initialization seed");
  c_train->add_option("--out", train.out, "Model file")->required();
  c_train->add_option("--perplexity-log", train.log, "CSV (epoch, perplexity); default <out>.perplexity.csv");
  c_train->callback([&] { action = [&] { return run_train(train); }; });

  ExpandArgs expand;
  auto* c_expand = app.add_subcommand("expand", "Beam-search expansion of a context");
  c_expand->add_option("--model", expand.model, "Model file")->required();
  c_expand->add_option("--stats", expand.stats, "Ingest directory holding stats.txt")->required();
  c_expand->add_option("--text", expand.text, "Context words")->required();
  c_expand->add_option("--b", expand.b, "Branching coefficient");
  c_expand->add_option("--k", expand.k, "Beam width");
  c_expand->add_option("--d", expand.d, "Depth");
  c_expand->add_option("--n-exp", expand.n_exp, "Expansion words");
  c_expand->callback([&] { action = [&] { return run_expand(expand); }; });

  IntentArgs intent;
  auto* c_intent = app.add_subcommand("intent-expand", "LinRel upper-confidence-bound expansion of a window");
  c_intent->add_option("--index", intent.index, "Ingest directory")->required();
  c_intent->add_option("--sample", intent.sample, "Documents sampled as columns of X");
  c_intent->add_option("--seed", intent.seed, "Sampling seed");
  c_intent->add_option("--mu", intent.mu, "Regularization");
  c_intent->add_option("--c", intent.c, "Exploration weight");
  c_intent->add_option("--tau", intent.tau, "Relevance cutoff");
  c_intent->add_option("--n-exp", intent.n_exp, "Expansion words");
  c_intent->add_option("--text", intent.text, "Window words")->required();
  c_intent->add_option("--manifest", intent.manifest, "Sample manifest path; default <index>/intent_manifest.txt");
  c_intent->add_flag("--unsquared-sigma", intent.unsquared, "Use |row_i(A)| instead of its square");
  c_intent->callback([&] { action = [&] { return run_intent(intent); }; });

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Exploratory / known-item simulations");
  c_sim->add_option("--task", sim.task, "exploratory, known-item, comma list or all");
  c_sim->add_option("--method", sim.method, "baseline, lm, intent, comma list or all");
  c_sim->add_option("--corpus", sim.corpus, "Ingest directory")->required();
  c_sim->add_option("--n-grid", sim.n_grid, "Context sizes, comma separated");
  c_sim->add_option("--trials", sim.trials, "Input documents per cell");
  c_sim->add_option("--seed", sim.seed, "Run seed");
  c_sim->add_option("--out", sim.out, "Output directory")->required();
  c_sim->add_option("--model", sim.model, "Model file for lm (default: trigram trained on the corpus)");
  c_sim->add_option("--sample", sim.sample, "Intent model column sample");
  c_sim->add_option("--mu", sim.mu, "Intent regularization");
  c_sim->add_option("--c", sim.c, "Intent exploration weight");
  c_sim->add_option("--tau", sim.tau, "Intent relevance cutoff");
  c_sim->add_option("--b", sim.b, "Branching coefficient");
  c_sim->add_option("--k", sim.k, "Beam width");
  c_sim->add_option("--d", sim.d, "Depth");
  c_sim->add_option("--n-exp", sim.n_exp, "Expansion words");
  c_sim->add_option("--top-k", sim.top_k, "Retrieved documents per query");
  c_sim->add_option("--threads", sim.threads, "Parallel trials");
  c_sim->add_flag("--score-weighting", sim.score_weighting, "Weight expansion words by normalized score");
  c_sim->callback([&] { action = [&] { return run_simulate(sim); }; });

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "HTTP recommendation service");
  c_serve->add_option("--index", serve.index, "Ingest directory")->required();
  c_serve->add_option("--model", serve.model, "Model file enabling lm-beam sessions");
  c_serve->add_option("--host", serve.host, "Bind address");
  c_serve->add_option("--port", serve.port, "Port");
  c_serve->add_option("--window", serve.window, "Default context window n");
  c_serve->add_option("--sample", serve.sample, "Intent model column sample");
  c_serve->add_option("--seed", serve.seed, "Intent sampling seed");
  c_serve->add_option("--static", serve.static_dir, "Directory served at /");
  c_serve->add_flag("--no-intent", serve.no_intent, "Do not build the intent model");
  c_serve->callback([&] { action = [&] { return run_serve(serve); }; });

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic topic corpus (JSONL)");
  c_synth->add_option("--topics", synth.config.topics, "Topics");
  c_synth->add_option("--docs-per-topic", synth.config.docs_per_topic, "Documents per topic");
  c_synth->add_option("--vocab", synth.config.vocab_size, "Vocabulary size");
  c_synth->add_option("--length", synth.config.doc_length, "Tokens per document");
  c_synth->add_option("--topic-mass", synth.config.topic_mass, "Probability of a topic-block token");
  c_synth->add_option("--seed", synth.config.seed, "Seed");
  c_synth->add_option("--out", synth.out, "Output JSONL file")->required();
  c_synth->callback([&] { action = [&] { return run_synth(synth); }; });

  CLI11_PARSE(app, argc, argv);
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
