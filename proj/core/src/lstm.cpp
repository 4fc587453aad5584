#include "pir/lstm.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "pir/error.hpp"

namespace pir {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstMat = Eigen::Map<const MatrixXd>;
using ConstVec = Eigen::Map<const VectorXd>;
using Mat = Eigen::Map<MatrixXd>;
using Vec = Eigen::Map<VectorXd>;

VectorXd sigmoid(const VectorXd& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

VectorXd softmax(const VectorXd& logits) {
  VectorXd p = (logits.array() - logits.maxCoeff()).exp().matrix();
  return p / p.sum();
}

struct LayerCache {
  VectorXd x, h_prev, c_prev, i, f, g, o, c, tc;
};

class LstmSession final : public ModelSession {
 public:
  explicit LstmSession(const LstmModel& model) : model_(&model) { reset(); }

  void reset() override {
    state_ = model_->zero_state();
    // h = 0, so the first prediction is the softmax of the output bias.
    const auto v = static_cast<Eigen::Index>(model_->vocab().size());
    const auto& params = model_->parameters();
    probs_ = softmax(params.tail(v));
  }

  void feed(WordId word) override { probs_ = model_->step(state_, word); }

  std::vector<double> next_distribution() const override {
    return std::vector<double>(probs_.data(), probs_.data() + probs_.size());
  }

  std::unique_ptr<ModelSession> clone() const override { return std::make_unique<LstmSession>(*this); }

 private:
  const LstmModel* model_;
  LstmModel::State state_;
  VectorXd probs_;
};

}  // namespace

LstmModel::LstmModel(Vocabulary vocab, LstmConfig config) : vocab_(std::move(vocab)), config_(config) {
  if (config_.layers == 0 || config_.hidden == 0) {
    throw Error(ErrorCode::kInvalidParameter, "LSTM needs at least one layer and one hidden unit");
  }
  layout_ = make_layout();
  params_.resize(static_cast<Eigen::Index>(layout_.total));
  std::mt19937_64 rng(config_.seed);
  std::uniform_real_distribution<double> dist(-config_.init_scale, config_.init_scale);
  for (Eigen::Index i = 0; i < params_.size(); ++i) params_[i] = dist(rng);
}

LstmModel::Layout LstmModel::make_layout() const {
  Layout l;
  const std::size_t v = vocab_.size();
  const std::size_t h = config_.hidden;
  std::size_t at = 0;
  l.embedding = at;
  at += embed_dim() * v;
  for (std::size_t layer = 0; layer < config_.layers; ++layer) {
    l.weights.push_back(at);
    at += 4 * h * (layer_input(layer) + h);
    l.biases.push_back(at);
    at += 4 * h;
  }
  l.out_weights = at;
  at += v * h;
  l.out_bias = at;
  at += v;
  l.total = at;
  return l;
}

LstmModel::State LstmModel::zero_state() const {
  State s;
  const auto h = static_cast<Eigen::Index>(config_.hidden);
  s.h.assign(config_.layers, VectorXd::Zero(h));
  s.c.assign(config_.layers, VectorXd::Zero(h));
  return s;
}

namespace {

// Runs one layer of the cell equations; fills `cache` and returns h.
template <typename W, typename B>
void cell_forward(const W& weights, const B& bias, Eigen::Index in, Eigen::Index h, LayerCache& cache) {
  const VectorXd z = weights.leftCols(in) * cache.x + weights.rightCols(h) * cache.h_prev + bias;
  cache.i = sigmoid(z.segment(0, h));
  cache.f = sigmoid(z.segment(h, h));
  cache.g = z.segment(2 * h, h).array().tanh().matrix();
  cache.o = sigmoid(z.segment(3 * h, h));
  cache.c = cache.f.cwiseProduct(cache.c_prev) + cache.i.cwiseProduct(cache.g);
  cache.tc = cache.c.array().tanh().matrix();
}

}  // namespace

Eigen::VectorXd LstmModel::step(State& state, WordId word) const {
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  const auto h = static_cast<Eigen::Index>(config_.hidden);
  if (word >= vocab_.size()) word = Vocabulary::kUnk;
  ConstMat emb(params_.data() + layout_.embedding, static_cast<Eigen::Index>(embed_dim()), v);
  LayerCache cache;
  cache.x = emb.col(word);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    const auto in = static_cast<Eigen::Index>(layer_input(l));
    ConstMat w(params_.data() + layout_.weights[l], 4 * h, in + h);
    ConstVec b(params_.data() + layout_.biases[l], 4 * h);
    cache.h_prev = state.h[l];
    cache.c_prev = state.c[l];
    cell_forward(w, b, in, h, cache);
    state.c[l] = cache.c;
    state.h[l] = cache.o.cwiseProduct(cache.tc);
    cache.x = state.h[l];
  }
  ConstMat out_w(params_.data() + layout_.out_weights, v, h);
  ConstVec out_b(params_.data() + layout_.out_bias, v);
  VectorXd probs = softmax(out_w * state.h.back() + out_b);
  if (!probs.allFinite() || !state.h.back().allFinite() || !state.c.back().allFinite()) {
    throw Error(ErrorCode::kNumericFailure, "LSTM state became non-finite");
  }
  return probs;
}

double LstmModel::window_loss(std::span<const WordId> inputs, std::span<const WordId> targets, const State& initial,
                              Eigen::VectorXd* grad, State* final) const {
  if (inputs.size() != targets.size() || inputs.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "window inputs and targets must be nonempty and of equal length");
  }
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  const auto h = static_cast<Eigen::Index>(config_.hidden);
  const auto e = static_cast<Eigen::Index>(embed_dim());
  const std::size_t steps = inputs.size();
  const std::size_t layers = config_.layers;
  const double scale = 1.0 / static_cast<double>(steps);

  ConstMat emb(params_.data() + layout_.embedding, e, v);
  ConstMat out_w(params_.data() + layout_.out_weights, v, h);
  ConstVec out_b(params_.data() + layout_.out_bias, v);

  std::vector<std::vector<LayerCache>> caches(steps, std::vector<LayerCache>(layers));
  std::vector<VectorXd> probs(steps);
  State state = initial;
  double loss = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const WordId word = inputs[t] < vocab_.size() ? inputs[t] : Vocabulary::kUnk;
    VectorXd x = emb.col(word);
    for (std::size_t l = 0; l < layers; ++l) {
      const auto in = static_cast<Eigen::Index>(layer_input(l));
      ConstMat w(params_.data() + layout_.weights[l], 4 * h, in + h);
      ConstVec b(params_.data() + layout_.biases[l], 4 * h);
      auto& cache = caches[t][l];
      cache.x = std::move(x);
      cache.h_prev = state.h[l];
      cache.c_prev = state.c[l];
      cell_forward(w, b, in, h, cache);
      state.c[l] = cache.c;
      state.h[l] = cache.o.cwiseProduct(cache.tc);
      x = state.h[l];
    }
    probs[t] = softmax(out_w * state.h.back() + out_b);
    const auto target = targets[t] < vocab_.size() ? targets[t] : Vocabulary::kUnk;
    loss -= std::log(probs[t][target]);
  }
  loss *= scale;
  if (final != nullptr) *final = state;
  if (grad == nullptr) return loss;

  grad->setZero(params_.size());
  Mat d_emb(grad->data() + layout_.embedding, e, v);
  Mat d_out_w(grad->data() + layout_.out_weights, v, h);
  Vec d_out_b(grad->data() + layout_.out_bias, v);
  std::vector<VectorXd> dh_next(layers, VectorXd::Zero(h));
  std::vector<VectorXd> dc_next(layers, VectorXd::Zero(h));

  for (std::size_t t = steps; t-- > 0;) {
    VectorXd d_logits = probs[t] * scale;
    const auto target = targets[t] < vocab_.size() ? targets[t] : Vocabulary::kUnk;
    d_logits[target] -= scale;
    const VectorXd h_top = caches[t][layers - 1].o.cwiseProduct(caches[t][layers - 1].tc);
    d_out_w.noalias() += d_logits * h_top.transpose();
    d_out_b += d_logits;
    VectorXd dh = out_w.transpose() * d_logits;

    for (std::size_t l = layers; l-- > 0;) {
      const auto in = static_cast<Eigen::Index>(layer_input(l));
      ConstMat w(params_.data() + layout_.weights[l], 4 * h, in + h);
      Mat dw(grad->data() + layout_.weights[l], 4 * h, in + h);
      Vec db(grad->data() + layout_.biases[l], 4 * h);
      const auto& k = caches[t][l];

      const VectorXd dh_total = dh + dh_next[l];
      const VectorXd d_o = dh_total.cwiseProduct(k.tc);
      const VectorXd dc =
          dh_total.cwiseProduct(k.o).cwiseProduct((1.0 - k.tc.array().square()).matrix()) + dc_next[l];
      dc_next[l] = dc.cwiseProduct(k.f);

      VectorXd dz(4 * h);
      dz.segment(0, h) = dc.cwiseProduct(k.g).cwiseProduct(k.i.cwiseProduct((1.0 - k.i.array()).matrix()));
      dz.segment(h, h) = dc.cwiseProduct(k.c_prev).cwiseProduct(k.f.cwiseProduct((1.0 - k.f.array()).matrix()));
      dz.segment(2 * h, h) = dc.cwiseProduct(k.i).cwiseProduct((1.0 - k.g.array().square()).matrix());
      dz.segment(3 * h, h) = d_o.cwiseProduct(k.o.cwiseProduct((1.0 - k.o.array()).matrix()));

      dw.leftCols(in).noalias() += dz * k.x.transpose();
      dw.rightCols(h).noalias() += dz * k.h_prev.transpose();
      db += dz;
      dh_next[l] = w.rightCols(h).transpose() * dz;
      dh = w.leftCols(in).transpose() * dz;
    }
    const WordId word = inputs[t] < vocab_.size() ? inputs[t] : Vocabulary::kUnk;
    d_emb.col(word) += dh;
  }
  return loss;
}

LstmTrainReport LstmModel::train(std::span<const WordId> stream, const LstmTrainOptions& options) {
  if (options.unroll == 0) throw Error(ErrorCode::kInvalidParameter, "unroll length must be at least 1");
  if (stream.size() <= options.unroll) {
    throw Error(ErrorCode::kInvalidInput, "training stream must be longer than the unroll length");
  }
  LstmTrainReport report;
  VectorXd grad(params_.size());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    State state = zero_state();
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t start = 0; start + 1 < stream.size(); start += options.unroll) {
      const std::size_t len = std::min(options.unroll, stream.size() - 1 - start);
      State next;
      const double loss =
          window_loss(stream.subspan(start, len), stream.subspan(start + 1, len), state, &grad, &next);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw Error(ErrorCode::kNumericFailure, "training diverged in epoch " + std::to_string(epoch + 1) +
                                                    " at token " + std::to_string(start));
      }
      total += loss * static_cast<double>(len);
      count += len;
      const double norm = grad.norm();
      if (options.clip_norm > 0.0 && norm > options.clip_norm) grad *= options.clip_norm / norm;
      params_ -= options.learning_rate * grad;
      state = std::move(next);
    }
    report.perplexity.push_back(std::exp(total / static_cast<double>(count)));
  }
  return report;
}

std::unique_ptr<ModelSession> LstmModel::new_session() const { return std::make_unique<LstmSession>(*this); }

void LstmModel::save(std::ostream& out) const {
  out << "layers\t" << config_.layers << '\n';
  out << "hidden\t" << config_.hidden << '\n';
  out << "embed\t" << embed_dim() << '\n';
  out << "unroll\t" << config_.unroll << '\n';
  out << "seed\t" << config_.seed << '\n';
  out << "params\t" << params_.size() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < params_.size(); ++i) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, params_[i]);
    out.write(buf, end - buf);
    out << '\n';
  }
}

LstmModel LstmModel::load(std::istream& in, Vocabulary vocab) {
  const auto fail = [](const std::string& what) { return Error(ErrorCode::kInvalidInput, "LSTM model: " + what); };
  LstmConfig config;
  std::string key;
  std::size_t count = 0;
  if (!(in >> key >> config.layers) || key != "layers") throw fail("missing layers");
  if (!(in >> key >> config.hidden) || key != "hidden") throw fail("missing hidden");
  if (!(in >> key >> config.embed) || key != "embed") throw fail("missing embed");
  if (!(in >> key >> config.unroll) || key != "unroll") throw fail("missing unroll");
  if (!(in >> key >> config.seed) || key != "seed") throw fail("missing seed");
  if (!(in >> key >> count) || key != "params") throw fail("missing parameter count");
  LstmModel model(std::move(vocab), config);
  if (count != static_cast<std::size_t>(model.params_.size())) throw fail("parameter count does not match shapes");
  std::string token;
  for (Eigen::Index i = 0; i < model.params_.size(); ++i) {
    if (!(in >> token)) throw fail("truncated parameters");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) throw fail("bad parameter value");
    model.params_[i] = value;
  }
  return model;
}

}  // namespace pir
