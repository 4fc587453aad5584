#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pir/lm.hpp"

namespace pir {

struct LstmConfig {
  std::size_t layers = 2;
  std::size_t hidden = 64;
  std::size_t embed = 0;  // 0 means "same as hidden"
  std::size_t unroll = 35;
  double init_scale = 0.08;
  std::uint64_t seed = 1;
};

struct LstmTrainOptions {
  std::size_t epochs = 1;
  double learning_rate = 1.0;
  std::size_t unroll = 35;
  double clip_norm = 5.0;
};

struct LstmTrainReport {
  std::vector<double> perplexity;  // one entry per epoch
};

// Word-level multi-layer LSTM language model. All parameters live in one flat
// vector; matrices are column-major views into it. Layout, in order:
//   embedding            E x V        (column per word)
//   per layer l:  W_l    4H x (in_l + H), gate rows ordered input, forget,
//                                       candidate, output
//                 b_l    4H
//   output projection    V x H
//   output bias          V
class LstmModel final : public NextWordModel {
 public:
  struct State {
    std::vector<Eigen::VectorXd> h;
    std::vector<Eigen::VectorXd> c;
  };

  // Parameters drawn uniformly from [-init_scale, init_scale] under config.seed.
  LstmModel(Vocabulary vocab, LstmConfig config);

  std::string_view kind() const override { return "lstm"; }
  const Vocabulary& vocab() const override { return vocab_; }
  std::unique_ptr<ModelSession> new_session() const override;
  void save(std::ostream& out) const override;
  static LstmModel load(std::istream& in, Vocabulary vocab);

  const LstmConfig& config() const { return config_; }
  std::size_t embed_dim() const { return config_.embed == 0 ? config_.hidden : config_.embed; }

  Eigen::VectorXd& parameters() { return params_; }
  const Eigen::VectorXd& parameters() const { return params_; }

  State zero_state() const;
  // One step of the cell equations followed by the softmax output layer.
  // Throws kNumericFailure if the state or output becomes non-finite.
  Eigen::VectorXd step(State& state, WordId word) const;

  // Mean cross-entropy of predicting targets[t] after inputs[0..t], starting
  // from `initial`. When `grad` is non-null it receives d(loss)/d(parameters)
  // by backpropagation through the window; `final`, when non-null, receives
  // the state after the last input.
  double window_loss(std::span<const WordId> inputs, std::span<const WordId> targets, const State& initial,
                     Eigen::VectorXd* grad = nullptr, State* final = nullptr) const;

  // Truncated BPTT with plain SGD and global-norm gradient clipping. The
  // hidden state is carried across windows within an epoch and reset at the
  // start of every epoch. Throws kInvalidInput if the stream is not longer
  // than the unroll length, kNumericFailure if the loss diverges.
  LstmTrainReport train(std::span<const WordId> stream, const LstmTrainOptions& options);

 private:
  struct Layout {
    std::size_t embedding = 0;
    std::vector<std::size_t> weights;
    std::vector<std::size_t> biases;
    std::size_t out_weights = 0;
    std::size_t out_bias = 0;
    std::size_t total = 0;
  };

  Layout make_layout() const;
  std::size_t layer_input(std::size_t layer) const { return layer == 0 ? embed_dim() : config_.hidden; }

  Vocabulary vocab_;
  LstmConfig config_;
  Layout layout_;
  Eigen::VectorXd params_;
};

}  // namespace pir
