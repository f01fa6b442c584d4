#pragma once
// Recurrent pair classifier, implemented from first principles: a
// single-layer LSTM over the stacked 4-channel binned series with a
// logistic readout of the final hidden state. Training is mini-batch
// gradient descent on binary cross-entropy with full backpropagation
// through time and global gradient-norm clipping.
//
// Parameters live in one flat vector. Layout, with H the hidden width
// and gate order (input, forget, cell, output):
//   per gate: W (H x 4, row-major), U (H x H, row-major), b (H)
//   then readout weights w_out (H) and bias b_out (1).

#include <cstdint>
#include <vector>

#include "ties/features.hpp"

namespace ties {

struct RecurrentConfig {
  int hidden = 32;
  double init_range = 0.1;   // weights drawn uniform(-range, +range)
  double forget_bias = 1.0;  // added to the forget-gate bias at init
  double learning_rate = 0.01;
  double clip_norm = 5.0;
  int epochs = 30;
  int batch_size = 32;
};

struct RecurrentNet {
  int hidden = 0;
  std::vector<double> params;

  static std::size_t param_count(int hidden);
  std::size_t gate_block() const;  // parameters per gate
  std::size_t w_offset(int gate) const;
  std::size_t u_offset(int gate) const;
  std::size_t b_offset(int gate) const;
  std::size_t out_w_offset() const;
  std::size_t out_b_offset() const;

  // Probability that the first stacked edge outranks the second. An
  // empty series leaves the hidden state at zero, so the output is the
  // readout bias passed through the logistic.
  double forward(const StackedSeries& series) const;
};

RecurrentNet init_recurrent(const RecurrentConfig& config, std::uint64_t seed);

// Binary cross-entropy of one example.
double recurrent_loss(const RecurrentNet& net, const StackedSeries& series, int label);

// Accumulates d(loss)/d(params) for one example into grad, which must
// already have param_count entries. Exact BPTT, no truncation.
void recurrent_gradient(const RecurrentNet& net, const StackedSeries& series, int label,
                        std::vector<double>& grad);

struct RecurrentTrainResult {
  RecurrentNet net;
  // Mean pre-update example loss per epoch.
  std::vector<double> epoch_loss;
};

// Per-batch example gradients are computed in parallel into per-example
// slots and summed in index order, so results are independent of thread
// count.
RecurrentTrainResult train_recurrent(const std::vector<StackedSeries>& inputs,
                                     const std::vector<int>& labels,
                                     const RecurrentConfig& config, std::uint64_t seed);

}  // namespace ties
