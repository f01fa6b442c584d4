#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ties/parallel.hpp"
#include "ties/recurrent.hpp"
#include "ties/rng.hpp"

using namespace ties;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

StackedSeries make_series(const std::vector<std::array<double, 4>>& steps) {
  StackedSeries s;
  s.end = 1;
  s.steps = steps;
  return s;
}

RecurrentNet random_net(int hidden, std::uint64_t seed, double range) {
  RecurrentNet net;
  net.hidden = hidden;
  net.params.resize(RecurrentNet::param_count(hidden));
  Rng rng(seed);
  for (double& p : net.params) p = rng.uniform(-range, range);
  return net;
}

StackedSeries random_series(Rng& rng, std::size_t steps) {
  StackedSeries s;
  s.end = 1;
  for (std::size_t t = 0; t < steps; ++t) {
    s.steps.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)});
  }
  return s;
}

// Sum of channel 0 decides the label; learnable from the first W column.
void channel_sum_task(std::uint64_t seed, std::size_t count, std::vector<StackedSeries>* inputs,
                      std::vector<int>* labels) {
  Rng rng(seed);
  while (inputs->size() < count) {
    StackedSeries s = random_series(rng, 3);
    double sum = 0.0;
    for (const auto& x : s.steps) sum += x[0];
    if (std::abs(sum) < 0.3) continue;
    inputs->push_back(s);
    labels->push_back(sum > 0.0 ? 1 : 0);
  }
}

}  // namespace

TEST_CASE("parameter layout is dense and ordered") {
  for (int h : {1, 2, 4, 32}) {
    const std::size_t hs = static_cast<std::size_t>(h);
    CHECK(RecurrentNet::param_count(h) == 4 * (4 * hs + hs * hs + hs) + hs + 1);

    RecurrentNet net;
    net.hidden = h;
    CHECK(net.gate_block() == 4 * hs + hs * hs + hs);
    for (int gate = 0; gate < 4; ++gate) {
      CHECK(net.w_offset(gate) == static_cast<std::size_t>(gate) * net.gate_block());
      CHECK(net.u_offset(gate) == net.w_offset(gate) + 4 * hs);
      CHECK(net.b_offset(gate) == net.u_offset(gate) + hs * hs);
    }
    CHECK(net.out_w_offset() == 4 * net.gate_block());
    CHECK(net.out_b_offset() == net.out_w_offset() + hs);
    CHECK(net.out_b_offset() + 1 == RecurrentNet::param_count(h));
  }
}

TEST_CASE("initialization is bounded, seeded, and opens the forget gate") {
  RecurrentConfig config;
  config.hidden = 6;
  config.init_range = 0.1;
  config.forget_bias = 1.0;
  const RecurrentNet net = init_recurrent(config, 42);
  CHECK(net.hidden == 6);
  REQUIRE(net.params.size() == RecurrentNet::param_count(6));

  const std::size_t fb = net.b_offset(1);
  for (std::size_t i = 0; i < net.params.size(); ++i) {
    if (i >= fb && i < fb + 6) {
      CHECK(net.params[i] >= 0.9);
      CHECK(net.params[i] <= 1.1);
    } else {
      CHECK(std::abs(net.params[i]) <= 0.1);
    }
  }

  const RecurrentNet again = init_recurrent(config, 42);
  CHECK(net.params == again.params);
  CHECK(init_recurrent(config, 43).params != net.params);

  config.hidden = 0;
  CHECK_THROWS_AS(init_recurrent(config, 1), ModelError);
}

TEST_CASE("forward matches a hand-unrolled two-step network") {
  const int H = 2;
  const RecurrentNet net = random_net(H, 314, 0.8);
  const StackedSeries series =
      make_series({{0.3, -0.7, 1.2, 0.5}, {-0.2, 0.9, -1.1, 0.4}});

  // Independent unroll with explicit state vectors.
  std::vector<double> hs(H, 0.0), cs(H, 0.0);
  for (const auto& x : series.steps) {
    std::vector<double> acts(4 * H);
    for (int gate = 0; gate < 4; ++gate) {
      for (int r = 0; r < H; ++r) {
        double z = net.params[net.b_offset(gate) + static_cast<std::size_t>(r)];
        for (int k = 0; k < 4; ++k) {
          z += net.params[net.w_offset(gate) + static_cast<std::size_t>(r * 4 + k)] * x[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k < H; ++k) {
          z += net.params[net.u_offset(gate) + static_cast<std::size_t>(r * H + k)] * hs[static_cast<std::size_t>(k)];
        }
        acts[static_cast<std::size_t>(gate * H + r)] = z;
      }
    }
    for (int r = 0; r < H; ++r) {
      const double gi = sigmoid(acts[static_cast<std::size_t>(0 * H + r)]);
      const double gf = sigmoid(acts[static_cast<std::size_t>(1 * H + r)]);
      const double gg = std::tanh(acts[static_cast<std::size_t>(2 * H + r)]);
      const double go = sigmoid(acts[static_cast<std::size_t>(3 * H + r)]);
      cs[static_cast<std::size_t>(r)] = gf * cs[static_cast<std::size_t>(r)] + gi * gg;
      hs[static_cast<std::size_t>(r)] = go * std::tanh(cs[static_cast<std::size_t>(r)]);
    }
  }
  double z = net.params[net.out_b_offset()];
  for (int r = 0; r < H; ++r) z += net.params[net.out_w_offset() + static_cast<std::size_t>(r)] * hs[static_cast<std::size_t>(r)];
  const double expected = sigmoid(z);

  CHECK(net.forward(series) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("an empty series reads out the bias") {
  const RecurrentNet net = random_net(5, 88, 0.4);
  StackedSeries empty;
  empty.end = 9;
  CHECK(net.forward(empty) == sigmoid(net.params[net.out_b_offset()]));
}

TEST_CASE("zero-bias networks ignore zero padding") {
  RecurrentNet net = random_net(4, 21, 0.6);
  for (int gate = 0; gate < 4; ++gate) {
    for (std::size_t r = 0; r < 4; ++r) net.params[net.b_offset(gate) + r] = 0.0;
  }
  Rng rng(5);
  const StackedSeries base = random_series(rng, 4);
  StackedSeries padded;
  padded.end = base.end;
  padded.steps.assign(3, {0.0, 0.0, 0.0, 0.0});
  padded.steps.insert(padded.steps.end(), base.steps.begin(), base.steps.end());
  // Zero inputs with zero biases leave both states at exactly zero.
  CHECK(net.forward(padded) == net.forward(base));
}

TEST_CASE("loss is the binary cross-entropy of the forward pass") {
  const RecurrentNet net = random_net(3, 77, 0.5);
  Rng rng(8);
  const StackedSeries s = random_series(rng, 3);
  const double p = net.forward(s);
  CHECK(recurrent_loss(net, s, 1) == doctest::Approx(-std::log(p)).epsilon(1e-15));
  CHECK(recurrent_loss(net, s, 0) == doctest::Approx(-std::log(1.0 - p)).epsilon(1e-15));
}

TEST_CASE("backpropagation matches central differences") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    RecurrentNet net = random_net(4, 1000 + seed, 0.7);
    Rng rng(seed);
    const StackedSeries series = random_series(rng, 3);
    const int label = seed % 2 == 0 ? 1 : 0;

    std::vector<double> grad(net.params.size(), 0.0);
    recurrent_gradient(net, series, label, grad);

    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t k = 0; k < net.params.size(); ++k) {
      const double saved = net.params[k];
      net.params[k] = saved + h;
      const double up = recurrent_loss(net, series, label);
      net.params[k] = saved - h;
      const double down = recurrent_loss(net, series, label);
      net.params[k] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(grad[k]), std::abs(numeric), 1e-3});
      worst = std::max(worst, std::abs(grad[k] - numeric) / denom);
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("gradient of an empty series touches only the readout") {
  const RecurrentNet net = random_net(4, 9, 0.5);
  StackedSeries empty;
  std::vector<double> grad(net.params.size(), 0.0);
  recurrent_gradient(net, empty, 1, grad);
  const double p = net.forward(empty);
  CHECK(grad[net.out_b_offset()] == p - 1.0);
  for (std::size_t k = 0; k < net.out_w_offset(); ++k) CHECK(grad[k] == 0.0);
  for (std::size_t r = 0; r < 4; ++r) CHECK(grad[net.out_w_offset() + r] == 0.0);  // h_last is zero

  std::vector<double> short_buffer(3);
  CHECK_THROWS_AS(recurrent_gradient(net, empty, 1, short_buffer), ModelError);
}

TEST_CASE("training reduces the loss on a learnable task") {
  std::vector<StackedSeries> inputs;
  std::vector<int> labels;
  channel_sum_task(12, 40, &inputs, &labels);

  RecurrentConfig config;
  config.hidden = 8;
  config.learning_rate = 0.05;
  config.epochs = 15;
  config.batch_size = 8;
  const RecurrentTrainResult result = train_recurrent(inputs, labels, config, 2);
  REQUIRE(result.epoch_loss.size() == 15);
  CHECK(result.epoch_loss.back() < result.epoch_loss.front());
  for (double loss : result.epoch_loss) CHECK(std::isfinite(loss));
}

TEST_CASE("training is deterministic and thread-invariant") {
  std::vector<StackedSeries> inputs;
  std::vector<int> labels;
  channel_sum_task(77, 24, &inputs, &labels);
  RecurrentConfig config;
  config.hidden = 6;
  config.epochs = 4;
  config.batch_size = 8;

  parallel::set_max_threads(1);
  const RecurrentTrainResult serial = train_recurrent(inputs, labels, config, 5);
  parallel::set_max_threads(4);
  const RecurrentTrainResult threaded = train_recurrent(inputs, labels, config, 5);
  parallel::set_max_threads(0);
  CHECK(serial.net.params == threaded.net.params);
  CHECK(serial.epoch_loss == threaded.epoch_loss);

  const RecurrentTrainResult again = train_recurrent(inputs, labels, config, 5);
  CHECK(again.net.params == serial.net.params);
  CHECK(train_recurrent(inputs, labels, config, 6).net.params != serial.net.params);
}

TEST_CASE("invalid training input is a model error") {
  std::vector<StackedSeries> inputs;
  std::vector<int> labels;
  channel_sum_task(3, 6, &inputs, &labels);
  RecurrentConfig config;
  config.hidden = 4;
  config.epochs = 2;

  CHECK_THROWS_AS(train_recurrent({}, {}, config, 1), ModelError);
  std::vector<int> short_labels(labels.begin(), labels.end() - 1);
  CHECK_THROWS_AS(train_recurrent(inputs, short_labels, config, 1), ModelError);
  std::vector<int> bad_labels = labels;
  bad_labels[0] = 7;
  CHECK_THROWS_AS(train_recurrent(inputs, bad_labels, config, 1), ModelError);

  RecurrentConfig bad = config;
  bad.batch_size = 0;
  CHECK_THROWS_AS(train_recurrent(inputs, labels, bad, 1), ModelError);
  bad = config;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train_recurrent(inputs, labels, bad, 1), ModelError);
  bad = config;
  bad.epochs = -1;
  CHECK_THROWS_AS(train_recurrent(inputs, labels, bad, 1), ModelError);
}

TEST_CASE("a non-finite loss surfaces as a model error") {
  // Saturated probabilities are clamped before the log, so even absurd
  // learning rates keep the loss finite; the divergence guard fires once
  // activations stop being numbers at all.
  std::vector<StackedSeries> inputs;
  std::vector<int> labels;
  channel_sum_task(9, 12, &inputs, &labels);
  const double inf = std::numeric_limits<double>::infinity();
  inputs[3].steps[1] = {inf, -inf, inf, -inf};
  RecurrentConfig config;
  config.hidden = 4;
  config.epochs = 2;
  config.batch_size = 4;
  CHECK_THROWS_AS(train_recurrent(inputs, labels, config, 1), ModelError);
}
