#include "ties/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "ties/core.hpp"
#include "ties/parallel.hpp"
#include "ties/rng.hpp"

namespace ties {

namespace {

constexpr int kGateInput = 0;
constexpr int kGateForget = 1;
constexpr int kGateCell = 2;
constexpr int kGateOutput = 3;
constexpr std::size_t kInputWidth = 4;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double clamped_log(double p) {
  constexpr double kEps = 1e-12;
  return std::log(std::min(std::max(p, kEps), 1.0 - kEps));
}

// Activations of every step, kept for backpropagation. All arrays are
// T x H row-major except x, which is the input itself.
struct ForwardTrace {
  std::vector<double> gate_i, gate_f, gate_g, gate_o;
  std::vector<double> cell, tanh_cell, hidden;
  double output = 0.0;  // probability

  void resize(std::size_t steps, std::size_t h) {
    const std::size_t n = steps * h;
    gate_i.assign(n, 0.0);
    gate_f.assign(n, 0.0);
    gate_g.assign(n, 0.0);
    gate_o.assign(n, 0.0);
    cell.assign(n, 0.0);
    tanh_cell.assign(n, 0.0);
    hidden.assign(n, 0.0);
  }
};

void run_forward(const RecurrentNet& net, const StackedSeries& series, ForwardTrace* trace,
                 std::vector<double>& h_last) {
  const std::size_t h = static_cast<std::size_t>(net.hidden);
  const std::size_t steps = series.size();
  const double* params = net.params.data();
  const double* w[4] = {params + net.w_offset(0), params + net.w_offset(1),
                        params + net.w_offset(2), params + net.w_offset(3)};
  const double* u[4] = {params + net.u_offset(0), params + net.u_offset(1),
                        params + net.u_offset(2), params + net.u_offset(3)};
  const double* b[4] = {params + net.b_offset(0), params + net.b_offset(1),
                        params + net.b_offset(2), params + net.b_offset(3)};

  if (trace != nullptr) trace->resize(steps, h);
  std::vector<double> h_prev(h, 0.0);
  std::vector<double> c_prev(h, 0.0);
  std::vector<double> acts(4 * h);

  for (std::size_t t = 0; t < steps; ++t) {
    const auto& x = series.steps[t];
    for (int gate = 0; gate < 4; ++gate) {
      double* a = acts.data() + static_cast<std::size_t>(gate) * h;
      const double* wg = w[gate];
      const double* ug = u[gate];
      const double* bg = b[gate];
      for (std::size_t r = 0; r < h; ++r) {
        const double* wrow = wg + r * kInputWidth;
        double sum = bg[r] + wrow[0] * x[0] + wrow[1] * x[1] + wrow[2] * x[2] + wrow[3] * x[3];
        const double* urow = ug + r * h;
        for (std::size_t k = 0; k < h; ++k) sum += urow[k] * h_prev[k];
        a[r] = sum;
      }
    }
    for (std::size_t r = 0; r < h; ++r) {
      const double gi = sigmoid(acts[kGateInput * h + r]);
      const double gf = sigmoid(acts[kGateForget * h + r]);
      const double gg = std::tanh(acts[kGateCell * h + r]);
      const double go = sigmoid(acts[kGateOutput * h + r]);
      const double c = gf * c_prev[r] + gi * gg;
      const double tc = std::tanh(c);
      const double hv = go * tc;
      if (trace != nullptr) {
        const std::size_t at = t * h + r;
        trace->gate_i[at] = gi;
        trace->gate_f[at] = gf;
        trace->gate_g[at] = gg;
        trace->gate_o[at] = go;
        trace->cell[at] = c;
        trace->tanh_cell[at] = tc;
        trace->hidden[at] = hv;
      }
      c_prev[r] = c;
      h_prev[r] = hv;
    }
  }
  h_last = std::move(h_prev);
}

double readout(const RecurrentNet& net, const std::vector<double>& h_last) {
  const std::size_t h = static_cast<std::size_t>(net.hidden);
  const double* wo = net.params.data() + net.out_w_offset();
  double z = net.params[net.out_b_offset()];
  for (std::size_t r = 0; r < h; ++r) z += wo[r] * h_last[r];
  return sigmoid(z);
}

}  // namespace

std::size_t RecurrentNet::param_count(int hidden) {
  const std::size_t h = static_cast<std::size_t>(hidden);
  return 4 * (kInputWidth * h + h * h + h) + h + 1;
}

std::size_t RecurrentNet::gate_block() const {
  const std::size_t h = static_cast<std::size_t>(hidden);
  return kInputWidth * h + h * h + h;
}

std::size_t RecurrentNet::w_offset(int gate) const {
  return static_cast<std::size_t>(gate) * gate_block();
}

std::size_t RecurrentNet::u_offset(int gate) const {
  return w_offset(gate) + kInputWidth * static_cast<std::size_t>(hidden);
}

std::size_t RecurrentNet::b_offset(int gate) const {
  const std::size_t h = static_cast<std::size_t>(hidden);
  return u_offset(gate) + h * h;
}

std::size_t RecurrentNet::out_w_offset() const { return 4 * gate_block(); }

std::size_t RecurrentNet::out_b_offset() const {
  return out_w_offset() + static_cast<std::size_t>(hidden);
}

double RecurrentNet::forward(const StackedSeries& series) const {
  std::vector<double> h_last;
  run_forward(*this, series, nullptr, h_last);
  return readout(*this, h_last);
}

RecurrentNet init_recurrent(const RecurrentConfig& config, std::uint64_t seed) {
  if (config.hidden <= 0) throw ModelError("init_recurrent: hidden width must be positive");
  RecurrentNet net;
  net.hidden = config.hidden;
  net.params.resize(RecurrentNet::param_count(config.hidden));
  Rng rng(derive_seed(seed, "recurrent-init"));
  for (double& p : net.params) p = rng.uniform(-config.init_range, config.init_range);
  // Positive forget bias keeps early memory open, the usual LSTM trick.
  double* bf = net.params.data() + net.b_offset(kGateForget);
  for (int r = 0; r < net.hidden; ++r) bf[r] += config.forget_bias;
  return net;
}

double recurrent_loss(const RecurrentNet& net, const StackedSeries& series, int label) {
  const double p = net.forward(series);
  return label == 1 ? -clamped_log(p) : -clamped_log(1.0 - p);
}

void recurrent_gradient(const RecurrentNet& net, const StackedSeries& series, int label,
                        std::vector<double>& grad) {
  const std::size_t h = static_cast<std::size_t>(net.hidden);
  if (grad.size() != net.params.size()) {
    throw ModelError("recurrent_gradient: gradient buffer size mismatch");
  }
  ForwardTrace trace;
  std::vector<double> h_last;
  run_forward(net, series, &trace, h_last);
  const double p = readout(net, h_last);
  const double dz = p - static_cast<double>(label);  // dL/dz for BCE + logistic

  double* g_out_w = grad.data() + net.out_w_offset();
  for (std::size_t r = 0; r < h; ++r) g_out_w[r] += dz * h_last[r];
  grad[net.out_b_offset()] += dz;

  const std::size_t steps = series.size();
  if (steps == 0) return;

  const double* params = net.params.data();
  const double* u[4] = {params + net.u_offset(0), params + net.u_offset(1),
                        params + net.u_offset(2), params + net.u_offset(3)};
  const double* out_w = params + net.out_w_offset();

  std::vector<double> dh(h);
  std::vector<double> dc(h, 0.0);
  std::vector<double> da(4 * h);
  std::vector<double> dh_prev(h);
  for (std::size_t r = 0; r < h; ++r) dh[r] = dz * out_w[r];

  for (std::size_t t = steps; t-- > 0;) {
    const std::size_t base = t * h;
    const auto& x = series.steps[t];
    const double* h_prev = t == 0 ? nullptr : trace.hidden.data() + (t - 1) * h;
    const double* c_prev = t == 0 ? nullptr : trace.cell.data() + (t - 1) * h;

    for (std::size_t r = 0; r < h; ++r) {
      const double gi = trace.gate_i[base + r];
      const double gf = trace.gate_f[base + r];
      const double gg = trace.gate_g[base + r];
      const double go = trace.gate_o[base + r];
      const double tc = trace.tanh_cell[base + r];

      const double dct = dc[r] + dh[r] * go * (1.0 - tc * tc);
      const double d_go = dh[r] * tc;
      const double cp = t == 0 ? 0.0 : c_prev[r];

      da[kGateInput * h + r] = dct * gg * gi * (1.0 - gi);
      da[kGateForget * h + r] = dct * cp * gf * (1.0 - gf);
      da[kGateCell * h + r] = dct * gi * (1.0 - gg * gg);
      da[kGateOutput * h + r] = d_go * go * (1.0 - go);
      dc[r] = dct * gf;  // carried to step t-1
    }

    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    for (int gate = 0; gate < 4; ++gate) {
      const double* dag = da.data() + static_cast<std::size_t>(gate) * h;
      double* gw = grad.data() + net.w_offset(gate);
      double* gu = grad.data() + net.u_offset(gate);
      double* gb = grad.data() + net.b_offset(gate);
      const double* ug = u[gate];
      for (std::size_t r = 0; r < h; ++r) {
        const double d = dag[r];
        double* gwrow = gw + r * kInputWidth;
        gwrow[0] += d * x[0];
        gwrow[1] += d * x[1];
        gwrow[2] += d * x[2];
        gwrow[3] += d * x[3];
        gb[r] += d;
        if (t > 0) {
          double* gurow = gu + r * h;
          const double* urow = ug + r * h;
          for (std::size_t k = 0; k < h; ++k) {
            gurow[k] += d * h_prev[k];
            dh_prev[k] += urow[k] * d;
          }
        }
      }
    }
    dh.swap(dh_prev);
  }
}

RecurrentTrainResult train_recurrent(const std::vector<StackedSeries>& inputs,
                                     const std::vector<int>& labels,
                                     const RecurrentConfig& config, std::uint64_t seed) {
  const std::size_t n = inputs.size();
  if (n == 0) throw ModelError("train_recurrent: empty training set");
  if (labels.size() != n) throw ModelError("train_recurrent: input/label size mismatch");
  for (int label : labels) {
    if (label != 0 && label != 1) throw ModelError("train_recurrent: labels must be 0 or 1");
  }
  if (config.epochs < 0 || config.batch_size <= 0 || config.learning_rate <= 0.0) {
    throw ModelError("train_recurrent: invalid training config");
  }

  RecurrentTrainResult result;
  result.net = init_recurrent(config, seed);
  RecurrentNet& net = result.net;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<std::vector<double>> slot_grad(std::min(batch, n));
  std::vector<double> slot_loss(slot_grad.size());
  for (auto& g : slot_grad) g.assign(net.params.size(), 0.0);
  std::vector<double> grad(net.params.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(seed, "epoch", static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double epoch_loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t count = std::min(batch, n - start);
      parallel::parallel_for(count, [&](std::size_t s) {
        const std::size_t idx = order[start + s];
        std::fill(slot_grad[s].begin(), slot_grad[s].end(), 0.0);
        recurrent_gradient(net, inputs[idx], labels[idx], slot_grad[s]);
        slot_loss[s] = recurrent_loss(net, inputs[idx], labels[idx]);
      });

      // Ordered reduction keeps the sum bit-identical across thread counts.
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t s = 0; s < count; ++s) {
        const std::vector<double>& g = slot_grad[s];
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += g[k];
        epoch_loss_sum += slot_loss[s];
      }
      const double scale = 1.0 / static_cast<double>(count);
      double norm_sq = 0.0;
      for (double& g : grad) {
        g *= scale;
        norm_sq += g * g;
      }
      double step = config.learning_rate;
      if (config.clip_norm > 0.0) {
        const double norm = std::sqrt(norm_sq);
        if (norm > config.clip_norm) step *= config.clip_norm / norm;
      }
      for (std::size_t k = 0; k < net.params.size(); ++k) net.params[k] -= step * grad[k];
    }
    const double epoch_loss = epoch_loss_sum / static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) {
      throw ModelError("train_recurrent: loss diverged at epoch " +
                       std::to_string(epoch) + " (mean loss " +
                       std::to_string(epoch_loss) + ", lr " +
                       std::to_string(config.learning_rate) + ", clip " +
                       std::to_string(config.clip_norm) + ")");
    }
    result.epoch_loss.push_back(epoch_loss);
  }
  return result;
}

}  // namespace ties
