#include "ties/forest.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ties/core.hpp"
#include "ties/parallel.hpp"
#include "ties/rng.hpp"

namespace ties {

namespace {

struct TreeBuilder {
  const ForestTrainData& data;
  const ForestConfig& config;
  Rng& rng;
  std::vector<TreeNode> nodes;

  // Sorted sample indices for one candidate feature, reused per split.
  std::vector<std::size_t> scratch;

  std::int32_t build(std::vector<std::size_t>& samples, int depth) {
    const std::size_t n = samples.size();
    std::size_t positives = 0;
    for (std::size_t i : samples) positives += static_cast<std::size_t>(data.y[i]);

    const std::int32_t id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[id].value = static_cast<double>(positives) / static_cast<double>(n);

    const bool pure = positives == 0 || positives == n;
    if (pure || depth >= config.max_depth ||
        n < 2 * static_cast<std::size_t>(config.min_leaf)) {
      return id;
    }

    const double p1 = nodes[id].value;
    const double parent_gini = 2.0 * p1 * (1.0 - p1);

    // Candidate features sampled without replacement.
    std::array<std::size_t, kFeatureCount> order;
    std::iota(order.begin(), order.end(), 0);
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(config.feature_candidates), kFeatureCount);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(order[i], order[i + rng.below(kFeatureCount - i)]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = parent_gini;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t f = order[c];
      scratch = samples;
      std::sort(scratch.begin(), scratch.end(), [&](std::size_t a, std::size_t b) {
        if (data.x[a][f] != data.x[b][f]) return data.x[a][f] < data.x[b][f];
        return a < b;
      });
      std::size_t left_n = 0;
      std::size_t left_pos = 0;
      for (std::size_t split = 1; split < n; ++split) {
        left_n += 1;
        left_pos += static_cast<std::size_t>(data.y[scratch[split - 1]]);
        const double lo = data.x[scratch[split - 1]][f];
        const double hi = data.x[scratch[split]][f];
        if (lo == hi) continue;  // cannot separate equal values
        if (left_n < static_cast<std::size_t>(config.min_leaf) ||
            n - left_n < static_cast<std::size_t>(config.min_leaf)) {
          continue;
        }
        const std::size_t right_n = n - left_n;
        const std::size_t right_pos = positives - left_pos;
        const double pl = static_cast<double>(left_pos) / static_cast<double>(left_n);
        const double pr = static_cast<double>(right_pos) / static_cast<double>(right_n);
        const double impurity = (static_cast<double>(left_n) * 2.0 * pl * (1.0 - pl) +
                                 static_cast<double>(right_n) * 2.0 * pr * (1.0 - pr)) /
                                static_cast<double>(n);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = lo + (hi - lo) / 2.0;
        }
      }
    }
    if (best_feature < 0) return id;  // no split improves impurity

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : samples) {
      (data.x[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right)
          .push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();

    nodes[id].feature = static_cast<std::int16_t>(best_feature);
    nodes[id].threshold = best_threshold;
    const std::int32_t left_id = build(left, depth + 1);
    nodes[id].left = left_id;
    const std::int32_t right_id = build(right, depth + 1);
    nodes[id].right = right_id;
    return id;
  }
};

}  // namespace

double DecisionTree::predict(const FeatureVector& x) const {
  std::int32_t at = 0;
  while (nodes[at].feature >= 0) {
    const TreeNode& node = nodes[at];
    at = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes[at].value;
}

double ForestModel::predict(const FeatureVector& x) const {
  double sum = 0.0;
  for (const DecisionTree& tree : trees) sum += tree.predict(x);
  return trees.empty() ? 0.5 : sum / static_cast<double>(trees.size());
}

ForestTrainResult train_forest(const ForestTrainData& data, const ForestConfig& config,
                               std::uint64_t seed) {
  const std::size_t n = data.x.size();
  if (n == 0) throw ModelError("train_forest: empty training set");
  if (data.y.size() != n) throw ModelError("train_forest: feature/label size mismatch");
  for (int label : data.y) {
    if (label != 0 && label != 1) throw ModelError("train_forest: labels must be 0 or 1");
  }
  if (config.tree_count <= 0 || config.max_depth <= 0 || config.min_leaf <= 0 ||
      config.feature_candidates <= 0) {
    throw ModelError("train_forest: config values must be positive");
  }

  ForestTrainResult result;
  result.model.config = config;
  result.model.trees.resize(static_cast<std::size_t>(config.tree_count));

  std::vector<std::vector<bool>> in_bag(result.model.trees.size());
  parallel::parallel_for(result.model.trees.size(), [&](std::size_t t) {
    Rng rng(derive_seed(seed, "tree", static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> samples(n);
    in_bag[t].assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick = rng.below(n);
      samples[i] = pick;
      in_bag[t][pick] = true;
    }
    TreeBuilder builder{data, config, rng, {}, {}};
    builder.build(samples, 0);
    result.model.trees[t].nodes = std::move(builder.nodes);
  });

  std::vector<double> oob_sum(n, 0.0);
  std::vector<std::int32_t> oob_count(n, 0);
  for (std::size_t t = 0; t < result.model.trees.size(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (in_bag[t][i]) continue;
      oob_sum[i] += result.model.trees[t].predict(data.x[i]);
      ++oob_count[i];
    }
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (oob_count[i] == 0) continue;
    ++result.oob_scored;
    const int predicted = oob_sum[i] / oob_count[i] >= 0.5 ? 1 : 0;
    correct += static_cast<std::size_t>(predicted == data.y[i]);
  }
  result.oob_accuracy =
      result.oob_scored == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(result.oob_scored);
  return result;
}

}  // namespace ties
