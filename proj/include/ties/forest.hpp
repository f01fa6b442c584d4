#pragma once
// Random forest over the 8 difference features, built from scratch:
// bagged CART trees with Gini impurity splits and probability leaves.
// Each tree draws its own RNG stream from the training seed, so tree
// construction order does not depend on thread count and training is
// bit-reproducible in parallel.

#include <cstdint>
#include <vector>

#include "ties/features.hpp"

namespace ties {

struct ForestConfig {
  int tree_count = 100;
  int max_depth = 12;
  int min_leaf = 2;
  int feature_candidates = 3;  // ceil(sqrt(8)) of the 8 features per split
};

struct TreeNode {
  std::int16_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;  // leaf only: class-1 fraction of its samples
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const FeatureVector& x) const;
};

struct ForestModel {
  ForestConfig config;
  std::vector<DecisionTree> trees;

  // Mean of per-tree leaf probabilities, a value in [0, 1].
  double predict(const FeatureVector& x) const;
};

struct ForestTrainData {
  std::vector<FeatureVector> x;
  std::vector<int> y;  // labels in {0, 1}
};

struct ForestTrainResult {
  ForestModel model;
  // Out-of-bag accuracy: each sample is scored by the trees whose
  // bootstrap missed it, thresholding the mean probability at 1/2.
  double oob_accuracy = 0.0;
  std::size_t oob_scored = 0;  // samples covered by at least one tree
};

ForestTrainResult train_forest(const ForestTrainData& data, const ForestConfig& config,
                               std::uint64_t seed);

}  // namespace ties
