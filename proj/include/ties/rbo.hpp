#pragma once
// Rank-biased overlap between two rankings: the base (non-extrapolated)
// form, evaluated to the longer list's depth,
//   (1 - p) * sum_{d=1..D} p^(d-1) * |pred[:d] ^ truth[:d]| / d.
// Top ranks dominate; at p = 0.9 the first 10 depths carry about two
// thirds of the total weight.

#include <optional>
#include <vector>

#include "ties/core.hpp"

namespace ties {

struct RboParams {
  double p = 0.9;  // persistence, must lie strictly inside (0, 1)
};

struct RboResult {
  double value = 0.0;
  bool both_empty = false;  // score is 0 by convention, flagged
};

RboResult rbo(const std::vector<PersonId>& pred, const std::vector<PersonId>& truth,
              const RboParams& params = {});

// Weight per (prediction, truth) pair for aggregating one ego's surveys.
struct ScoredPair {
  std::vector<PersonId> pred;
  std::vector<PersonId> truth;
};

// Mean RBO over an ego's surveys, each weighted by its truth length so
// longer ground-truth lists count more. Empty input or all-zero weight
// is undefined and reported as missing.
std::optional<double> weighted_ego_score(const std::vector<ScoredPair>& pairs,
                                         const RboParams& params = {});

}  // namespace ties
