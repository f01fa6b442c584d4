#include "ties/rbo.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ties {

RboResult rbo(const std::vector<PersonId>& pred, const std::vector<PersonId>& truth,
              const RboParams& params) {
  if (!(params.p > 0.0 && params.p < 1.0)) {
    throw std::invalid_argument("rbo: persistence must lie in (0, 1)");
  }
  const std::size_t depth = std::max(pred.size(), truth.size());
  if (depth == 0) return {0.0, true};

  std::unordered_set<PersonId> pred_seen;
  std::unordered_set<PersonId> truth_seen;
  pred_seen.reserve(pred.size());
  truth_seen.reserve(truth.size());

  double sum = 0.0;
  double weight = 1.0;  // p^(d-1)
  std::size_t overlap = 0;
  for (std::size_t d = 1; d <= depth; ++d) {
    const bool has_pred = d <= pred.size();
    const bool has_truth = d <= truth.size();
    if (has_pred && has_truth && pred[d - 1] == truth[d - 1]) {
      ++overlap;
      pred_seen.insert(pred[d - 1]);
      truth_seen.insert(truth[d - 1]);
    } else {
      if (has_pred) {
        if (truth_seen.count(pred[d - 1]) != 0) ++overlap;
        pred_seen.insert(pred[d - 1]);
      }
      if (has_truth) {
        if (pred_seen.count(truth[d - 1]) != 0) ++overlap;
        truth_seen.insert(truth[d - 1]);
      }
    }
    sum += weight * static_cast<double>(overlap) / static_cast<double>(d);
    weight *= params.p;
  }
  return {(1.0 - params.p) * sum, false};
}

std::optional<double> weighted_ego_score(const std::vector<ScoredPair>& pairs,
                                         const RboParams& params) {
  double weighted_sum = 0.0;
  double total_weight = 0.0;
  for (const ScoredPair& pair : pairs) {
    const double w = static_cast<double>(pair.truth.size());
    if (w == 0.0) continue;
    weighted_sum += w * rbo(pair.pred, pair.truth, params).value;
    total_weight += w;
  }
  if (total_weight == 0.0) return std::nullopt;
  return weighted_sum / total_weight;
}

}  // namespace ties
