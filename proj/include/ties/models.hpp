#pragma once
// Trainable pairwise comparators and the common ranking-model interface
// used by the evaluation harness: six training-free baselines, the
// bagged-tree ensemble on difference features, and the recurrent
// network on stacked series. Training examples come from survey-derived
// top-k rankings.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ties/baselines.hpp"
#include "ties/forest.hpp"
#include "ties/pairwise.hpp"
#include "ties/recurrent.hpp"
#include "ties/survey.hpp"

namespace ties {

struct TrainingExample {
  PersonId ego;
  PersonId first;
  PersonId second;
  Timestamp time = 0;  // survey time; features read strictly before it
  int label = 1;       // 1 when first is ranked strictly above second
};

struct TrainingPairs {
  std::vector<TrainingExample> examples;
  std::size_t skipped_pairs = 0;  // unordered pairs lacking history on either side
};

// Every ordered pair (a above b) of each ranking yields the two
// orientations (a,b,1) and (b,a,0), so label classes are balanced by
// construction. Pairs where either alter has no communication with the
// ego before the survey are skipped and counted.
TrainingPairs generate_training_pairs(const std::vector<TieRanking>& rankings,
                                      const StoreView& store);

// Seeded subsample without replacement; identity when cap >= size.
// Bounds training cost while keeping runs reproducible.
std::vector<TrainingExample> subsample_examples(std::vector<TrainingExample> examples,
                                                std::size_t cap, std::uint64_t seed);

// Throws ModelError if any example belongs to an excluded ego. The
// evaluation harness never generates such examples; this is the
// explicit guard.
void assert_ego_disjoint(const std::vector<TrainingExample>& examples,
                         const std::vector<PersonId>& excluded_egos);

ForestTrainData forest_training_data(const std::vector<TrainingExample>& examples,
                                     const StoreView& store);
StackedSeries example_series(const StoreView& store, const TrainingExample& example);

// Any baseline score as a pairwise comparator: 1, 1/2, or 0 by score
// comparison, with a missing score ranking below any present one. The
// random kind draws a per-(ego, alter, time) score from the seed so its
// induced order is a consistent random permutation at each time.
class ScoreComparator : public PairwiseComparator {
 public:
  explicit ScoreComparator(BaselineKind kind, std::uint64_t seed = 0);
  double compare(const StoreView& store, const PersonId& ego, const PersonId& a,
                 const PersonId& b, Timestamp t) const override;

 private:
  BaselineKind kind_;
  std::uint64_t seed_;
};

class ForestComparator : public PairwiseComparator {
 public:
  explicit ForestComparator(ForestModel model) : model_(std::move(model)) {}
  double compare(const StoreView& store, const PersonId& ego, const PersonId& a,
                 const PersonId& b, Timestamp t) const override;
  const ForestModel& model() const { return model_; }

 private:
  ForestModel model_;
};

class RecurrentComparator : public PairwiseComparator {
 public:
  explicit RecurrentComparator(RecurrentNet net) : net_(std::move(net)) {}
  double compare(const StoreView& store, const PersonId& ego, const PersonId& a,
                 const PersonId& b, Timestamp t) const override;
  const RecurrentNet& net() const { return net_; }

 private:
  RecurrentNet net_;
};

// Spec'd entry points that train from examples straight off the store.
ForestTrainResult train_forest_model(const std::vector<TrainingExample>& examples,
                                     const StoreView& store, const ForestConfig& config,
                                     std::uint64_t seed);
RecurrentTrainResult train_recurrent_model(const std::vector<TrainingExample>& examples,
                                           const StoreView& store, const RecurrentConfig& config,
                                           std::uint64_t seed);

// A model the cross-validation harness can drive. Baselines ignore
// fit(); trainable models must reset on every fit call. predict must
// depend only on the passed view, arguments, and fitted state, never on
// wall-clock or global state, so rankings are reproducible.
class RankingModel {
 public:
  virtual ~RankingModel() = default;
  virtual std::string name() const = 0;
  virtual bool trainable() const { return false; }
  virtual void fit(const StoreView& train_view, const std::vector<TieRanking>& train_truths,
                   std::uint64_t seed);
  virtual TieRanking predict(const StoreView& view, const PersonId& ego, Timestamp t,
                             std::uint64_t seed) const = 0;
};

struct MlOptions {
  ForestConfig forest;
  RecurrentConfig recurrent;
  // Cap on training examples per fit (seeded subsample), bounding the
  // cost of repeated refits inside cross-validation.
  std::size_t max_training_examples = 2500;
};

std::unique_ptr<RankingModel> make_baseline_model(BaselineKind kind);
std::unique_ptr<RankingModel> make_ensemble_model(const MlOptions& options);
std::unique_ptr<RankingModel> make_lstm_model(const MlOptions& options);

// The eight models of the headline comparison, weakest first: random,
// overlap, duration, recency, frequency, volume, ensemble, lstm.
std::vector<std::unique_ptr<RankingModel>> standard_models(const MlOptions& options);

// Answer-key model for harness upper-bound checks: returns the stored
// ranking for (ego, time), empty if absent.
std::unique_ptr<RankingModel> make_oracle_model(std::vector<TieRanking> truths);

}  // namespace ties
