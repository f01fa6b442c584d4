#include "ties/models.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "ties/parallel.hpp"
#include "ties/rng.hpp"

namespace ties {

TrainingPairs generate_training_pairs(const std::vector<TieRanking>& rankings,
                                      const StoreView& store) {
  TrainingPairs out;
  for (const TieRanking& ranking : rankings) {
    const std::size_t n = ranking.alters.size();
    std::vector<bool> has_history(n);
    for (std::size_t i = 0; i < n; ++i) {
      has_history[i] =
          store.pair_event_count(ranking.ego, ranking.alters[i], ranking.time) > 0;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!has_history[i] || !has_history[j]) {
          ++out.skipped_pairs;
          continue;
        }
        out.examples.push_back(
            {ranking.ego, ranking.alters[i], ranking.alters[j], ranking.time, 1});
        out.examples.push_back(
            {ranking.ego, ranking.alters[j], ranking.alters[i], ranking.time, 0});
      }
    }
  }
  return out;
}

std::vector<TrainingExample> subsample_examples(std::vector<TrainingExample> examples,
                                                std::size_t cap, std::uint64_t seed) {
  if (examples.size() <= cap) return examples;
  // Partial Fisher-Yates: the first `cap` slots become a uniform sample,
  // order preserved afterwards for determinism.
  Rng rng(derive_seed(seed, "subsample"));
  for (std::size_t i = 0; i < cap; ++i) {
    std::swap(examples[i], examples[i + rng.below(examples.size() - i)]);
  }
  examples.resize(cap);
  return examples;
}

void assert_ego_disjoint(const std::vector<TrainingExample>& examples,
                         const std::vector<PersonId>& excluded_egos) {
  std::unordered_set<PersonId> excluded(excluded_egos.begin(), excluded_egos.end());
  for (const TrainingExample& e : examples) {
    if (excluded.count(e.ego) != 0) {
      throw ModelError("training example leaks excluded ego " + e.ego);
    }
  }
}

ForestTrainData forest_training_data(const std::vector<TrainingExample>& examples,
                                     const StoreView& store) {
  ForestTrainData data;
  data.x.resize(examples.size());
  data.y.resize(examples.size());
  parallel::parallel_for(examples.size(), [&](std::size_t i) {
    const TrainingExample& e = examples[i];
    data.x[i] = difference_features(feature_vector(store, e.ego, e.first, e.time),
                                    feature_vector(store, e.ego, e.second, e.time));
    data.y[i] = e.label;
  });
  return data;
}

StackedSeries example_series(const StoreView& store, const TrainingExample& example) {
  return stacked_series(binned_timeseries(store, example.ego, example.first, example.time),
                        binned_timeseries(store, example.ego, example.second, example.time));
}

ScoreComparator::ScoreComparator(BaselineKind kind, std::uint64_t seed)
    : kind_(kind), seed_(seed) {}

double ScoreComparator::compare(const StoreView& store, const PersonId& ego, const PersonId& a,
                                const PersonId& b, Timestamp t) const {
  auto score = [&](const PersonId& alter) -> std::optional<double> {
    switch (kind_) {
      case BaselineKind::Random:
        return Rng(derive_seed(seed_, "random-score", ego, alter,
                               static_cast<std::uint64_t>(t)))
            .uniform01();
      case BaselineKind::Overlap:
        return overlap_score(store, ego, alter, t).value;
      case BaselineKind::Duration:
        return duration_score(store, ego, alter, t);
      case BaselineKind::Recency:
        return recency_score(store, ego, alter, t);
      case BaselineKind::Frequency:
        return frequency_score(store, ego, alter, t);
      case BaselineKind::Volume:
        return volume_score(store, ego, alter, t);
    }
    return std::nullopt;
  };
  const std::optional<double> sa = score(a);
  const std::optional<double> sb = score(b);
  if (!sa && !sb) return 0.5;
  if (!sa) return 0.0;
  if (!sb) return 1.0;
  if (*sa > *sb) return 1.0;
  if (*sa < *sb) return 0.0;
  return 0.5;
}

double ForestComparator::compare(const StoreView& store, const PersonId& ego, const PersonId& a,
                                 const PersonId& b, Timestamp t) const {
  return model_.predict(difference_features(feature_vector(store, ego, a, t),
                                            feature_vector(store, ego, b, t)));
}

double RecurrentComparator::compare(const StoreView& store, const PersonId& ego,
                                    const PersonId& a, const PersonId& b, Timestamp t) const {
  return net_.forward(stacked_series(binned_timeseries(store, ego, a, t),
                                     binned_timeseries(store, ego, b, t)));
}

ForestTrainResult train_forest_model(const std::vector<TrainingExample>& examples,
                                     const StoreView& store, const ForestConfig& config,
                                     std::uint64_t seed) {
  return train_forest(forest_training_data(examples, store), config, seed);
}

RecurrentTrainResult train_recurrent_model(const std::vector<TrainingExample>& examples,
                                           const StoreView& store,
                                           const RecurrentConfig& config, std::uint64_t seed) {
  if (examples.empty()) throw ModelError("train_recurrent_model: empty training set");
  std::vector<StackedSeries> inputs(examples.size());
  std::vector<int> labels(examples.size());
  parallel::parallel_for(examples.size(), [&](std::size_t i) {
    inputs[i] = example_series(store, examples[i]);
    labels[i] = examples[i].label;
  });
  return train_recurrent(inputs, labels, config, seed);
}

void RankingModel::fit(const StoreView&, const std::vector<TieRanking>&, std::uint64_t) {}

namespace {

class BaselineRankingModel final : public RankingModel {
 public:
  explicit BaselineRankingModel(BaselineKind kind) : kind_(kind) {}
  std::string name() const override { return baseline_kind_name(kind_); }
  TieRanking predict(const StoreView& view, const PersonId& ego, Timestamp t,
                     std::uint64_t seed) const override {
    return baseline_ranking(kind_, view, ego, t, seed);
  }

 private:
  BaselineKind kind_;
};

class EnsembleRankingModel final : public RankingModel {
 public:
  explicit EnsembleRankingModel(MlOptions options) : options_(std::move(options)) {}
  std::string name() const override { return "ensemble"; }
  bool trainable() const override { return true; }

  void fit(const StoreView& train_view, const std::vector<TieRanking>& train_truths,
           std::uint64_t seed) override {
    std::vector<TrainingExample> examples =
        subsample_examples(generate_training_pairs(train_truths, train_view).examples,
                           options_.max_training_examples, derive_seed(seed, "cap"));
    ForestTrainResult trained =
        train_forest_model(examples, train_view, options_.forest, derive_seed(seed, "forest"));
    comparator_ = std::make_unique<ForestComparator>(std::move(trained.model));
  }

  TieRanking predict(const StoreView& view, const PersonId& ego, Timestamp t,
                     std::uint64_t) const override {
    if (comparator_ == nullptr) throw ModelError("ensemble model used before fit");
    return comparator_ranking(*comparator_, view, ego, t);
  }

 private:
  MlOptions options_;
  std::unique_ptr<ForestComparator> comparator_;
};

class LstmRankingModel final : public RankingModel {
 public:
  explicit LstmRankingModel(MlOptions options) : options_(std::move(options)) {}
  std::string name() const override { return "lstm"; }
  bool trainable() const override { return true; }

  void fit(const StoreView& train_view, const std::vector<TieRanking>& train_truths,
           std::uint64_t seed) override {
    std::vector<TrainingExample> examples =
        subsample_examples(generate_training_pairs(train_truths, train_view).examples,
                           options_.max_training_examples, derive_seed(seed, "cap"));
    RecurrentTrainResult trained = train_recurrent_model(examples, train_view,
                                                         options_.recurrent,
                                                         derive_seed(seed, "recurrent"));
    comparator_ = std::make_unique<RecurrentComparator>(std::move(trained.net));
  }

  TieRanking predict(const StoreView& view, const PersonId& ego, Timestamp t,
                     std::uint64_t) const override {
    if (comparator_ == nullptr) throw ModelError("lstm model used before fit");
    return comparator_ranking(*comparator_, view, ego, t);
  }

 private:
  MlOptions options_;
  std::unique_ptr<RecurrentComparator> comparator_;
};

class OracleRankingModel final : public RankingModel {
 public:
  explicit OracleRankingModel(std::vector<TieRanking> truths) : truths_(std::move(truths)) {}
  std::string name() const override { return "oracle"; }
  TieRanking predict(const StoreView&, const PersonId& ego, Timestamp t,
                     std::uint64_t) const override {
    for (const TieRanking& r : truths_) {
      if (r.ego == ego && r.time == t) return r;
    }
    return TieRanking{ego, t, {}};
  }

 private:
  std::vector<TieRanking> truths_;
};

}  // namespace

std::unique_ptr<RankingModel> make_baseline_model(BaselineKind kind) {
  return std::make_unique<BaselineRankingModel>(kind);
}

std::unique_ptr<RankingModel> make_ensemble_model(const MlOptions& options) {
  return std::make_unique<EnsembleRankingModel>(options);
}

std::unique_ptr<RankingModel> make_lstm_model(const MlOptions& options) {
  return std::make_unique<LstmRankingModel>(options);
}

std::vector<std::unique_ptr<RankingModel>> standard_models(const MlOptions& options) {
  std::vector<std::unique_ptr<RankingModel>> models;
  models.push_back(make_baseline_model(BaselineKind::Random));
  models.push_back(make_baseline_model(BaselineKind::Overlap));
  models.push_back(make_baseline_model(BaselineKind::Duration));
  models.push_back(make_baseline_model(BaselineKind::Recency));
  models.push_back(make_baseline_model(BaselineKind::Frequency));
  models.push_back(make_baseline_model(BaselineKind::Volume));
  models.push_back(make_ensemble_model(options));
  models.push_back(make_lstm_model(options));
  return models;
}

std::unique_ptr<RankingModel> make_oracle_model(std::vector<TieRanking> truths) {
  return std::make_unique<OracleRankingModel>(std::move(truths));
}

}  // namespace ties
