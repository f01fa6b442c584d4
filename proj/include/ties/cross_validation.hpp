#pragma once
// Temporal k-fold cross-validation over egos and survey waves. Egos are
// shuffled into disjoint groups; within a fold, models walk the waves
// in order, refitting on train-group surveys up to each wave and
// predicting test-group surveys at it. Every model sees only
// time-truncated store views, so reading past a cutoff is structurally
// impossible.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ties/event_store.hpp"
#include "ties/models.hpp"
#include "ties/rbo.hpp"
#include "ties/survey.hpp"
#include "ties/tournament.hpp"

namespace ties {

struct FoldPlan {
  std::vector<std::vector<PersonId>> groups;  // fold f tests groups[f]
  std::vector<Timestamp> waves;               // distinct survey times, ascending
};

// Seeded shuffle of the distinct survey egos, split into fold_count
// near-equal groups (sizes differ by at most one). Groups partition the
// ego set.
FoldPlan make_fold_plan(const std::vector<SurveyResponse>& surveys, int fold_count,
                        std::uint64_t seed);

struct EgoScore {
  PersonId ego;
  double score = 0.0;
  std::size_t surveys = 0;
};

struct FoldScore {
  double mean = 0.0;
  std::vector<EgoScore> egos;
};

struct ModelScore {
  std::string model;
  double mean_rbo = 0.0;
  double fold_variance = 0.0;  // population variance of the fold means
  double ego_variance = 0.0;   // population variance of all per-ego scores
  std::vector<FoldScore> folds;
};

struct ScoreReport {
  std::uint64_t seed = 0;
  int fold_count = 0;
  double rbo_p = 0.0;
  std::vector<Timestamp> waves;
  std::vector<ModelScore> models;
};

struct CvOptions {
  int folds = 3;
  RboParams rbo;
  TournamentConfig tournament = TournamentConfig::standard();
};

// Ground truth comes from the survey tournament; predictions use views
// capped at each survey's own time. Baseline scores are identical
// whether or not trainable models run alongside, because prediction
// seeds derive only from (seed, model name, ego, time).
ScoreReport temporal_cv(const EventStore& store, const std::vector<SurveyResponse>& surveys,
                        const std::vector<RankingModel*>& models, const CvOptions& options,
                        std::uint64_t seed);

// JSON report: full per-fold, per-ego detail.
void write_report_json(const ScoreReport& report, std::ostream& out);

// Leaderboard CSV: model,mean_rbo,fold_variance,ego_variance.
void write_report_csv(const ScoreReport& report, std::ostream& out);

}  // namespace ties
