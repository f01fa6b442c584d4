#include "ties/cross_validation.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "ties/format.hpp"
#include "ties/parallel.hpp"
#include "ties/rng.hpp"

namespace ties {

namespace {

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double population_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - m) * (x - m);
  return sum / static_cast<double>(xs.size());
}

}  // namespace

FoldPlan make_fold_plan(const std::vector<SurveyResponse>& surveys, int fold_count,
                        std::uint64_t seed) {
  if (fold_count < 2) throw std::invalid_argument("make_fold_plan: need at least 2 folds");
  std::set<PersonId> ego_set;
  std::set<Timestamp> wave_set;
  for (const SurveyResponse& s : surveys) {
    ego_set.insert(s.ego);
    wave_set.insert(s.time);
  }
  if (ego_set.size() < static_cast<std::size_t>(fold_count)) {
    throw DataError("make_fold_plan: fewer egos than folds");
  }

  std::vector<PersonId> egos(ego_set.begin(), ego_set.end());
  Rng rng(derive_seed(seed, "fold-plan"));
  rng.shuffle(egos);

  FoldPlan plan;
  plan.waves.assign(wave_set.begin(), wave_set.end());
  plan.groups.resize(static_cast<std::size_t>(fold_count));
  const std::size_t n = egos.size();
  const std::size_t k = static_cast<std::size_t>(fold_count);
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t begin = f * n / k;
    const std::size_t end = (f + 1) * n / k;
    plan.groups[f].assign(egos.begin() + begin, egos.begin() + end);
  }
  return plan;
}

ScoreReport temporal_cv(const EventStore& store, const std::vector<SurveyResponse>& surveys,
                        const std::vector<RankingModel*>& models, const CvOptions& options,
                        std::uint64_t seed) {
  if (models.empty()) throw std::invalid_argument("temporal_cv: no models");
  if (surveys.empty()) throw DataError("temporal_cv: no surveys");

  // Ground truth per (ego, time). Surveys must be unique per key.
  std::map<std::pair<PersonId, Timestamp>, TieRanking> truth;
  for (const SurveyResponse& s : surveys) {
    auto [it, inserted] =
        truth.try_emplace({s.ego, s.time}, rank_alters(s, options.tournament));
    if (!inserted) {
      throw DataError("temporal_cv: duplicate survey for ego " + s.ego);
    }
  }

  const FoldPlan plan = make_fold_plan(surveys, options.folds, seed);

  ScoreReport report;
  report.seed = seed;
  report.fold_count = options.folds;
  report.rbo_p = options.rbo.p;
  report.waves = plan.waves;

  for (RankingModel* model : models) {
    ModelScore ms;
    ms.model = model->name();
    std::vector<double> fold_means;
    std::vector<double> all_ego_scores;

    for (std::size_t f = 0; f < plan.groups.size(); ++f) {
      const std::unordered_set<PersonId> test_egos(plan.groups[f].begin(),
                                                   plan.groups[f].end());
      std::map<PersonId, std::vector<ScoredPair>> per_ego;

      for (std::size_t wi = 0; wi < plan.waves.size(); ++wi) {
        const Timestamp wave = plan.waves[wi];
        if (model->trainable()) {
          std::vector<TieRanking> train_truths;
          for (const SurveyResponse& s : surveys) {
            if (test_egos.count(s.ego) == 0 && s.time <= wave) {
              train_truths.push_back(truth.at({s.ego, s.time}));
            }
          }
          model->fit(store.view_before(wave), train_truths,
                     derive_seed(seed, "fit", ms.model, static_cast<std::uint64_t>(f),
                                 static_cast<std::uint64_t>(wi)));
        }

        // Test surveys at this wave; prediction is read-only and the
        // true ranking is compared only after all predictions exist.
        std::vector<const SurveyResponse*> wave_surveys;
        for (const SurveyResponse& s : surveys) {
          if (s.time == wave && test_egos.count(s.ego) != 0) wave_surveys.push_back(&s);
        }
        std::vector<TieRanking> predictions(wave_surveys.size());
        std::exception_ptr failure;
        parallel::parallel_for(wave_surveys.size(), [&](std::size_t i) {
          try {
            const SurveyResponse& s = *wave_surveys[i];
            predictions[i] = model->predict(
                store.view_before(s.time), s.ego, s.time,
                derive_seed(seed, "predict", ms.model, s.ego,
                            static_cast<std::uint64_t>(s.time)));
          } catch (...) {
#ifdef _OPENMP
#pragma omp critical(ties_cv_predict_failure)
#endif
            {
              if (!failure) failure = std::current_exception();
            }
          }
        });
        if (failure) std::rethrow_exception(failure);

        for (std::size_t i = 0; i < wave_surveys.size(); ++i) {
          const SurveyResponse& s = *wave_surveys[i];
          per_ego[s.ego].push_back(
              {predictions[i].alters, truth.at({s.ego, s.time}).alters});
        }
      }

      FoldScore fs;
      std::vector<double> ego_scores;
      for (const auto& [ego, pairs] : per_ego) {
        const std::optional<double> score = weighted_ego_score(pairs, options.rbo);
        if (!score) continue;  // no non-empty truths: nothing to score
        fs.egos.push_back({ego, *score, pairs.size()});
        ego_scores.push_back(*score);
        all_ego_scores.push_back(*score);
      }
      fs.mean = mean_of(ego_scores);
      fold_means.push_back(fs.mean);
      ms.folds.push_back(std::move(fs));
    }

    ms.mean_rbo = mean_of(fold_means);
    ms.fold_variance = population_variance(fold_means);
    ms.ego_variance = population_variance(all_ego_scores);
    report.models.push_back(std::move(ms));
  }
  return report;
}

void write_report_json(const ScoreReport& report, std::ostream& out) {
  nlohmann::json j;
  j["format"] = "ties-score-report";
  j["version"] = 1;
  j["seed"] = report.seed;
  j["fold_count"] = report.fold_count;
  j["rbo_p"] = report.rbo_p;
  j["waves"] = report.waves;
  nlohmann::json models = nlohmann::json::array();
  for (const ModelScore& ms : report.models) {
    nlohmann::json folds = nlohmann::json::array();
    for (const FoldScore& fs : ms.folds) {
      nlohmann::json egos = nlohmann::json::array();
      for (const EgoScore& es : fs.egos) {
        egos.push_back({{"ego", es.ego}, {"score", es.score}, {"surveys", es.surveys}});
      }
      folds.push_back({{"mean", fs.mean}, {"egos", std::move(egos)}});
    }
    models.push_back({{"model", ms.model},
                      {"mean_rbo", ms.mean_rbo},
                      {"fold_variance", ms.fold_variance},
                      {"ego_variance", ms.ego_variance},
                      {"folds", std::move(folds)}});
  }
  j["models"] = std::move(models);
  out << j.dump(2) << '\n';
}

void write_report_csv(const ScoreReport& report, std::ostream& out) {
  out << "model,mean_rbo,fold_variance,ego_variance\n";
  for (const ModelScore& ms : report.models) {
    out << ms.model << ',' << format_double(ms.mean_rbo) << ','
        << format_double(ms.fold_variance) << ',' << format_double(ms.ego_variance) << '\n';
  }
}

}  // namespace ties
