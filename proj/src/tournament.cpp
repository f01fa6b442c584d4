#include "ties/tournament.hpp"

#include <algorithm>
#include <limits>

namespace ties {

TournamentConfig TournamentConfig::standard() {
  TournamentConfig config;
  config.questions = {
      {"closeness",
       [](const AlterAnswer& a) -> std::optional<double> {
         if (!a.closeness) return std::nullopt;
         return static_cast<double>(*a.closeness);
       }},
      {"duration",
       [](const AlterAnswer& a) -> std::optional<double> { return a.duration_years; }},
      {"frequency",
       [](const AlterAnswer& a) -> std::optional<double> {
         if (!a.frequency) return std::nullopt;
         return static_cast<double>(*a.frequency);
       }},
      {"similarity",
       [](const AlterAnswer& a) -> std::optional<double> {
         if (!a.similarity) return std::nullopt;
         return static_cast<double>(*a.similarity);
       }},
  };
  return config;
}

std::map<PersonId, int> tournament_scores(const SurveyResponse& survey,
                                          const TournamentConfig& config) {
  if (survey.answers.empty()) throw DataError("tournament requires at least one answer");

  std::map<PersonId, int> points;
  for (const AlterAnswer& a : survey.answers) points[a.alter] = 0;

  const std::size_t n = survey.answers.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const AlterAnswer& a = survey.answers[i];
      const AlterAnswer& b = survey.answers[j];
      for (const TournamentQuestion& q : config.questions) {
        std::optional<double> va = q.value(a);
        std::optional<double> vb = q.value(b);
        if (!va || !vb) continue;
        if (*va > *vb) {
          ++points[a.alter];
        } else if (*vb > *va) {
          ++points[b.alter];
        } else {
          ++points[a.alter];
          ++points[b.alter];
        }
      }
    }
  }
  return points;
}

TieRanking rank_alters(const SurveyResponse& survey, const TournamentConfig& config) {
  std::map<PersonId, int> points = tournament_scores(survey, config);

  struct Entry {
    PersonId alter;
    int points;
    double duration;
  };
  std::vector<Entry> entries;
  entries.reserve(survey.answers.size());
  for (const AlterAnswer& a : survey.answers) {
    double duration = a.duration_years.value_or(-std::numeric_limits<double>::infinity());
    entries.push_back({a.alter, points.at(a.alter), duration});
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.points != b.points) return a.points > b.points;
    if (a.duration != b.duration) return a.duration > b.duration;
    return a.alter < b.alter;
  });

  TieRanking ranking;
  ranking.ego = survey.ego;
  ranking.time = survey.time;
  ranking.alters.reserve(entries.size());
  for (const Entry& e : entries) ranking.alters.push_back(e.alter);
  return ranking;
}

}  // namespace ties
