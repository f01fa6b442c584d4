#pragma once
// Ground-truth tie rankings from survey answers via a pairwise
// tournament. For every unordered pair of listed alters and every
// question, the strictly greater answer earns a point; equal answers
// earn a point each; a missing answer on either side earns nothing.
// Alters are ranked by total points, with ties broken by years known
// (longer wins) and finally by alter id.
//
// The question set is configuration-driven: questions can be removed,
// replaced, or added without changing how the ranking is produced.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ties/survey.hpp"

namespace ties {

struct TournamentQuestion {
  std::string name;
  std::function<std::optional<double>(const AlterAnswer&)> value;
};

struct TournamentConfig {
  std::vector<TournamentQuestion> questions;

  // The default four questions: closeness, duration, frequency, similarity.
  static TournamentConfig standard();
};

// Total tournament points per alter. Requires at least one answer.
std::map<PersonId, int> tournament_scores(const SurveyResponse& survey,
                                          const TournamentConfig& config = TournamentConfig::standard());

// Full ranking: points descending, then duration_years descending
// (missing duration loses), then alter id ascending.
TieRanking rank_alters(const SurveyResponse& survey,
                       const TournamentConfig& config = TournamentConfig::standard());

}  // namespace ties
