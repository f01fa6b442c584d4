#pragma once
// Ego-network survey records and their JSON serialization.
//
// Ordinal answers appear in survey files as canonical answer strings and
// are mapped through the code tables below. The mapping is part of the
// file format and is bit-exact:
//
//   closeness:  "Distant"=0, "Less than close"=1, "Close"=2, "Especially close"=3
//   frequency:  "Rarely"=0, "Monthly"=1, "Weekly"=2, "Daily"=3
//   similarity: "Not similar"=0, "Somewhat similar"=1, "Similar"=2, "Very similar"=3
//   relation:   parent | sibling | other_kin | significant_other | friend
//               | acquaintance | other
//   gender:     "M" | "F" | "U"
//
// A missing or null answer is allowed; the tournament awards no points
// for that question in any pair involving that alter.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ties/core.hpp"

namespace ties {

inline constexpr std::size_t kMaxSurveyAlters = 20;

enum class Relation : std::uint8_t {
  Parent,
  Sibling,
  OtherKin,
  SignificantOther,
  Friend,
  Acquaintance,
  Other,
};

enum class Gender : std::uint8_t { M, F, Unspecified };

const char* relation_name(Relation r);
Relation relation_from_name(const std::string& name);  // throws DataError
const char* gender_name(Gender g);
Gender gender_from_name(const std::string& name);  // throws DataError

bool is_kin(Relation r);

struct AlterAnswer {
  PersonId alter;
  std::optional<int> closeness;        // ordinal 0..3, 3 = especially close
  std::optional<double> duration_years;  // years known, >= 0
  std::optional<int> frequency;        // ordinal 0..3
  std::optional<int> similarity;       // ordinal 0..3
  Relation relation = Relation::Other;
  Gender gender = Gender::Unspecified;
};

struct SurveyResponse {
  PersonId ego;
  Timestamp time = 0;
  std::vector<AlterAnswer> answers;  // distinct alters, at most kMaxSurveyAlters
};

// An ego's ordered tie list at one time, strongest first.
struct TieRanking {
  PersonId ego;
  Timestamp time = 0;
  std::vector<PersonId> alters;
};

// Ordinal code tables, exposed for tests and documentation.
const std::vector<std::string>& closeness_answers();
const std::vector<std::string>& frequency_answers();
const std::vector<std::string>& similarity_answers();

// Reads a JSON array of survey records. Validates ordinal ranges, alter
// distinctness, the 20-alter cap, and non-negative durations; throws
// DataError identifying the offending record.
std::vector<SurveyResponse> load_surveys(std::istream& in);
void write_surveys(const std::vector<SurveyResponse>& surveys, std::ostream& out);

}  // namespace ties
