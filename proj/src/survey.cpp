#include "ties/survey.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace ties {

namespace {

using nlohmann::json;

const std::vector<std::string> kCloseness = {"Distant", "Less than close", "Close",
                                             "Especially close"};
const std::vector<std::string> kFrequency = {"Rarely", "Monthly", "Weekly", "Daily"};
const std::vector<std::string> kSimilarity = {"Not similar", "Somewhat similar", "Similar",
                                              "Very similar"};

std::optional<int> ordinal_from_json(const json& record, const char* key,
                                     const std::vector<std::string>& table,
                                     const std::string& where) {
  if (!record.contains(key) || record[key].is_null()) return std::nullopt;
  const json& value = record[key];
  if (!value.is_string()) {
    throw DataError(where + ": field '" + key + "' must be an answer string");
  }
  const std::string& answer = value.get_ref<const std::string&>();
  auto it = std::find(table.begin(), table.end(), answer);
  if (it == table.end()) {
    throw DataError(where + ": unknown answer '" + answer + "' for '" + key + "'");
  }
  return static_cast<int>(it - table.begin());
}

json ordinal_to_json(std::optional<int> v, const std::vector<std::string>& table) {
  if (!v.has_value()) return nullptr;
  return table[static_cast<std::size_t>(*v)];
}

}  // namespace

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Parent: return "parent";
    case Relation::Sibling: return "sibling";
    case Relation::OtherKin: return "other_kin";
    case Relation::SignificantOther: return "significant_other";
    case Relation::Friend: return "friend";
    case Relation::Acquaintance: return "acquaintance";
    case Relation::Other: return "other";
  }
  return "other";
}

Relation relation_from_name(const std::string& name) {
  static const std::vector<std::pair<std::string, Relation>> table = {
      {"parent", Relation::Parent},
      {"sibling", Relation::Sibling},
      {"other_kin", Relation::OtherKin},
      {"significant_other", Relation::SignificantOther},
      {"friend", Relation::Friend},
      {"acquaintance", Relation::Acquaintance},
      {"other", Relation::Other},
  };
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  throw DataError("unknown relation: '" + name + "'");
}

const char* gender_name(Gender g) {
  switch (g) {
    case Gender::M: return "M";
    case Gender::F: return "F";
    case Gender::Unspecified: return "U";
  }
  return "U";
}

Gender gender_from_name(const std::string& name) {
  if (name == "M") return Gender::M;
  if (name == "F") return Gender::F;
  if (name == "U" || name.empty()) return Gender::Unspecified;
  throw DataError("unknown gender: '" + name + "'");
}

bool is_kin(Relation r) {
  return r == Relation::Parent || r == Relation::Sibling || r == Relation::OtherKin;
}

const std::vector<std::string>& closeness_answers() { return kCloseness; }
const std::vector<std::string>& frequency_answers() { return kFrequency; }
const std::vector<std::string>& similarity_answers() { return kSimilarity; }

std::vector<SurveyResponse> load_surveys(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("survey file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("survey file must be a JSON array of records");

  std::vector<SurveyResponse> surveys;
  surveys.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& record = doc[i];
    std::string where = "survey record " + std::to_string(i);
    if (!record.is_object() || !record.contains("ego") || !record.contains("time") ||
        !record.contains("answers")) {
      throw DataError(where + ": expected fields ego, time, answers");
    }
    SurveyResponse survey;
    survey.ego = record["ego"].get<std::string>();
    if (survey.ego.empty()) throw DataError(where + ": empty ego id");
    survey.time = record["time"].get<Timestamp>();
    const json& answers = record["answers"];
    if (!answers.is_array()) throw DataError(where + ": answers must be an array");
    if (answers.size() > kMaxSurveyAlters) {
      throw DataError(where + ": " + std::to_string(answers.size()) +
                      " alters exceeds the cap of " + std::to_string(kMaxSurveyAlters));
    }
    std::set<PersonId> seen;
    for (const json& a : answers) {
      AlterAnswer answer;
      if (!a.contains("alter")) throw DataError(where + ": answer missing alter id");
      answer.alter = a["alter"].get<std::string>();
      if (answer.alter.empty()) throw DataError(where + ": empty alter id");
      if (answer.alter == survey.ego) throw DataError(where + ": ego listed as own alter");
      if (!seen.insert(answer.alter).second) {
        throw DataError(where + ": duplicate alter '" + answer.alter + "'");
      }
      answer.closeness = ordinal_from_json(a, "closeness", kCloseness, where);
      answer.frequency = ordinal_from_json(a, "frequency", kFrequency, where);
      answer.similarity = ordinal_from_json(a, "similarity", kSimilarity, where);
      if (a.contains("duration_years") && !a["duration_years"].is_null()) {
        answer.duration_years = a["duration_years"].get<double>();
        if (!(*answer.duration_years >= 0.0)) {
          throw DataError(where + ": negative duration_years for '" + answer.alter + "'");
        }
      }
      if (a.contains("relation") && !a["relation"].is_null()) {
        answer.relation = relation_from_name(a["relation"].get<std::string>());
      }
      if (a.contains("gender") && !a["gender"].is_null()) {
        answer.gender = gender_from_name(a["gender"].get<std::string>());
      }
      survey.answers.push_back(std::move(answer));
    }
    surveys.push_back(std::move(survey));
  }
  return surveys;
}

void write_surveys(const std::vector<SurveyResponse>& surveys, std::ostream& out) {
  json doc = json::array();
  for (const SurveyResponse& survey : surveys) {
    json answers = json::array();
    for (const AlterAnswer& a : survey.answers) {
      json rec;
      rec["alter"] = a.alter;
      rec["closeness"] = ordinal_to_json(a.closeness, kCloseness);
      rec["duration_years"] = a.duration_years.has_value() ? json(*a.duration_years) : json(nullptr);
      rec["frequency"] = ordinal_to_json(a.frequency, kFrequency);
      rec["similarity"] = ordinal_to_json(a.similarity, kSimilarity);
      rec["relation"] = relation_name(a.relation);
      rec["gender"] = gender_name(a.gender);
      answers.push_back(std::move(rec));
    }
    json rec;
    rec["ego"] = survey.ego;
    rec["time"] = survey.time;
    rec["answers"] = std::move(answers);
    doc.push_back(std::move(rec));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace ties
