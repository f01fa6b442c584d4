#include "ties/baselines.hpp"

#include <algorithm>

#include "ties/rng.hpp"

namespace ties {

const char* baseline_kind_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Random: return "random";
    case BaselineKind::Overlap: return "overlap";
    case BaselineKind::Duration: return "duration";
    case BaselineKind::Recency: return "recency";
    case BaselineKind::Frequency: return "frequency";
    case BaselineKind::Volume: return "volume";
  }
  return "random";
}

std::optional<BaselineKind> baseline_kind_from_name(const std::string& name) {
  static const std::vector<std::pair<std::string, BaselineKind>> table = {
      {"random", BaselineKind::Random},       {"overlap", BaselineKind::Overlap},
      {"duration", BaselineKind::Duration},   {"recency", BaselineKind::Recency},
      {"frequency", BaselineKind::Frequency}, {"volume", BaselineKind::Volume},
  };
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  return std::nullopt;
}

std::optional<double> frequency_score(const StoreView& store, const PersonId& ego,
                                      const PersonId& alter, Timestamp t,
                                      ChannelFilter filter) {
  std::optional<Timestamp> first = store.pair_first_event(ego, alter, t, filter);
  if (!first) return std::nullopt;
  std::int64_t count = store.pair_event_count(ego, alter, t, filter);
  return static_cast<double>(count) / static_cast<double>(t - *first);
}

std::optional<double> recency_score(const StoreView& store, const PersonId& ego,
                                    const PersonId& alter, Timestamp t, ChannelFilter filter) {
  std::optional<Timestamp> last = store.pair_last_event(ego, alter, t, filter);
  if (!last) return std::nullopt;
  return -static_cast<double>(t - *last);
}

std::optional<double> duration_score(const StoreView& store, const PersonId& ego,
                                     const PersonId& alter, Timestamp t, ChannelFilter filter) {
  std::optional<Timestamp> first = store.pair_first_event(ego, alter, t, filter);
  if (!first) return std::nullopt;
  return static_cast<double>(t - *first);
}

double volume_score(const StoreView& store, const PersonId& ego, const PersonId& alter,
                    Timestamp t, ChannelFilter filter) {
  return static_cast<double>(store.pair_event_count(ego, alter, t, filter));
}

OverlapScore overlap_score(const StoreView& store, const PersonId& i, const PersonId& j,
                           Timestamp t) {
  WeightedNeighbors wi = store.weighted_neighbors(i, t);
  WeightedNeighbors wj = store.weighted_neighbors(j, t);

  std::int64_t w_ij = store.pair_event_count(i, j, t);
  double denominator = static_cast<double>(wi.strength + wj.strength - 2 * w_ij);
  if (denominator <= 0.0) return {0.0, true};

  // Shared neighbors: merge walk over the id-sorted count lists,
  // excluding i and j themselves.
  double numerator = 0.0;
  auto a = wi.counts.begin();
  auto b = wj.counts.begin();
  while (a != wi.counts.end() && b != wj.counts.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (a->first != i && a->first != j) {
        numerator += static_cast<double>(a->second + b->second);
      }
      ++a;
      ++b;
    }
  }
  return {numerator / denominator, false};
}

TieRanking random_ranking(const PersonId& ego, Timestamp t,
                          const std::vector<PersonId>& contacts, std::uint64_t seed) {
  TieRanking ranking;
  ranking.ego = ego;
  ranking.time = t;
  ranking.alters = contacts;
  std::sort(ranking.alters.begin(), ranking.alters.end());
  Rng rng(seed);
  rng.shuffle(ranking.alters);
  return ranking;
}

TieRanking baseline_ranking(BaselineKind kind, const StoreView& store, const PersonId& ego,
                            Timestamp t, std::uint64_t seed) {
  std::vector<PersonId> contacts = store.contacts_of(ego, t);
  if (kind == BaselineKind::Random) return random_ranking(ego, t, contacts, seed);

  struct Scored {
    PersonId alter;
    double score;
  };
  std::vector<Scored> scored;
  scored.reserve(contacts.size());
  for (const PersonId& alter : contacts) {
    double score = 0.0;
    switch (kind) {
      case BaselineKind::Overlap:
        score = overlap_score(store, ego, alter, t).value;
        break;
      case BaselineKind::Duration:
        score = duration_score(store, ego, alter, t).value_or(0.0);
        break;
      case BaselineKind::Recency:
        score = recency_score(store, ego, alter, t).value_or(0.0);
        break;
      case BaselineKind::Frequency:
        score = frequency_score(store, ego, alter, t).value_or(0.0);
        break;
      case BaselineKind::Volume:
        score = volume_score(store, ego, alter, t);
        break;
      case BaselineKind::Random:
        break;
    }
    scored.push_back({alter, score});
  }

  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.alter < b.alter;
  });

  TieRanking ranking;
  ranking.ego = ego;
  ranking.time = t;
  ranking.alters.reserve(scored.size());
  for (const Scored& s : scored) ranking.alters.push_back(s.alter);
  return ranking;
}

}  // namespace ties
