#pragma once
// Single-attribute tie scorers: ranking baselines that double as the
// feature primitives for the ensemble model. All scores look only at
// events strictly before the query time, so appending future events
// never changes a score (the prefix property).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ties/event_store.hpp"
#include "ties/survey.hpp"

namespace ties {

enum class BaselineKind : std::uint8_t {
  Random,
  Overlap,
  Duration,
  Recency,
  Frequency,
  Volume,
};

const char* baseline_kind_name(BaselineKind kind);
std::optional<BaselineKind> baseline_kind_from_name(const std::string& name);

// Event count divided by elapsed time since the pair first communicated,
// in events per second. Empty when the pair has no prior events.
std::optional<double> frequency_score(const StoreView& store, const PersonId& ego,
                                      const PersonId& alter, Timestamp t,
                                      ChannelFilter filter = ChannelFilter::All);

// Negated elapsed time since the last communication, so that more recent
// contact sorts higher under the uniform descending-score convention.
std::optional<double> recency_score(const StoreView& store, const PersonId& ego,
                                    const PersonId& alter, Timestamp t,
                                    ChannelFilter filter = ChannelFilter::All);

// Elapsed time since the first communication.
std::optional<double> duration_score(const StoreView& store, const PersonId& ego,
                                     const PersonId& alter, Timestamp t,
                                     ChannelFilter filter = ChannelFilter::All);

// Total number of events before t. Zero when there are none.
double volume_score(const StoreView& store, const PersonId& ego, const PersonId& alter,
                    Timestamp t, ChannelFilter filter = ChannelFilter::All);

struct OverlapScore {
  double value = 0.0;
  bool degenerate = false;  // zero denominator
};

// Weighted neighborhood overlap in [0, 1]:
//   sum over shared neighbors k of (w_ik + w_jk), divided by
//   (s_i + s_j - 2 * w_ij),
// where w are pair event counts before t and s are total per-person
// event counts before t. Symmetric in i and j. Neighborhoods include
// every observed contact, participant or not.
OverlapScore overlap_score(const StoreView& store, const PersonId& i, const PersonId& j,
                           Timestamp t);

// Uniform random permutation of the contacts, deterministic per seed.
TieRanking random_ranking(const PersonId& ego, Timestamp t,
                          const std::vector<PersonId>& contacts, std::uint64_t seed);

// Contacts of ego before t ordered by the kind's score, descending;
// exact score ties break by alter id. The seed feeds only the Random
// kind.
TieRanking baseline_ranking(BaselineKind kind, const StoreView& store, const PersonId& ego,
                            Timestamp t, std::uint64_t seed = 0);

}  // namespace ties
