#pragma once
// Seeded synthetic world: latent daily closeness per relationship
// archetype drives both Poisson communication events and survey
// answers, so every downstream result has a planted ground truth.
//
// The default world plants, per ego: stable kin (parent, sibling), an
// optional significant other whose relationship starts mid-study, close
// friends, one forming and one fading friendship, acquaintances, and a
// pool of weak contacts that never reach the survey floor. Egos form
// ten persistent triangles cycling through three planted shapes:
// cementing (the same-gender pair strengthens while cross-pair ties
// weaken), equalist, and weak-link. Each significant other also talks
// to the ego's two triangle partners, giving overlap structure.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ties/event_store.hpp"
#include "ties/survey.hpp"

namespace ties {

struct ArchetypeConfig {
  Relation relation = Relation::Friend;
  double base_lo = 0.5;  // base closeness drawn uniformly from [lo, hi]
  double base_hi = 0.7;
  double volatility = 0.01;  // daily noise scale of the mean-reverting walk
  double drift = 0.0;        // deterministic closeness change over the whole span
  double call_rate = 0.05;   // events/day at closeness 1
  double text_rate = 1.2;
  double known_years_lo = 0.5;  // acquaintance age when communication starts
  double known_years_hi = 6.0;
  // Optional scheduled step (relationship start, fade, breakup).
  bool stepped = false;
  double step_frac_lo = 0.0;  // step time as a fraction of the span
  double step_frac_hi = 0.0;
  double step_delta_lo = 0.0;
  double step_delta_hi = 0.0;
  // Communication begins shortly before the step instead of at day 0.
  bool comm_starts_near_step = false;
  double comm_lead_days_lo = 30.0;
  double comm_lead_days_hi = 90.0;
  // Communication begins at a uniform random day in the first 80% of
  // the span (weak contacts met during the study).
  bool staggered_start = false;
};

struct WorldConfig {
  int egos = 30;
  Timestamp start = 1'546'300'800;  // an arbitrary fixed epoch anchor
  int waves = 4;
  int wave_spacing_days = 120;
  double so_probability = 0.5;
  int close_friends = 4;
  int acquaintances = 3;
  // Text-heavy low-closeness contacts whose raw event counts overlap the
  // friend range; only the per-channel mix separates them.
  int chatty_contacts = 2;
  int weak_contacts = 22;
  double listing_floor = 0.1;  // minimum closeness to appear on a survey
  int list_cap = static_cast<int>(kMaxSurveyAlters);

  ArchetypeConfig parent;
  ArchetypeConfig sibling;
  ArchetypeConfig significant_other;
  ArchetypeConfig close_friend;
  ArchetypeConfig new_friend;
  ArchetypeConfig fading_friend;
  ArchetypeConfig acquaintance;
  ArchetypeConfig chatty;
  ArchetypeConfig weak_tie;
  ArchetypeConfig triad_majority;  // cementing triangle, same-gender pair
  ArchetypeConfig triad_cross;     // cementing triangle, pairs to the third member
  ArchetypeConfig triad_equal;     // equalist triangle, all pairs
  ArchetypeConfig triad_strong;    // weak-link triangle, the two strong pairs
  ArchetypeConfig triad_weak;      // weak-link triangle, the weak pair
  ArchetypeConfig so_cross;        // significant other <-> ego's triangle partners

  static WorldConfig defaults();
};

struct SynthPerson {
  PersonId id;
  Gender gender = Gender::Unspecified;
  bool participant = false;
};

struct SynthEdge {
  PersonId a;  // the ego (or lower-id participant for triangle edges)
  PersonId b;
  Relation relation = Relation::Other;  // a's label for b (and b's for a)
  double known_years0 = 0.0;            // acquaintance years when communication starts
  int comm_start_day = 0;
  int step_day = -1;  // -1 when no step is scheduled
  std::vector<double> closeness;  // per day over the span; 0 before comm_start_day
};

enum class TriadShape { Cementing, Equalist, WeakLink };

struct PlantedTriad {
  std::array<PersonId, 3> members;  // [majority, majority, minority] for cementing
  TriadShape shape = TriadShape::Equalist;
};

class SynthWorld {
 public:
  WorldConfig config;
  int span_days = 0;
  std::vector<SynthPerson> persons;
  std::vector<SynthEdge> edges;
  std::vector<PlantedTriad> triads;
  std::vector<Timestamp> wave_times;
  EventStore store;
  std::vector<SurveyResponse> surveys;   // ego-major, wave-major order
  std::vector<TieRanking> planted;       // same order as surveys

  double closeness(const PersonId& a, const PersonId& b, Timestamp t) const;
  const SynthEdge* find_edge(const PersonId& a, const PersonId& b) const;
  Gender gender_of(const PersonId& id) const;
  std::map<PersonId, Gender> gender_map() const;
  const TieRanking* planted_for(const PersonId& ego, std::size_t wave_index) const;

 private:
  friend SynthWorld generate_world(const WorldConfig& config, std::uint64_t seed);
  std::map<std::pair<PersonId, PersonId>, std::size_t> edge_index_;
  std::map<PersonId, std::size_t> person_index_;
};

// Deterministic per seed: identical configs and seeds give bit-identical
// worlds. Throws DataError on invalid config.
SynthWorld generate_world(const WorldConfig& config, std::uint64_t seed);

// The generator's own answer key for one ego and wave.
TieRanking planted_ranking(const SynthWorld& world, const PersonId& ego,
                           std::size_t wave_index);

// JSON answer key: planted rankings, relations, genders, step days, and
// weekly closeness samples per edge.
void write_truth(const SynthWorld& world, std::ostream& out);

}  // namespace ties
