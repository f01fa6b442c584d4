#include "ties/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "ties/rng.hpp"

namespace ties {
namespace {

constexpr double kDaysPerYear = 365.25;
constexpr double kWalkDecay = 0.97;

std::string person_tag(char kind, int ego, int sub = -1) {
  char buf[16];
  if (sub < 0) {
    std::snprintf(buf, sizeof buf, "%c%02d", kind, ego);
  } else {
    std::snprintf(buf, sizeof buf, "%c%02d%c", kind, ego,
                  static_cast<char>('a' + sub));
  }
  return buf;
}

std::pair<PersonId, PersonId> pair_key(const PersonId& a, const PersonId& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void check_archetype(const ArchetypeConfig& at, const char* name) {
  bool ok = at.base_lo <= at.base_hi && at.volatility >= 0.0 &&
            at.call_rate >= 0.0 && at.text_rate >= 0.0 &&
            at.known_years_lo <= at.known_years_hi && at.known_years_lo >= 0.0 &&
            at.step_frac_lo <= at.step_frac_hi && at.step_delta_lo <= at.step_delta_hi &&
            at.comm_lead_days_lo <= at.comm_lead_days_hi;
  if (!ok) throw DataError(std::string("invalid archetype config: ") + name);
}

void check_config(const WorldConfig& cfg) {
  if (cfg.egos < 1) throw DataError("world config: egos must be positive");
  if (cfg.waves < 1) throw DataError("world config: waves must be positive");
  if (cfg.wave_spacing_days < 1)
    throw DataError("world config: wave_spacing_days must be positive");
  if (cfg.so_probability < 0.0 || cfg.so_probability > 1.0)
    throw DataError("world config: so_probability must be in [0, 1]");
  if (cfg.close_friends < 0 || cfg.acquaintances < 0 || cfg.chatty_contacts < 0 ||
      cfg.weak_contacts < 0)
    throw DataError("world config: contact counts must be non-negative");
  if (cfg.listing_floor < 0.0 || cfg.listing_floor > 1.0)
    throw DataError("world config: listing_floor must be in [0, 1]");
  if (cfg.list_cap < 1 || cfg.list_cap > static_cast<int>(kMaxSurveyAlters))
    throw DataError("world config: list_cap must be in [1, 20]");
  check_archetype(cfg.parent, "parent");
  check_archetype(cfg.sibling, "sibling");
  check_archetype(cfg.significant_other, "significant_other");
  check_archetype(cfg.close_friend, "close_friend");
  check_archetype(cfg.new_friend, "new_friend");
  check_archetype(cfg.fading_friend, "fading_friend");
  check_archetype(cfg.acquaintance, "acquaintance");
  check_archetype(cfg.chatty, "chatty");
  check_archetype(cfg.weak_tie, "weak_tie");
  check_archetype(cfg.triad_majority, "triad_majority");
  check_archetype(cfg.triad_cross, "triad_cross");
  check_archetype(cfg.triad_equal, "triad_equal");
  check_archetype(cfg.triad_strong, "triad_strong");
  check_archetype(cfg.triad_weak, "triad_weak");
  check_archetype(cfg.so_cross, "so_cross");
}

// Daily latent closeness: base + linear drift + scheduled step + a
// mean-reverting noise walk, clamped to [0, 1]. Zero before the edge's
// communication start.
std::vector<double> make_trajectory(const ArchetypeConfig& at, int span_days,
                                    int comm_start_day, int step_day,
                                    double base, double delta, Rng& rng) {
  std::vector<double> c(static_cast<std::size_t>(span_days), 0.0);
  double walk = 0.0;
  for (int d = 0; d < span_days; ++d) {
    walk = kWalkDecay * walk + rng.normal(0.0, at.volatility);
    if (d < comm_start_day) continue;
    double v = base + at.drift * (static_cast<double>(d) / span_days) + walk;
    if (step_day >= 0 && d >= step_day) v += delta;
    c[static_cast<std::size_t>(d)] = std::clamp(v, 0.0, 1.0);
  }
  return c;
}

// forced_comm_start >= 0 pins the start day (used for edges that begin
// when another edge's step fires, like a partner meeting the ego's new
// significant other).
SynthEdge make_edge(PersonId a, PersonId b, const ArchetypeConfig& at,
                    int span_days, std::uint64_t seed, std::size_t edge_idx,
                    int forced_comm_start = -1) {
  Rng rng(derive_seed(seed, "edge", static_cast<std::uint64_t>(edge_idx)));
  SynthEdge e;
  e.a = std::move(a);
  e.b = std::move(b);
  e.relation = at.relation;
  double base = rng.uniform(at.base_lo, at.base_hi);
  double delta = 0.0;
  if (at.stepped) {
    double frac = rng.uniform(at.step_frac_lo, at.step_frac_hi);
    e.step_day = std::clamp(static_cast<int>(std::lround(frac * span_days)), 0,
                            span_days - 1);
    delta = rng.uniform(at.step_delta_lo, at.step_delta_hi);
  }
  int comm_start = 0;
  bool met_during_study = false;
  if (forced_comm_start >= 0) {
    comm_start = std::min(forced_comm_start, span_days - 1);
    met_during_study = true;
  } else if (at.comm_starts_near_step && e.step_day >= 0) {
    double lead = rng.uniform(at.comm_lead_days_lo, at.comm_lead_days_hi);
    comm_start = std::max(0, e.step_day - static_cast<int>(std::lround(lead)));
    met_during_study = true;
  } else if (at.staggered_start) {
    comm_start = static_cast<int>(rng.uniform(0.0, 0.8 * span_days));
    met_during_study = true;
  }
  e.comm_start_day = comm_start;
  e.known_years0 = met_during_study
                       ? 0.0
                       : rng.uniform(at.known_years_lo, at.known_years_hi);
  e.closeness =
      make_trajectory(at, span_days, comm_start, e.step_day, base, delta, rng);
  return e;
}

void emit_events(const SynthEdge& e, const ArchetypeConfig& at,
                 Timestamp start, std::uint64_t seed, std::size_t edge_idx,
                 EventStore::Builder& builder) {
  Rng rng(derive_seed(seed, "events", static_cast<std::uint64_t>(edge_idx)));
  const int span_days = static_cast<int>(e.closeness.size());
  for (int d = e.comm_start_day; d < span_days; ++d) {
    double c = e.closeness[static_cast<std::size_t>(d)];
    if (c <= 0.0) continue;
    Timestamp day_start = start + static_cast<Timestamp>(d) * kSecondsPerDay;
    int calls = rng.poisson(at.call_rate * c);
    int texts = rng.poisson(at.text_rate * c);
    for (int k = 0; k < calls + texts; ++k) {
      CommEvent ev;
      ev.timestamp = day_start + static_cast<Timestamp>(rng.below(kSecondsPerDay));
      ev.channel = k < calls ? ChannelKind::Call : ChannelKind::Text;
      if (ev.channel == ChannelKind::Call) {
        double secs = std::exp(rng.normal(4.0, 0.9));
        ev.magnitude = std::clamp<std::int64_t>(std::llround(secs), 5, 7200);
      } else {
        ev.magnitude = 1 + static_cast<std::int64_t>(rng.below(160));
      }
      bool a_sends = rng.bernoulli(0.5);
      ev.sender = a_sends ? e.a : e.b;
      ev.receiver = a_sends ? e.b : e.a;
      builder.add(ev);
    }
  }
}

int quantize(double c) {
  if (c < 0.25) return 0;
  if (c < 0.5) return 1;
  if (c < 0.75) return 2;
  return 3;
}

}  // namespace

WorldConfig WorldConfig::defaults() {
  WorldConfig cfg;

  cfg.parent.relation = Relation::Parent;
  cfg.parent.base_lo = 0.78;
  cfg.parent.base_hi = 0.90;
  cfg.parent.volatility = 0.003;
  cfg.parent.call_rate = 0.10;
  cfg.parent.text_rate = 0.25;
  cfg.parent.known_years_lo = 15.0;
  cfg.parent.known_years_hi = 25.0;

  cfg.sibling.relation = Relation::Sibling;
  cfg.sibling.base_lo = 0.62;
  cfg.sibling.base_hi = 0.78;
  cfg.sibling.volatility = 0.008;
  cfg.sibling.call_rate = 0.05;
  cfg.sibling.text_rate = 0.85;
  cfg.sibling.known_years_lo = 10.0;
  cfg.sibling.known_years_hi = 18.0;

  cfg.significant_other.relation = Relation::SignificantOther;
  cfg.significant_other.base_lo = 0.10;
  cfg.significant_other.base_hi = 0.18;
  cfg.significant_other.volatility = 0.010;
  cfg.significant_other.call_rate = 0.12;
  cfg.significant_other.text_rate = 2.20;
  cfg.significant_other.known_years_lo = 0.0;
  cfg.significant_other.known_years_hi = 0.0;
  cfg.significant_other.stepped = true;
  cfg.significant_other.step_frac_lo = 0.30;
  cfg.significant_other.step_frac_hi = 0.65;
  cfg.significant_other.step_delta_lo = 0.68;
  cfg.significant_other.step_delta_hi = 0.78;
  cfg.significant_other.comm_starts_near_step = true;
  cfg.significant_other.comm_lead_days_lo = 30.0;
  cfg.significant_other.comm_lead_days_hi = 90.0;

  cfg.close_friend.relation = Relation::Friend;
  cfg.close_friend.base_lo = 0.45;
  cfg.close_friend.base_hi = 0.70;
  cfg.close_friend.drift = 0.18;
  cfg.close_friend.volatility = 0.015;
  cfg.close_friend.call_rate = 0.05;
  cfg.close_friend.text_rate = 1.35;
  cfg.close_friend.known_years_lo = 0.5;
  cfg.close_friend.known_years_hi = 6.0;

  cfg.new_friend.relation = Relation::Friend;
  cfg.new_friend.base_lo = 0.15;
  cfg.new_friend.base_hi = 0.25;
  cfg.new_friend.volatility = 0.015;
  cfg.new_friend.call_rate = 0.05;
  cfg.new_friend.text_rate = 1.35;
  cfg.new_friend.known_years_lo = 0.0;
  cfg.new_friend.known_years_hi = 0.0;
  cfg.new_friend.stepped = true;
  cfg.new_friend.step_frac_lo = 0.25;
  cfg.new_friend.step_frac_hi = 0.40;
  cfg.new_friend.step_delta_lo = 0.45;
  cfg.new_friend.step_delta_hi = 0.60;
  cfg.new_friend.comm_starts_near_step = true;
  cfg.new_friend.comm_lead_days_lo = 10.0;
  cfg.new_friend.comm_lead_days_hi = 40.0;

  cfg.fading_friend.relation = Relation::Friend;
  cfg.fading_friend.base_lo = 0.50;
  cfg.fading_friend.base_hi = 0.65;
  cfg.fading_friend.volatility = 0.015;
  cfg.fading_friend.call_rate = 0.05;
  cfg.fading_friend.text_rate = 1.35;
  cfg.fading_friend.known_years_lo = 0.5;
  cfg.fading_friend.known_years_hi = 4.0;
  cfg.fading_friend.stepped = true;
  cfg.fading_friend.step_frac_lo = 0.58;
  cfg.fading_friend.step_frac_hi = 0.72;
  cfg.fading_friend.step_delta_lo = -0.55;
  cfg.fading_friend.step_delta_hi = -0.42;

  cfg.acquaintance.relation = Relation::Acquaintance;
  cfg.acquaintance.base_lo = 0.15;
  cfg.acquaintance.base_hi = 0.30;
  cfg.acquaintance.volatility = 0.010;
  cfg.acquaintance.call_rate = 0.03;
  cfg.acquaintance.text_rate = 0.90;
  cfg.acquaintance.known_years_lo = 0.2;
  cfg.acquaintance.known_years_hi = 2.0;

  cfg.chatty.relation = Relation::Acquaintance;
  cfg.chatty.base_lo = 0.10;
  cfg.chatty.base_hi = 0.16;
  cfg.chatty.volatility = 0.010;
  cfg.chatty.call_rate = 0.004;
  cfg.chatty.text_rate = 3.0;
  cfg.chatty.known_years_lo = 0.2;
  cfg.chatty.known_years_hi = 2.0;

  cfg.weak_tie.relation = Relation::Acquaintance;
  cfg.weak_tie.base_lo = 0.02;
  cfg.weak_tie.base_hi = 0.085;
  cfg.weak_tie.volatility = 0.004;
  cfg.weak_tie.call_rate = 0.02;
  cfg.weak_tie.text_rate = 0.80;
  cfg.weak_tie.known_years_lo = 0.0;
  cfg.weak_tie.known_years_hi = 1.0;

  ArchetypeConfig triad;
  triad.relation = Relation::Friend;
  triad.volatility = 0.008;
  triad.call_rate = 0.06;
  triad.text_rate = 1.30;
  triad.known_years_lo = 0.3;
  triad.known_years_hi = 1.5;

  // Cementing triads start with all three pairs at the same strength;
  // the drift splits majority from cross mid-study so the two-against-one
  // motif appears over time rather than being present from day one.
  cfg.triad_majority = triad;
  cfg.triad_majority.base_lo = 0.52;
  cfg.triad_majority.base_hi = 0.56;
  cfg.triad_majority.drift = 0.28;

  cfg.triad_cross = triad;
  cfg.triad_cross.base_lo = 0.52;
  cfg.triad_cross.base_hi = 0.56;
  cfg.triad_cross.drift = -0.26;

  cfg.triad_equal = triad;
  cfg.triad_equal.base_lo = 0.56;
  cfg.triad_equal.base_hi = 0.60;

  cfg.triad_strong = triad;
  cfg.triad_strong.base_lo = 0.58;
  cfg.triad_strong.base_hi = 0.66;

  cfg.triad_weak = triad;
  cfg.triad_weak.base_lo = 0.16;
  cfg.triad_weak.base_hi = 0.22;

  cfg.so_cross.relation = Relation::Acquaintance;
  cfg.so_cross.base_lo = 0.25;
  cfg.so_cross.base_hi = 0.35;
  cfg.so_cross.volatility = 0.010;
  cfg.so_cross.call_rate = 0.02;
  cfg.so_cross.text_rate = 0.65;
  cfg.so_cross.known_years_lo = 0.0;
  cfg.so_cross.known_years_hi = 0.0;

  return cfg;
}

SynthWorld generate_world(const WorldConfig& config, std::uint64_t seed) {
  check_config(config);
  SynthWorld world;
  world.config = config;
  world.span_days = config.waves * config.wave_spacing_days;
  const int span = world.span_days;

  // Participants. Each full group of three consecutive egos is a planted
  // triangle: even groups are two men and a woman, odd groups the
  // reverse, and the shape cycles cementing / equalist / weak-link.
  const int triad_count = config.egos / 3;
  for (int i = 0; i < config.egos; ++i) {
    SynthPerson p;
    p.id = person_tag('e', i);
    p.participant = true;
    int triad = i / 3;
    if (triad < triad_count) {
      bool majority_male = triad % 2 == 0;
      bool in_majority = i % 3 != 2;
      p.gender = (majority_male == in_majority) ? Gender::M : Gender::F;
    } else {
      p.gender = i % 2 == 0 ? Gender::M : Gender::F;
    }
    world.persons.push_back(std::move(p));
  }

  std::vector<std::size_t> so_edge_of(static_cast<std::size_t>(config.egos),
                                      static_cast<std::size_t>(-1));

  auto add_person = [&world, seed](const PersonId& id) {
    SynthPerson p;
    p.id = id;
    p.gender = Rng(derive_seed(seed, "gender", id)).bernoulli(0.5) ? Gender::M
                                                                   : Gender::F;
    world.persons.push_back(std::move(p));
  };

  std::vector<const ArchetypeConfig*> edge_archetypes;
  auto add_edge = [&world, &edge_archetypes](SynthEdge e,
                                             const ArchetypeConfig& at) {
    world.edges.push_back(std::move(e));
    edge_archetypes.push_back(&at);
  };

  // External alters, per ego.
  for (int i = 0; i < config.egos; ++i) {
    const PersonId ego = person_tag('e', i);
    Rng ego_rng(derive_seed(seed, "ego", static_cast<std::uint64_t>(i)));

    PersonId parent = person_tag('p', i);
    add_person(parent);
    add_edge(make_edge(ego, parent, config.parent, span, seed,
                       world.edges.size()),
             config.parent);

    PersonId sibling = person_tag('s', i);
    add_person(sibling);
    add_edge(make_edge(ego, sibling, config.sibling, span, seed,
                       world.edges.size()),
             config.sibling);

    if (ego_rng.bernoulli(config.so_probability)) {
      PersonId so = person_tag('o', i);
      add_person(so);
      so_edge_of[static_cast<std::size_t>(i)] = world.edges.size();
      add_edge(make_edge(ego, so, config.significant_other, span, seed,
                         world.edges.size()),
               config.significant_other);
    }

    for (int f = 0; f < config.close_friends; ++f) {
      PersonId friend_id = person_tag('f', i, f);
      add_person(friend_id);
      add_edge(make_edge(ego, friend_id, config.close_friend, span, seed,
                         world.edges.size()),
               config.close_friend);
    }

    PersonId newcomer = person_tag('n', i);
    add_person(newcomer);
    add_edge(make_edge(ego, newcomer, config.new_friend, span, seed,
                       world.edges.size()),
             config.new_friend);

    PersonId fading = person_tag('g', i);
    add_person(fading);
    add_edge(make_edge(ego, fading, config.fading_friend, span, seed,
                       world.edges.size()),
             config.fading_friend);

    for (int q = 0; q < config.acquaintances; ++q) {
      PersonId acq = person_tag('q', i, q);
      add_person(acq);
      add_edge(make_edge(ego, acq, config.acquaintance, span, seed,
                         world.edges.size()),
               config.acquaintance);
    }

    for (int c = 0; c < config.chatty_contacts; ++c) {
      PersonId chatty = person_tag('c', i, c);
      add_person(chatty);
      add_edge(make_edge(ego, chatty, config.chatty, span, seed,
                         world.edges.size()),
               config.chatty);
    }

    for (int w = 0; w < config.weak_contacts; ++w) {
      PersonId weak = person_tag('w', i, w);
      add_person(weak);
      add_edge(make_edge(ego, weak, config.weak_tie, span, seed,
                         world.edges.size()),
               config.weak_tie);
    }
  }

  // Triangle edges among participants.
  for (int t = 0; t < triad_count; ++t) {
    PlantedTriad triad;
    triad.members = {person_tag('e', 3 * t), person_tag('e', 3 * t + 1),
                     person_tag('e', 3 * t + 2)};
    switch (t % 3) {
      case 0: triad.shape = TriadShape::Cementing; break;
      case 1: triad.shape = TriadShape::Equalist; break;
      default: triad.shape = TriadShape::WeakLink; break;
    }
    const auto& m = triad.members;
    auto pick = [&](int x, int y) -> const ArchetypeConfig& {
      switch (triad.shape) {
        case TriadShape::Cementing:
          // The same-gender pair (members 0 and 1) cements; both edges
          // to the third member erode.
          return (x == 0 && y == 1) ? config.triad_majority : config.triad_cross;
        case TriadShape::Equalist:
          return config.triad_equal;
        case TriadShape::WeakLink:
          // Members 0 and 1 are the weakly linked pair.
          return (x == 0 && y == 1) ? config.triad_weak : config.triad_strong;
      }
      return config.triad_equal;
    };
    add_edge(make_edge(m[0], m[1], pick(0, 1), span, seed, world.edges.size()),
             pick(0, 1));
    add_edge(make_edge(m[0], m[2], pick(0, 2), span, seed, world.edges.size()),
             pick(0, 2));
    add_edge(make_edge(m[1], m[2], pick(1, 2), span, seed, world.edges.size()),
             pick(1, 2));
    world.triads.push_back(std::move(triad));
  }

  // A significant other also gets to know the ego's triangle partners
  // once the relationship starts.
  for (int i = 0; i < config.egos; ++i) {
    std::size_t so_idx = so_edge_of[static_cast<std::size_t>(i)];
    if (so_idx == static_cast<std::size_t>(-1)) continue;
    if (i / 3 >= triad_count) continue;
    const PersonId so = world.edges[so_idx].b;
    const int so_start = std::max(world.edges[so_idx].step_day, 0);
    int base = (i / 3) * 3;
    for (int j = base; j < base + 3; ++j) {
      if (j == i) continue;
      add_edge(make_edge(person_tag('e', j), so, config.so_cross, span, seed,
                         world.edges.size(), so_start),
               config.so_cross);
    }
  }

  // Events.
  EventStore::Builder builder;
  {
    std::vector<PersonId> participants;
    for (int i = 0; i < config.egos; ++i) participants.push_back(person_tag('e', i));
    builder.set_participants(participants);
  }
  for (std::size_t idx = 0; idx < world.edges.size(); ++idx) {
    emit_events(world.edges[idx], *edge_archetypes[idx], config.start, seed,
                idx, builder);
  }
  world.store = std::move(builder).build();

  // Indices.
  for (std::size_t idx = 0; idx < world.edges.size(); ++idx) {
    world.edge_index_[pair_key(world.edges[idx].a, world.edges[idx].b)] = idx;
  }
  std::sort(world.persons.begin(), world.persons.end(),
            [](const SynthPerson& x, const SynthPerson& y) { return x.id < y.id; });
  for (std::size_t idx = 0; idx < world.persons.size(); ++idx) {
    world.person_index_[world.persons[idx].id] = idx;
  }

  // Waves, surveys, planted rankings.
  for (int w = 0; w < config.waves; ++w) {
    Timestamp wave_day = static_cast<Timestamp>(config.wave_spacing_days) * (w + 1);
    world.wave_times.push_back(config.start + wave_day * kSecondsPerDay);
  }
  for (int i = 0; i < config.egos; ++i) {
    const PersonId ego = person_tag('e', i);
    for (int w = 0; w < config.waves; ++w) {
      int wave_day = config.wave_spacing_days * (w + 1);
      int day_idx = std::min(wave_day, span - 1);
      Rng survey_rng(derive_seed(seed, "survey", ego,
                                 static_cast<std::uint64_t>(w)));

      struct Listed {
        const SynthEdge* edge;
        PersonId alter;
        double c;
      };
      std::vector<Listed> listed;
      for (const auto& e : world.edges) {
        PersonId alter;
        if (e.a == ego) alter = e.b;
        else if (e.b == ego) alter = e.a;
        else continue;
        double c = e.closeness[static_cast<std::size_t>(day_idx)];
        if (c < config.listing_floor) continue;
        listed.push_back({&e, std::move(alter), c});
      }
      std::sort(listed.begin(), listed.end(), [](const Listed& x, const Listed& y) {
        if (x.c != y.c) return x.c > y.c;
        return x.alter < y.alter;
      });
      if (listed.size() > static_cast<std::size_t>(config.list_cap))
        listed.resize(static_cast<std::size_t>(config.list_cap));

      SurveyResponse survey;
      survey.ego = ego;
      survey.time = world.wave_times[static_cast<std::size_t>(w)];
      TieRanking truth;
      truth.ego = ego;
      truth.time = survey.time;
      for (const auto& item : listed) {
        AlterAnswer ans;
        ans.alter = item.alter;
        ans.closeness = quantize(item.c);
        ans.frequency = quantize(item.c);
        double sim = std::clamp(item.c + survey_rng.normal(0.0, 0.05), 0.0, 1.0);
        ans.similarity = quantize(sim);
        ans.duration_years =
            item.edge->known_years0 +
            (wave_day - item.edge->comm_start_day) / kDaysPerYear;
        ans.relation = item.edge->relation;
        ans.gender = world.gender_of(item.alter);
        survey.answers.push_back(std::move(ans));
        truth.alters.push_back(item.alter);
      }
      world.surveys.push_back(std::move(survey));
      world.planted.push_back(std::move(truth));
    }
  }
  return world;
}

double SynthWorld::closeness(const PersonId& a, const PersonId& b,
                             Timestamp t) const {
  const SynthEdge* e = find_edge(a, b);
  if (e == nullptr) return 0.0;
  auto day = (t - config.start) / kSecondsPerDay;
  if (day < 0) return 0.0;
  day = std::min<decltype(day)>(day, span_days - 1);
  return e->closeness[static_cast<std::size_t>(day)];
}

const SynthEdge* SynthWorld::find_edge(const PersonId& a,
                                       const PersonId& b) const {
  auto it = edge_index_.find(pair_key(a, b));
  if (it == edge_index_.end()) return nullptr;
  return &edges[it->second];
}

Gender SynthWorld::gender_of(const PersonId& id) const {
  auto it = person_index_.find(id);
  if (it == person_index_.end())
    throw DataError("synth world: unknown person " + id);
  return persons[it->second].gender;
}

std::map<PersonId, Gender> SynthWorld::gender_map() const {
  std::map<PersonId, Gender> out;
  for (const auto& p : persons) out[p.id] = p.gender;
  return out;
}

const TieRanking* SynthWorld::planted_for(const PersonId& ego,
                                          std::size_t wave_index) const {
  if (wave_index >= wave_times.size()) return nullptr;
  Timestamp t = wave_times[wave_index];
  for (const auto& r : planted) {
    if (r.ego == ego && r.time == t) return &r;
  }
  return nullptr;
}

TieRanking planted_ranking(const SynthWorld& world, const PersonId& ego,
                           std::size_t wave_index) {
  const TieRanking* r = world.planted_for(ego, wave_index);
  if (r == nullptr)
    throw DataError("no planted ranking for ego " + ego);
  return *r;
}

void write_truth(const SynthWorld& world, std::ostream& out) {
  nlohmann::json j;
  j["format"] = "ties-truth";
  j["version"] = 1;
  j["start"] = world.config.start;
  j["span_days"] = world.span_days;
  j["wave_times"] = world.wave_times;

  nlohmann::json persons = nlohmann::json::array();
  for (const auto& p : world.persons) {
    persons.push_back({{"id", p.id},
                       {"gender", gender_name(p.gender)},
                       {"participant", p.participant}});
  }
  j["persons"] = std::move(persons);

  nlohmann::json triads = nlohmann::json::array();
  for (const auto& t : world.triads) {
    const char* shape = t.shape == TriadShape::Cementing ? "cementing"
                        : t.shape == TriadShape::Equalist ? "equalist"
                                                          : "weak_link";
    triads.push_back({{"members", t.members}, {"shape", shape}});
  }
  j["triads"] = std::move(triads);

  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : world.edges) {
    nlohmann::json je;
    je["a"] = e.a;
    je["b"] = e.b;
    je["relation"] = relation_name(e.relation);
    je["known_years0"] = e.known_years0;
    je["comm_start_day"] = e.comm_start_day;
    je["step_day"] = e.step_day;
    nlohmann::json weekly = nlohmann::json::array();
    for (std::size_t d = 0; d < e.closeness.size(); d += 7) weekly.push_back(e.closeness[d]);
    je["closeness_weekly"] = std::move(weekly);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);

  nlohmann::json planted = nlohmann::json::array();
  for (const auto& r : world.planted) {
    planted.push_back({{"ego", r.ego}, {"time", r.time}, {"alters", r.alters}});
  }
  j["planted"] = std::move(planted);

  out << j.dump() << '\n';
}

}  // namespace ties
