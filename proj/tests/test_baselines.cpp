#include "doctest.h"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "ties/baselines.hpp"
#include "ties/rng.hpp"

using namespace ties;

namespace {

std::vector<CommEvent> random_events(std::uint64_t seed, int count) {
  Rng rng(seed);
  const std::vector<PersonId> people = {"ann", "bob", "cat", "dan", "eve"};
  std::vector<CommEvent> events;
  for (int i = 0; i < count; ++i) {
    const PersonId& s = people[rng.index(people.size())];
    const PersonId& r = people[rng.index(people.size())];
    if (s == r) continue;
    CommEvent e;
    e.timestamp = 1000 + static_cast<Timestamp>(rng.index(5000));
    e.sender = s;
    e.receiver = r;
    e.channel = rng.bernoulli(0.4) ? ChannelKind::Call : ChannelKind::Text;
    e.magnitude = 1 + static_cast<std::int64_t>(rng.index(100));
    events.push_back(e);
  }
  return events;
}

EventStore store_from(const std::vector<CommEvent>& events) {
  EventStore::Builder b;
  for (const CommEvent& e : events) b.add(e);
  return std::move(b).build();
}

bool channel_passes(ChannelKind c, ChannelFilter f) {
  return f == ChannelFilter::All || (f == ChannelFilter::CallOnly) == (c == ChannelKind::Call);
}

// Timestamps of events between a and b strictly before t, ascending.
std::vector<Timestamp> brute_times(const std::vector<CommEvent>& events, const PersonId& a,
                                   const PersonId& b, Timestamp t, ChannelFilter f) {
  std::vector<Timestamp> out;
  for (const CommEvent& e : events) {
    const bool between = (e.sender == a && e.receiver == b) || (e.sender == b && e.receiver == a);
    if (between && e.timestamp < t && channel_passes(e.channel, f)) out.push_back(e.timestamp);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t brute_pair_count(const std::vector<CommEvent>& events, const PersonId& a,
                              const PersonId& b, Timestamp t) {
  return static_cast<std::int64_t>(brute_times(events, a, b, t, ChannelFilter::All).size());
}

}  // namespace

TEST_CASE("kind names round trip") {
  const std::vector<std::pair<BaselineKind, std::string>> table = {
      {BaselineKind::Random, "random"},       {BaselineKind::Overlap, "overlap"},
      {BaselineKind::Duration, "duration"},   {BaselineKind::Recency, "recency"},
      {BaselineKind::Frequency, "frequency"}, {BaselineKind::Volume, "volume"},
  };
  for (const auto& [kind, name] : table) {
    CHECK(baseline_kind_name(kind) == name);
    REQUIRE(baseline_kind_from_name(name).has_value());
    CHECK(*baseline_kind_from_name(name) == kind);
  }
  CHECK_FALSE(baseline_kind_from_name("ensemble").has_value());
  CHECK_FALSE(baseline_kind_from_name("Volume").has_value());
}

TEST_CASE("single-attribute scores match a brute recount") {
  const std::vector<CommEvent> events = random_events(17, 500);
  const EventStore store = store_from(events);
  const StoreView view = store.view();
  const std::vector<PersonId> people = {"ann", "bob", "cat", "dan", "eve", "zed"};

  Rng rng(3001);
  for (int probe = 0; probe < 200; ++probe) {
    const PersonId& a = people[rng.index(people.size())];
    const PersonId& b = people[rng.index(people.size())];
    if (a == b) continue;
    const Timestamp t = 900 + static_cast<Timestamp>(rng.index(5500));
    for (ChannelFilter f : {ChannelFilter::All, ChannelFilter::CallOnly, ChannelFilter::TextOnly}) {
      const std::vector<Timestamp> times = brute_times(events, a, b, t, f);
      const auto freq = frequency_score(view, a, b, t, f);
      const auto rec = recency_score(view, a, b, t, f);
      const auto dur = duration_score(view, a, b, t, f);
      const double vol = volume_score(view, a, b, t, f);
      CHECK(vol == static_cast<double>(times.size()));
      if (times.empty()) {
        CHECK_FALSE(freq.has_value());
        CHECK_FALSE(rec.has_value());
        CHECK_FALSE(dur.has_value());
      } else {
        REQUIRE(freq.has_value());
        REQUIRE(rec.has_value());
        REQUIRE(dur.has_value());
        CHECK(*freq == static_cast<double>(times.size()) / static_cast<double>(t - times.front()));
        CHECK(*rec == -static_cast<double>(t - times.back()));
        CHECK(*dur == static_cast<double>(t - times.front()));
      }
    }
  }
}

TEST_CASE("channel filters pick out the right events") {
  const EventStore store = store_from({
      {100, "e", "a", ChannelKind::Call, 30},
      {200, "e", "a", ChannelKind::Text, 12},
      {300, "a", "e", ChannelKind::Text, 7},
  });
  const StoreView v = store.view();
  const Timestamp t = 1000;

  CHECK(*frequency_score(v, "e", "a", t) == 3.0 / 900.0);
  CHECK(*recency_score(v, "e", "a", t) == -700.0);
  CHECK(*duration_score(v, "e", "a", t) == 900.0);
  CHECK(volume_score(v, "e", "a", t) == 3.0);

  CHECK(*frequency_score(v, "e", "a", t, ChannelFilter::CallOnly) == 1.0 / 900.0);
  CHECK(*recency_score(v, "e", "a", t, ChannelFilter::CallOnly) == -900.0);
  CHECK(volume_score(v, "e", "a", t, ChannelFilter::CallOnly) == 1.0);

  CHECK(*frequency_score(v, "e", "a", t, ChannelFilter::TextOnly) == 2.0 / 800.0);
  CHECK(*duration_score(v, "e", "a", t, ChannelFilter::TextOnly) == 800.0);
  CHECK(volume_score(v, "e", "a", t, ChannelFilter::TextOnly) == 2.0);

  // Unknown pair: every optional is empty and the volume is zero.
  CHECK_FALSE(frequency_score(v, "e", "zz", t).has_value());
  CHECK_FALSE(recency_score(v, "e", "zz", t).has_value());
  CHECK_FALSE(duration_score(v, "e", "zz", t).has_value());
  CHECK(volume_score(v, "e", "zz", t) == 0.0);
}

TEST_CASE("overlap on a hand-worked fixture") {
  // a-b twice, a-c three times, b-c once, a-d four times. The only shared
  // neighbor of a and b is c: numerator 3 + 1, denominator 9 + 3 - 4.
  std::vector<CommEvent> events;
  auto add = [&events](const PersonId& s, const PersonId& r, int n) {
    for (int i = 0; i < n; ++i) {
      events.push_back({static_cast<Timestamp>(100 + events.size()), s, r, ChannelKind::Text, 1});
    }
  };
  add("a", "b", 2);
  add("a", "c", 3);
  add("b", "c", 1);
  add("a", "d", 4);
  const EventStore store = store_from(events);
  const StoreView v = store.view();

  const OverlapScore ab = overlap_score(v, "a", "b", 1000);
  CHECK_FALSE(ab.degenerate);
  CHECK(ab.value == doctest::Approx(4.0 / 8.0).epsilon(1e-15));
  const OverlapScore ba = overlap_score(v, "b", "a", 1000);
  CHECK(ba.value == ab.value);

  // d only talks to a: no shared neighbors, overlap 0 but not degenerate.
  const OverlapScore ad = overlap_score(v, "a", "d", 1000);
  CHECK_FALSE(ad.degenerate);
  CHECK(ad.value == 0.0);
}

TEST_CASE("overlap is degenerate without outside contacts") {
  const EventStore store = store_from({
      {100, "x", "y", ChannelKind::Call, 5},
      {200, "y", "x", ChannelKind::Text, 5},
  });
  // An isolated dyad has denominator s_x + s_y - 2 w_xy = 0.
  const OverlapScore iso = overlap_score(store.view(), "x", "y", 1000);
  CHECK(iso.degenerate);
  CHECK(iso.value == 0.0);
  // Before any events at all the strengths themselves vanish.
  CHECK(overlap_score(store.view(), "x", "y", 50).degenerate);
}

TEST_CASE("overlap matches a brute recount on random data") {
  const std::vector<CommEvent> events = random_events(88, 400);
  const EventStore store = store_from(events);
  const StoreView view = store.view();
  const std::vector<PersonId> people = {"ann", "bob", "cat", "dan", "eve"};

  Rng rng(4242);
  for (int probe = 0; probe < 100; ++probe) {
    const PersonId& i = people[rng.index(people.size())];
    const PersonId& j = people[rng.index(people.size())];
    if (i == j) continue;
    const Timestamp t = 900 + static_cast<Timestamp>(rng.index(5500));

    std::map<PersonId, std::int64_t> wi, wj;
    std::int64_t si = 0, sj = 0;
    for (const PersonId& k : people) {
      if (k != i) {
        wi[k] = brute_pair_count(events, i, k, t);
        si += wi[k];
      }
      if (k != j) {
        wj[k] = brute_pair_count(events, j, k, t);
        sj += wj[k];
      }
    }
    const double denom = static_cast<double>(si + sj - 2 * wi[j]);
    const OverlapScore got = overlap_score(view, i, j, t);
    if (denom <= 0.0) {
      CHECK(got.degenerate);
      CHECK(got.value == 0.0);
      continue;
    }
    double numer = 0.0;
    for (const PersonId& k : people) {
      if (k == i || k == j) continue;
      if (wi[k] > 0 && wj[k] > 0) numer += static_cast<double>(wi[k] + wj[k]);
    }
    CHECK_FALSE(got.degenerate);
    CHECK(got.value == doctest::Approx(numer / denom).epsilon(1e-12));
    CHECK(overlap_score(view, j, i, t).value == got.value);
  }
}

TEST_CASE("appending future events never changes a score") {
  const std::vector<CommEvent> past = random_events(5, 300);
  const Timestamp t = 7000;  // past all generated timestamps
  std::vector<CommEvent> extended = past;
  for (CommEvent e : random_events(6, 150)) {
    e.timestamp += 10'000;  // strictly at or after t
    extended.push_back(e);
  }
  const StoreView before = store_from(past).view();
  const StoreView after = store_from(extended).view();
  const std::vector<PersonId> people = {"ann", "bob", "cat", "dan", "eve"};

  for (const PersonId& a : people) {
    for (const PersonId& b : people) {
      if (a == b) continue;
      CHECK(frequency_score(before, a, b, t) == frequency_score(after, a, b, t));
      CHECK(recency_score(before, a, b, t) == recency_score(after, a, b, t));
      CHECK(duration_score(before, a, b, t) == duration_score(after, a, b, t));
      CHECK(volume_score(before, a, b, t) == volume_score(after, a, b, t));
      CHECK(overlap_score(before, a, b, t).value == overlap_score(after, a, b, t).value);
    }
  }
}

TEST_CASE("random_ranking is a seeded permutation") {
  const std::vector<PersonId> contacts = {"h", "c", "a", "f", "b", "g", "d", "e"};
  const TieRanking r1 = random_ranking("ego", 99, contacts, 7);
  const TieRanking r2 = random_ranking("ego", 99, contacts, 7);
  CHECK(r1.ego == "ego");
  CHECK(r1.time == 99);
  CHECK(r1.alters == r2.alters);

  std::vector<PersonId> sorted_in = contacts;
  std::sort(sorted_in.begin(), sorted_in.end());
  // Input order is normalized away before shuffling.
  CHECK(random_ranking("ego", 99, sorted_in, 7).alters == r1.alters);

  std::vector<PersonId> check = r1.alters;
  std::sort(check.begin(), check.end());
  CHECK(check == sorted_in);

  CHECK(random_ranking("ego", 99, contacts, 8).alters != r1.alters);
}

TEST_CASE("baseline_ranking sorts descending with id tie-breaks") {
  std::vector<CommEvent> events;
  Timestamp ts = 1000;
  auto burst = [&](const PersonId& alter, int n) {
    for (int i = 0; i < n; ++i) events.push_back({ts += 10, "ego", alter, ChannelKind::Text, 1});
  };
  burst("pa", 5);
  burst("qb", 3);
  burst("rc", 3);
  burst("sd", 7);
  const EventStore store = store_from(events);
  const Timestamp t = 10'000;

  const TieRanking vol = baseline_ranking(BaselineKind::Volume, store.view(), "ego", t);
  CHECK(vol.alters == std::vector<PersonId>{"sd", "pa", "qb", "rc"});

  // Recency follows the last event time, which is the burst order.
  const TieRanking rec = baseline_ranking(BaselineKind::Recency, store.view(), "ego", t);
  CHECK(rec.alters == std::vector<PersonId>{"sd", "rc", "qb", "pa"});

  // The duration winner is whoever appeared first.
  const TieRanking dur = baseline_ranking(BaselineKind::Duration, store.view(), "ego", t);
  CHECK(dur.alters.front() == "pa");

  const TieRanking rnd = baseline_ranking(BaselineKind::Random, store.view(), "ego", t, 31);
  CHECK(rnd.alters == random_ranking("ego", t, store.view().contacts_of("ego", t), 31).alters);
  std::vector<PersonId> sorted_rnd = rnd.alters;
  std::sort(sorted_rnd.begin(), sorted_rnd.end());
  CHECK(sorted_rnd == std::vector<PersonId>{"pa", "qb", "rc", "sd"});
}
