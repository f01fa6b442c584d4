#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ties/baselines.hpp"
#include "ties/models.hpp"
#include "ties/pairwise.hpp"
#include "ties/parallel.hpp"
#include "ties/rng.hpp"

using namespace ties;

namespace {

// Fixed comparator outputs per ordered (a, b) pair; unlisted pairs get 1/2.
class TableComparator : public PairwiseComparator {
 public:
  void set(const PersonId& a, const PersonId& b, double p) { table_[{a, b}] = p; }
  double compare(const StoreView&, const PersonId&, const PersonId& a, const PersonId& b,
                 Timestamp) const override {
    const auto it = table_.find({a, b});
    return it == table_.end() ? 0.5 : it->second;
  }

 private:
  std::map<std::pair<PersonId, PersonId>, double> table_;
};

class ThrowingComparator : public PairwiseComparator {
 public:
  double compare(const StoreView&, const PersonId&, const PersonId&, const PersonId&,
                 Timestamp) const override {
    throw std::runtime_error("boom");
  }
};

class OutOfRangeComparator : public PairwiseComparator {
 public:
  double compare(const StoreView&, const PersonId&, const PersonId&, const PersonId&,
                 Timestamp) const override {
    return 1.5;
  }
};

SignMatrix random_signs(Rng& rng, std::size_t n) {
  SignMatrix m;
  for (std::size_t i = 0; i < n; ++i) m.alters.push_back("a" + std::to_string(i));
  m.entries.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto s = static_cast<std::int8_t>(static_cast<int>(rng.index(3)) - 1);
      m.entries[i * n + j] = s;
      m.entries[j * n + i] = static_cast<std::int8_t>(-s);
    }
  }
  return m;
}

EventStore store_with_counts(const std::vector<std::pair<PersonId, int>>& counts) {
  EventStore::Builder b;
  Timestamp ts = 1000;
  for (const auto& [alter, n] : counts) {
    for (int i = 0; i < n; ++i) {
      b.add({ts += 10, "ego", alter, ChannelKind::Text, 5});
    }
  }
  return std::move(b).build();
}

}  // namespace

TEST_CASE("build_matrix symmetrizes asymmetric comparator output") {
  TableComparator cmp;
  cmp.set("a", "b", 0.9);
  cmp.set("b", "a", 0.3);
  EventStore store;
  const PairwiseMatrix m = build_matrix(cmp, store.view(), "ego", {"a", "b", "c"}, 500);

  CHECK(m.ego == "ego");
  CHECK(m.time == 500);
  REQUIRE(m.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(m.at(i, i) == 0.5);
  CHECK(m.at(0, 1) == doctest::Approx((0.9 + 1.0 - 0.3) / 2.0).epsilon(1e-15));
  CHECK(m.at(1, 0) == doctest::Approx(1.0 - m.at(0, 1)).epsilon(1e-15));
  CHECK(m.at(0, 2) == 0.5);  // untouched pair stays at the neutral value
  CHECK(m.row_mass(0) == doctest::Approx(m.at(0, 1) + m.at(0, 2)).epsilon(1e-15));
}

TEST_CASE("build_matrix rejects unsorted alters and broken comparators") {
  TableComparator cmp;
  EventStore store;
  CHECK_THROWS_AS(build_matrix(cmp, store.view(), "e", {"b", "a"}, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_matrix(cmp, store.view(), "e", {"a", "a"}, 10), std::invalid_argument);

  ThrowingComparator bad;
  CHECK_THROWS_AS(build_matrix(bad, store.view(), "e", {"a", "b"}, 10), ModelError);
  OutOfRangeComparator wild;
  CHECK_THROWS_AS(build_matrix(wild, store.view(), "e", {"a", "b"}, 10), ModelError);
}

TEST_CASE("sign_matrix is antisymmetric and zeroes exact halves") {
  Rng rng(31);
  TableComparator cmp;
  std::vector<PersonId> alters;
  for (int i = 0; i < 6; ++i) alters.push_back("p" + std::to_string(i));
  for (const PersonId& a : alters) {
    for (const PersonId& b : alters) {
      if (a != b) cmp.set(a, b, rng.uniform01());
    }
  }
  cmp.set("p0", "p1", 0.5);
  cmp.set("p1", "p0", 0.5);  // symmetrizes to exactly 1/2

  EventStore store;
  const PairwiseMatrix m = build_matrix(cmp, store.view(), "e", alters, 10);
  const SignMatrix s = sign_matrix(m);
  REQUIRE(s.size() == m.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.at(i, i) == 0);
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      CHECK(s.at(i, j) == -s.at(j, i));
      const double p = m.at(i, j);
      const std::int8_t want = p > 0.5 ? 1 : (p < 0.5 ? -1 : 0);
      CHECK(s.at(i, j) == want);
    }
  }
  CHECK(s.at(0, 1) == 0);
}

TEST_CASE("borda_counts matches a brute row tally") {
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const SignMatrix m = random_signs(rng, n);
    const std::vector<BordaResult> results = borda_counts(m);
    REQUIRE(results.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      int wins = 0, losses = 0, ties = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (m.at(i, j) > 0) ++wins;
        else if (m.at(i, j) < 0) ++losses;
        else ++ties;
      }
      CHECK(results[i].alter == m.alters[i]);
      CHECK(results[i].wins == wins);
      CHECK(results[i].losses == losses);
      CHECK(results[i].ties == ties);
      CHECK(results[i].borda == wins - losses);
    }
  }
}

TEST_CASE("both winning-percentage closed forms agree exactly") {
  for (int n = 2; n <= 12; ++n) {
    for (int w = 0; w < n; ++w) {
      for (int l = 0; w + l < n; ++l) {
        const int t = (n - 1) - w - l;
        BordaResult r{"x", w - l, w, l, t};
        const double wp = winning_percentage(r, static_cast<std::size_t>(n));
        CHECK(wp == (r.borda + (n - 1.0)) / (2.0 * (n - 1.0)));
        CHECK(wp == (w + 0.5 * t) / (n - 1.0));
        CHECK(wp >= 0.0);
        CHECK(wp <= 1.0);
      }
    }
  }
}

TEST_CASE("a lone alter gets the no-information value") {
  CHECK(winning_percentage(BordaResult{"only", 0, 0, 0, 0}, 1) == 0.5);
}

TEST_CASE("rank_from_borda breaks Borda ties by row mass, then id") {
  PairwiseMatrix m;
  m.ego = "e";
  m.time = 7;
  m.alters = {"a", "b", "c"};
  // a beats both; b and c tie each other but differ in how badly they
  // lose to a, which separates their row masses.
  m.probs = {0.5, 0.8, 0.6,   //
             0.2, 0.5, 0.5,   //
             0.4, 0.5, 0.5};
  const TieRanking by_mass = rank_from_borda(m, borda_counts(sign_matrix(m)));
  CHECK(by_mass.ego == "e");
  CHECK(by_mass.time == 7);
  CHECK(by_mass.alters == std::vector<PersonId>{"a", "c", "b"});

  // Identical rows for b and c: the id decides.
  m.probs = {0.5, 0.7, 0.7,   //
             0.3, 0.5, 0.5,   //
             0.3, 0.5, 0.5};
  const TieRanking by_id = rank_from_borda(m, borda_counts(sign_matrix(m)));
  CHECK(by_id.alters == std::vector<PersonId>{"a", "b", "c"});

  CHECK_THROWS_AS(rank_from_borda(m, {}), std::invalid_argument);
}

TEST_CASE("comparator_ranking on a volume comparator matches the baseline") {
  const EventStore store = store_with_counts({{"pa", 5}, {"qb", 3}, {"rc", 3}, {"sd", 7}, {"te", 1}});
  const Timestamp t = 100'000;
  const TieRanking direct = baseline_ranking(BaselineKind::Volume, store.view(), "ego", t);
  const TieRanking via_borda =
      comparator_ranking(ScoreComparator(BaselineKind::Volume), store.view(), "ego", t);
  CHECK(direct.alters == std::vector<PersonId>{"sd", "pa", "qb", "rc", "te"});
  CHECK(via_borda.alters == direct.alters);
  CHECK(via_borda.ego == direct.ego);
  CHECK(via_borda.time == direct.time);
}

TEST_CASE("signal_series samples match a per-time matrix rebuild") {
  const EventStore store = store_with_counts({{"pa", 4}, {"qb", 2}, {"rc", 6}});
  // pa's events span ts 1010..1040, qb 1050..1060, rc 1070..1120.
  const std::vector<Timestamp> grid = {1015, 1055, 1100, 5000};
  const ScoreComparator cmp(BaselineKind::Volume);
  const StoreView view = store.view();
  const auto signals = signal_series(cmp, view, "ego", grid);

  for (const Timestamp t : grid) {
    const std::vector<PersonId> contacts = view.contacts_of("ego", t);
    const PairwiseMatrix m = build_matrix(cmp, view, "ego", contacts, t);
    const std::vector<BordaResult> results = borda_counts(sign_matrix(m));
    for (const BordaResult& r : results) {
      REQUIRE(signals.count(r.alter) == 1);
      const std::optional<double> got = signals.at(r.alter).value_at(t);
      REQUIRE(got.has_value());
      CHECK(*got == winning_percentage(r, contacts.size()));
    }
    // Alters not yet contacted have no sample at this time.
    for (const auto& [alter, signal] : signals) {
      const bool contacted =
          std::find(contacts.begin(), contacts.end(), alter) != contacts.end();
      CHECK(signal.value_at(t).has_value() == contacted);
    }
  }

  REQUIRE(signals.count("qb") == 1);
  const TieSignal& qb = signals.at("qb");
  CHECK(qb.ego == "ego");
  CHECK(qb.alter == "qb");
  CHECK(qb.samples.size() == 3);  // not yet contacted at 1015
  for (std::size_t i = 1; i < qb.samples.size(); ++i) {
    CHECK(qb.samples[i - 1].time < qb.samples[i].time);
  }
  CHECK_FALSE(qb.value_at(1234).has_value());
}

TEST_CASE("signal_series is bit-identical across thread counts") {
  const EventStore store = store_with_counts({{"pa", 4}, {"qb", 2}, {"rc", 6}, {"sd", 9}});
  std::vector<Timestamp> grid;
  for (Timestamp t = 1005; t < 1200; t += 7) grid.push_back(t);
  const ScoreComparator cmp(BaselineKind::Frequency);

  parallel::set_max_threads(1);
  const auto serial = signal_series(cmp, store.view(), "ego", grid);
  parallel::set_max_threads(4);
  const auto threaded = signal_series(cmp, store.view(), "ego", grid);
  parallel::set_max_threads(0);

  REQUIRE(serial.size() == threaded.size());
  for (const auto& [alter, signal] : serial) {
    REQUIRE(threaded.count(alter) == 1);
    const TieSignal& other = threaded.at(alter);
    REQUIRE(signal.samples.size() == other.samples.size());
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
      CHECK(signal.samples[i].time == other.samples[i].time);
      CHECK(signal.samples[i].value == other.samples[i].value);
    }
  }
}

TEST_CASE("signal_series rejects a non-increasing grid") {
  EventStore store;
  const ScoreComparator cmp(BaselineKind::Volume);
  CHECK_THROWS_AS(signal_series(cmp, store.view(), "e", {10, 10}), std::invalid_argument);
  CHECK_THROWS_AS(signal_series(cmp, store.view(), "e", {20, 10}), std::invalid_argument);
}
