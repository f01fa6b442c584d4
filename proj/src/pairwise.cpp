#include "ties/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>

#include "ties/core.hpp"
#include "ties/parallel.hpp"

namespace ties {

double PairwiseMatrix::row_mass(std::size_t i) const {
  const std::size_t n = alters.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) sum += probs[i * n + j];
  }
  return sum;
}

PairwiseMatrix build_matrix(const PairwiseComparator& comparator, const StoreView& store,
                            const PersonId& ego, const std::vector<PersonId>& alters,
                            Timestamp t) {
  const std::size_t n = alters.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (!(alters[i - 1] < alters[i])) {
      throw std::invalid_argument("build_matrix: alters must be sorted and distinct");
    }
  }
  PairwiseMatrix m;
  m.ego = ego;
  m.time = t;
  m.alters = alters;
  m.probs.assign(n * n, 0.5);
  if (n < 2) return m;

  // Unordered pairs are independent work items; each fills exactly its
  // own two cells, so the parallel build is deterministic.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::exception_ptr failure;
  parallel::parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    try {
      const double p_ij = comparator.compare(store, ego, m.alters[i], m.alters[j], t);
      const double p_ji = comparator.compare(store, ego, m.alters[j], m.alters[i], t);
      if (!(p_ij >= 0.0 && p_ij <= 1.0) || !(p_ji >= 0.0 && p_ji <= 1.0)) {
        throw ModelError("comparator returned probability outside [0, 1] for pair " +
                         m.alters[i] + "/" + m.alters[j]);
      }
      const double upper = (p_ij + 1.0 - p_ji) / 2.0;
      m.probs[i * n + j] = upper;
      m.probs[j * n + i] = 1.0 - upper;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(ties_build_matrix_failure)
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  });
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      throw ModelError("comparator failed for ego " + ego + ": " + e.what());
    }
  }
  return m;
}

SignMatrix sign_matrix(const PairwiseMatrix& matrix) {
  const std::size_t n = matrix.size();
  SignMatrix s;
  s.alters = matrix.alters;
  s.entries.assign(n * n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = matrix.at(i, j);
      const std::int8_t sign = p > 0.5 ? std::int8_t{1} : (p < 0.5 ? std::int8_t{-1} : std::int8_t{0});
      s.entries[i * n + j] = sign;
      s.entries[j * n + i] = static_cast<std::int8_t>(-sign);
    }
  }
  return s;
}

std::vector<BordaResult> borda_counts(const SignMatrix& signs) {
  const std::size_t n = signs.size();
  std::vector<BordaResult> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    BordaResult& r = out[i];
    r.alter = signs.alters[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::int8_t s = signs.at(i, j);
      if (s > 0) {
        ++r.wins;
      } else if (s < 0) {
        ++r.losses;
      } else {
        ++r.ties;
      }
    }
    r.borda = r.wins - r.losses;
  }
  return out;
}

double winning_percentage(const BordaResult& result, std::size_t n) {
  if (n < 2) return 0.5;
  const double span = static_cast<double>(n - 1);
  return (static_cast<double>(result.borda) + span) / (2.0 * span);
}

TieRanking rank_from_borda(const PairwiseMatrix& matrix, const std::vector<BordaResult>& results) {
  if (matrix.size() != results.size()) {
    throw std::invalid_argument("rank_from_borda: matrix/result size mismatch");
  }
  const std::size_t n = results.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) mass[i] = matrix.row_mass(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].borda != results[b].borda) return results[a].borda > results[b].borda;
    if (mass[a] != mass[b]) return mass[a] > mass[b];
    return results[a].alter < results[b].alter;
  });
  TieRanking ranking;
  ranking.ego = matrix.ego;
  ranking.time = matrix.time;
  ranking.alters.reserve(n);
  for (std::size_t i : order) ranking.alters.push_back(results[i].alter);
  return ranking;
}

TieRanking comparator_ranking(const PairwiseComparator& comparator, const StoreView& store,
                              const PersonId& ego, Timestamp t) {
  const std::vector<PersonId> contacts = store.contacts_of(ego, t);
  const PairwiseMatrix m = build_matrix(comparator, store, ego, contacts, t);
  return rank_from_borda(m, borda_counts(sign_matrix(m)));
}

std::optional<double> TieSignal::value_at(Timestamp t) const {
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const SignalSample& s, Timestamp v) { return s.time < v; });
  if (it == samples.end() || it->time != t) return std::nullopt;
  return it->value;
}

std::map<PersonId, TieSignal> signal_series(const PairwiseComparator& comparator,
                                            const StoreView& store, const PersonId& ego,
                                            const std::vector<Timestamp>& t_grid) {
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i - 1] >= t_grid[i]) {
      throw std::invalid_argument("signal_series: grid times must be strictly increasing");
    }
  }
  // One slot per grid time, merged in time order afterwards.
  std::vector<std::vector<std::pair<PersonId, double>>> slots(t_grid.size());
  std::exception_ptr failure;
  parallel::parallel_for(t_grid.size(), [&](std::size_t k) {
    try {
      const Timestamp t = t_grid[k];
      const std::vector<PersonId> contacts = store.contacts_of(ego, t);
      if (contacts.empty()) return;
      const PairwiseMatrix m = build_matrix(comparator, store, ego, contacts, t);
      const std::vector<BordaResult> borda = borda_counts(sign_matrix(m));
      auto& slot = slots[k];
      slot.reserve(contacts.size());
      for (const BordaResult& r : borda) {
        slot.emplace_back(r.alter, winning_percentage(r, contacts.size()));
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(ties_signal_series_failure)
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  });
  if (failure) std::rethrow_exception(failure);

  std::map<PersonId, TieSignal> out;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    for (const auto& [alter, value] : slots[k]) {
      TieSignal& sig = out[alter];
      if (sig.samples.empty()) {
        sig.ego = ego;
        sig.alter = alter;
      }
      sig.samples.push_back({t_grid[k], value});
    }
  }
  return out;
}

}  // namespace ties
