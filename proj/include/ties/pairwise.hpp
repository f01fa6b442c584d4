#pragma once
// Pairwise-comparison ranking: any comparator that estimates the
// probability of one alter outranking another is turned into a full
// ranking and a continuous tie-strength signal.
//
// The pipeline is: comparator probabilities -> symmetrized matrix M
// (M[i][j] + M[j][i] = 1, diagonal 1/2) -> sign matrix in {-1, 0, +1}
// -> per-alter Borda count B = wins - losses -> winning percentage
// (B + (n-1)) / (2(n-1)) in [0, 1].

#include <cstdint>
#include <map>
#include <vector>

#include "ties/event_store.hpp"
#include "ties/survey.hpp"

namespace ties {

// Estimates the probability that alter a has a stronger tie to ego than
// alter b, judged from communication history strictly before t.
// Implementations must be safe for concurrent read-only calls.
class PairwiseComparator {
 public:
  virtual ~PairwiseComparator() = default;
  virtual double compare(const StoreView& store, const PersonId& ego, const PersonId& a,
                         const PersonId& b, Timestamp t) const = 0;
};

struct PairwiseMatrix {
  PersonId ego;
  Timestamp time = 0;
  std::vector<PersonId> alters;
  std::vector<double> probs;  // n*n row-major

  std::size_t size() const { return alters.size(); }
  double at(std::size_t i, std::size_t j) const { return probs[i * alters.size() + j]; }

  // Off-diagonal probability mass of one row, the Borda tie-breaker.
  double row_mass(std::size_t i) const;
};

// Raw comparator outputs are not guaranteed antisymmetric; entries are
// symmetrized as M[i][j] = (p_ij + 1 - p_ji) / 2 with M[j][i] = 1 - M[i][j].
// Comparator failures are rethrown as ModelError naming the pair.
PairwiseMatrix build_matrix(const PairwiseComparator& comparator, const StoreView& store,
                            const PersonId& ego, const std::vector<PersonId>& alters,
                            Timestamp t);

struct SignMatrix {
  std::vector<PersonId> alters;
  std::vector<std::int8_t> entries;  // n*n row-major, antisymmetric

  std::size_t size() const { return alters.size(); }
  std::int8_t at(std::size_t i, std::size_t j) const { return entries[i * alters.size() + j]; }
};

// Entry +1 where M[i][j] > 1/2, 0 where equal, -1 where below. Signs are
// assigned per unordered pair from the canonical upper-triangle entry,
// so the result is exactly antisymmetric.
SignMatrix sign_matrix(const PairwiseMatrix& matrix);

struct BordaResult {
  PersonId alter;
  int borda = 0;  // wins - losses, in [-(n-1), n-1]
  int wins = 0;
  int losses = 0;
  int ties = 0;
};

std::vector<BordaResult> borda_counts(const SignMatrix& signs);

// (B + (n-1)) / (2(n-1)), equal by construction to
// (wins + 0.5 * ties) / (wins + losses + ties). A lone alter (n = 1) is
// assigned the no-information value 0.5.
double winning_percentage(const BordaResult& result, std::size_t n);

// Descending Borda count; ties break by descending row probability mass,
// then by alter id.
TieRanking rank_from_borda(const PairwiseMatrix& matrix, const std::vector<BordaResult>& results);

// Convenience: comparator -> matrix -> Borda -> ranking over the ego's
// contacts before t.
TieRanking comparator_ranking(const PairwiseComparator& comparator, const StoreView& store,
                              const PersonId& ego, Timestamp t);

struct SignalSample {
  Timestamp time = 0;
  double value = 0.0;  // winning percentage in [0, 1]
};

// Winning-percentage series for one directed ego -> alter edge. Sample
// times are strictly increasing.
struct TieSignal {
  PersonId ego;
  PersonId alter;
  std::vector<SignalSample> samples;

  // Value at an exact sample time, if present.
  std::optional<double> value_at(Timestamp t) const;
};

// Evaluates the comparator over every grid time: alters in the ego's
// contact set at a time get a winning-percentage sample there, alters
// not yet contacted get none. Grid times must be strictly increasing.
// Grid points are independent and evaluated in parallel.
std::map<PersonId, TieSignal> signal_series(const PairwiseComparator& comparator,
                                            const StoreView& store, const PersonId& ego,
                                            const std::vector<Timestamp>& t_grid);

}  // namespace ties
