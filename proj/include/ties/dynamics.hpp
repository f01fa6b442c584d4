#pragma once
// Analyses over evolving tie signals: per-relationship-class averages,
// transition-point statistics with Gaussian KDE, and triadic
// gender/motif structure.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ties/event_store.hpp"
#include "ties/pairwise.hpp"
#include "ties/survey.hpp"

namespace ties {

// Directed ego -> alter signal lookup.
using SignalTable = std::map<std::pair<PersonId, PersonId>, TieSignal>;

// Relation label per directed (ego, alter) edge; when an alter appears
// in several surveys the latest wave's label wins.
std::map<std::pair<PersonId, PersonId>, Relation> relation_labels(
    const std::vector<SurveyResponse>& surveys);

struct RelationClassSeries {
  Relation relation = Relation::Other;
  std::vector<Timestamp> times;
  std::vector<double> mean;         // mean signal over labeled edges present at t
  std::vector<std::int64_t> count;  // edges contributing at t
};

// One series per relation present in the labels; edges lacking a sample
// at a grid time are skipped there.
std::vector<RelationClassSeries> relation_class_series(
    const SignalTable& signals,
    const std::map<std::pair<PersonId, PersonId>, Relation>& labels,
    const std::vector<Timestamp>& grid);

struct TransitionStat {
  PersonId ego;
  PersonId alter;
  std::size_t index = 0;     // sample index of the largest consecutive jump
  double difference = 0.0;   // mean(after index) - mean(up to and including index)
};

// Requires >= 3 samples; fewer yields no statistic. Argmax ties resolve
// to the earliest index.
std::optional<TransitionStat> transition_stat(const TieSignal& signal);

class GaussianKde {
 public:
  // Default bandwidth is Silverman's rule:
  //   0.9 * min(sd, IQR / 1.34) * n^(-1/5).
  // Zero-spread samples give a degenerate density (all mass at one
  // point); evaluate returns 0 everywhere and spike_at() holds the
  // location.
  explicit GaussianKde(std::vector<double> samples,
                       std::optional<double> bandwidth = std::nullopt);

  double bandwidth() const { return bandwidth_; }
  bool degenerate() const { return degenerate_; }
  double spike_at() const { return spike_; }

  double evaluate(double x) const;
  std::vector<double> evaluate(const std::vector<double>& grid) const;

  static double silverman_bandwidth(const std::vector<double>& samples);

 private:
  std::vector<double> samples_;
  double bandwidth_ = 0.0;
  bool degenerate_ = false;
  double spike_ = 0.0;
};

struct Triad {
  std::array<PersonId, 3> members;  // sorted by id
};

// Participant triples whose three pairs each have at least min_events
// events inside every [start, end) semester interval.
std::vector<Triad> extract_stable_triads(
    const StoreView& store, const std::vector<std::pair<Timestamp, Timestamp>>& semesters,
    int min_events);

enum class TriadGenderType { TwoM1F, TwoF1M };
const char* triad_gender_type_name(TriadGenderType type);

struct AsymmetrySeries {
  TriadGenderType type = TriadGenderType::TwoM1F;
  std::vector<Timestamp> times;
  std::vector<double> mean;         // mean |majority-internal - majority->minority|
  std::vector<std::int64_t> count;  // triads contributing at t
};

// Mixed-gender triads only; a triad contributes at a grid time only if
// all six directed signals have samples there.
std::vector<AsymmetrySeries> gender_asymmetry(const std::vector<Triad>& triads,
                                              const SignalTable& signals,
                                              const std::map<PersonId, Gender>& genders,
                                              const std::vector<Timestamp>& grid);

enum class MotifLabel { TwoAgainstOne, WeakLink, Equalist };
const char* motif_label_name(MotifLabel label);

// Classification on the three undirected pair strengths, sorted
// s1 <= s2 <= s3: Equalist when s3 - s1 <= eps; else WeakLink when the
// bottom gap exceeds eps but the top gap does not (one weak pair); else
// TwoAgainstOne (one strong pair, the two weak pairs sharing the
// isolated member).
MotifLabel classify_motif(const std::array<double, 3>& pair_strengths, double eps);

struct MotifCountSeries {
  std::vector<Timestamp> times;
  std::vector<std::int64_t> two_against_one;
  std::vector<std::int64_t> weak_link;
  std::vector<std::int64_t> equalist;
  std::vector<std::int64_t> classified;  // triads with all six signals at t
};

MotifCountSeries motif_counts(const std::vector<Triad>& triads, const SignalTable& signals,
                              const std::vector<Timestamp>& grid, double eps);

// Median of pairwise slopes; robust trend check for count series.
double theil_sen_slope(const std::vector<Timestamp>& times, const std::vector<double>& values);

}  // namespace ties
