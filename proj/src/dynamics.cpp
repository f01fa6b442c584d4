#include "ties/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ties/core.hpp"

namespace ties {

std::map<std::pair<PersonId, PersonId>, Relation> relation_labels(
    const std::vector<SurveyResponse>& surveys) {
  // Latest survey time wins per directed edge.
  std::map<std::pair<PersonId, PersonId>, std::pair<Timestamp, Relation>> latest;
  for (const SurveyResponse& s : surveys) {
    for (const AlterAnswer& a : s.answers) {
      auto key = std::make_pair(s.ego, a.alter);
      auto it = latest.find(key);
      if (it == latest.end() || s.time >= it->second.first) {
        latest[key] = {s.time, a.relation};
      }
    }
  }
  std::map<std::pair<PersonId, PersonId>, Relation> out;
  for (const auto& [key, value] : latest) out.emplace(key, value.second);
  return out;
}

std::vector<RelationClassSeries> relation_class_series(
    const SignalTable& signals,
    const std::map<std::pair<PersonId, PersonId>, Relation>& labels,
    const std::vector<Timestamp>& grid) {
  std::map<Relation, RelationClassSeries> by_class;
  for (const auto& [edge, relation] : labels) {
    auto sig = signals.find(edge);
    if (sig == signals.end()) continue;
    RelationClassSeries& series = by_class[relation];
    if (series.times.empty()) {
      series.relation = relation;
      series.times = grid;
      series.mean.assign(grid.size(), 0.0);
      series.count.assign(grid.size(), 0);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::optional<double> v = sig->second.value_at(grid[i]);
      if (!v) continue;
      series.mean[i] += *v;
      ++series.count[i];
    }
  }
  std::vector<RelationClassSeries> out;
  for (auto& [relation, series] : by_class) {
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      if (series.count[i] > 0) series.mean[i] /= static_cast<double>(series.count[i]);
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::optional<TransitionStat> transition_stat(const TieSignal& signal) {
  const std::vector<SignalSample>& s = signal.samples;
  if (s.size() < 3) return std::nullopt;
  std::size_t best = 0;
  double best_jump = -1.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double jump = std::abs(s[k + 1].value - s[k].value);
    if (jump > best_jump) {  // strict: earliest index wins ties
      best_jump = jump;
      best = k;
    }
  }
  double before = 0.0;
  for (std::size_t k = 0; k <= best; ++k) before += s[k].value;
  before /= static_cast<double>(best + 1);
  double after = 0.0;
  for (std::size_t k = best + 1; k < s.size(); ++k) after += s[k].value;
  after /= static_cast<double>(s.size() - best - 1);
  return TransitionStat{signal.ego, signal.alter, best, after - before};
}

double GaussianKde::silverman_bandwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&sorted](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);

  double scale = sd;
  if (iqr > 0.0) scale = std::min(sd, iqr / 1.34);
  if (scale <= 0.0) return 0.0;
  return 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
}

GaussianKde::GaussianKde(std::vector<double> samples, std::optional<double> bandwidth)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw std::invalid_argument("GaussianKde: need at least 2 samples");
  }
  bandwidth_ = bandwidth ? *bandwidth : silverman_bandwidth(samples_);
  if (bandwidth_ <= 0.0) {
    degenerate_ = true;
    spike_ = samples_.front();
    bandwidth_ = 0.0;
  }
}

double GaussianKde::evaluate(double x) const {
  if (degenerate_) return 0.0;  // mass collapsed to spike_at()
  const double inv_h = 1.0 / bandwidth_;
  const double norm =
      inv_h / (std::sqrt(2.0 * M_PI) * static_cast<double>(samples_.size()));
  double sum = 0.0;
  for (double s : samples_) {
    const double u = (x - s) * inv_h;
    sum += std::exp(-0.5 * u * u);
  }
  return norm * sum;
}

std::vector<double> GaussianKde::evaluate(const std::vector<double>& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = evaluate(grid[i]);
  return out;
}

std::vector<Triad> extract_stable_triads(
    const StoreView& store, const std::vector<std::pair<Timestamp, Timestamp>>& semesters,
    int min_events) {
  if (semesters.empty()) throw std::invalid_argument("extract_stable_triads: no semesters");
  if (min_events < 1) throw std::invalid_argument("extract_stable_triads: min_events < 1");

  const std::vector<PersonId>& participants = store.participants();
  auto stable_pair = [&](const PersonId& a, const PersonId& b) {
    for (const auto& [start, end] : semesters) {
      const std::int64_t inside =
          store.pair_event_count(a, b, end) - store.pair_event_count(a, b, start);
      if (inside < min_events) return false;
    }
    return true;
  };

  // Stable-pair graph first; triads are its triangles.
  const std::size_t n = participants.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (stable_pair(participants[i], participants[j])) adj[i].push_back(j);
    }
  }
  std::vector<Triad> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a + 1 < adj[i].size(); ++a) {
      for (std::size_t b = a + 1; b < adj[i].size(); ++b) {
        const std::size_t j = adj[i][a];
        const std::size_t k = adj[i][b];
        if (std::find(adj[j].begin(), adj[j].end(), k) != adj[j].end()) {
          out.push_back({{participants[i], participants[j], participants[k]}});
        }
      }
    }
  }
  return out;  // participants are sorted, so members and list are ordered
}

const char* triad_gender_type_name(TriadGenderType type) {
  return type == TriadGenderType::TwoM1F ? "2M1F" : "2F1M";
}

namespace {

// Six directed values for a triad at one time, or nothing.
std::optional<std::array<double, 6>> triad_values(const Triad& triad,
                                                  const SignalTable& signals, Timestamp t) {
  std::array<double, 6> values{};
  std::size_t at = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      auto it = signals.find({triad.members[i], triad.members[j]});
      if (it == signals.end()) return std::nullopt;
      const std::optional<double> v = it->second.value_at(t);
      if (!v) return std::nullopt;
      values[at++] = *v;
    }
  }
  // Order: 0->1, 0->2, 1->0, 1->2, 2->0, 2->1.
  return values;
}

double directed(const std::array<double, 6>& v, std::size_t from, std::size_t to) {
  static constexpr int kSlot[3][3] = {{-1, 0, 1}, {2, -1, 3}, {4, 5, -1}};
  return v[static_cast<std::size_t>(kSlot[from][to])];
}

}  // namespace

std::vector<AsymmetrySeries> gender_asymmetry(const std::vector<Triad>& triads,
                                              const SignalTable& signals,
                                              const std::map<PersonId, Gender>& genders,
                                              const std::vector<Timestamp>& grid) {
  std::vector<AsymmetrySeries> out(2);
  out[0].type = TriadGenderType::TwoM1F;
  out[1].type = TriadGenderType::TwoF1M;
  for (AsymmetrySeries& series : out) {
    series.times = grid;
    series.mean.assign(grid.size(), 0.0);
    series.count.assign(grid.size(), 0);
  }

  for (const Triad& triad : triads) {
    int males = 0;
    int females = 0;
    std::array<Gender, 3> g{};
    bool known = true;
    for (std::size_t i = 0; i < 3; ++i) {
      auto it = genders.find(triad.members[i]);
      if (it == genders.end() || it->second == Gender::Unspecified) {
        known = false;
        break;
      }
      g[i] = it->second;
      (it->second == Gender::M ? males : females) += 1;
    }
    if (!known) continue;
    if (!((males == 2 && females == 1) || (females == 2 && males == 1))) continue;

    const Gender majority = males == 2 ? Gender::M : Gender::F;
    std::array<std::size_t, 2> maj{};
    std::size_t minority = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (g[i] == majority) {
        maj[at++] = i;
      } else {
        minority = i;
      }
    }
    AsymmetrySeries& series = out[majority == Gender::M ? 0 : 1];

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const std::optional<std::array<double, 6>> v = triad_values(triad, signals, grid[gi]);
      if (!v) continue;
      const double internal =
          (directed(*v, maj[0], maj[1]) + directed(*v, maj[1], maj[0])) / 2.0;
      const double cross =
          (directed(*v, maj[0], minority) + directed(*v, maj[1], minority)) / 2.0;
      series.mean[gi] += std::abs(internal - cross);
      ++series.count[gi];
    }
  }

  for (AsymmetrySeries& series : out) {
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      if (series.count[i] > 0) series.mean[i] /= static_cast<double>(series.count[i]);
    }
  }
  return out;
}

const char* motif_label_name(MotifLabel label) {
  switch (label) {
    case MotifLabel::TwoAgainstOne: return "two_against_one";
    case MotifLabel::WeakLink: return "weak_link";
    case MotifLabel::Equalist: return "equalist";
  }
  return "equalist";
}

MotifLabel classify_motif(const std::array<double, 3>& pair_strengths, double eps) {
  std::array<double, 3> s = pair_strengths;
  std::sort(s.begin(), s.end());
  if (s[2] - s[0] <= eps) return MotifLabel::Equalist;
  if (s[1] - s[0] > eps && s[2] - s[1] <= eps) return MotifLabel::WeakLink;
  return MotifLabel::TwoAgainstOne;
}

MotifCountSeries motif_counts(const std::vector<Triad>& triads, const SignalTable& signals,
                              const std::vector<Timestamp>& grid, double eps) {
  MotifCountSeries out;
  out.times = grid;
  out.two_against_one.assign(grid.size(), 0);
  out.weak_link.assign(grid.size(), 0);
  out.equalist.assign(grid.size(), 0);
  out.classified.assign(grid.size(), 0);

  for (const Triad& triad : triads) {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const std::optional<std::array<double, 6>> v = triad_values(triad, signals, grid[gi]);
      if (!v) continue;
      const std::array<double, 3> strengths = {
          (directed(*v, 0, 1) + directed(*v, 1, 0)) / 2.0,
          (directed(*v, 0, 2) + directed(*v, 2, 0)) / 2.0,
          (directed(*v, 1, 2) + directed(*v, 2, 1)) / 2.0,
      };
      ++out.classified[gi];
      switch (classify_motif(strengths, eps)) {
        case MotifLabel::TwoAgainstOne: ++out.two_against_one[gi]; break;
        case MotifLabel::WeakLink: ++out.weak_link[gi]; break;
        case MotifLabel::Equalist: ++out.equalist[gi]; break;
      }
    }
  }
  return out;
}

double theil_sen_slope(const std::vector<Timestamp>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw std::invalid_argument("theil_sen_slope: need two equal-length series");
  }
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    for (std::size_t j = i + 1; j < times.size(); ++j) {
      if (times[j] == times[i]) continue;
      slopes.push_back((values[j] - values[i]) /
                       static_cast<double>(times[j] - times[i]));
    }
  }
  if (slopes.empty()) throw std::invalid_argument("theil_sen_slope: no distinct times");
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  if (n % 2 == 1) return slopes[n / 2];
  return (slopes[n / 2 - 1] + slopes[n / 2]) / 2.0;
}

}  // namespace ties
