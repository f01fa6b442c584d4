#pragma once
// Per-edge feature representations for the learned comparators: an
// 8-dimensional summary vector (frequency, recency, duration, volume
// per channel) and a binned 4-channel count series for the recurrent
// model.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ties/event_store.hpp"

namespace ties {

inline constexpr std::size_t kFeatureCount = 8;
using FeatureVector = std::array<double, kFeatureCount>;

// Fixed layout: call block then text block, each
// [frequency, recency, duration, volume].
enum FeatureIndex : std::size_t {
  kCallFrequency = 0,
  kCallRecency = 1,
  kCallDuration = 2,
  kCallVolume = 3,
  kTextFrequency = 4,
  kTextRecency = 5,
  kTextDuration = 6,
  kTextVolume = 7,
};

const char* feature_name(std::size_t index);

// Summary of the ego<->alter edge from events strictly before t:
// frequency = count / (t - first event), recency = -(t - last event),
// duration = t - first event, volume = event count. A channel with no
// events gets frequency 0, duration 0, volume 0, and recency
// -(t - first event in the whole store), the worst plausible staleness.
FeatureVector feature_vector(const StoreView& store, const PersonId& ego, const PersonId& alter,
                             Timestamp t);

// Componentwise x - y, the input representation for pair classifiers.
FeatureVector difference_features(const FeatureVector& x, const FeatureVector& y);

inline constexpr Timestamp kBinWidth = 21 * kSecondsPerDay;
inline constexpr std::size_t kDefaultMaxBins = 64;

// Per-channel event counts over consecutive 21-day windows ending at t.
// Bins are ordered oldest to newest and the last bin always ends
// exactly at t; the first bin is aligned so the span covers every pair
// event (window count = ceil((t - first)/width)), then truncated to the
// newest max_bins windows.
struct BinnedSeries {
  Timestamp end = 0;
  std::vector<std::int64_t> calls;
  std::vector<std::int64_t> texts;

  std::size_t size() const { return calls.size(); }
};

BinnedSeries binned_timeseries(const StoreView& store, const PersonId& ego, const PersonId& alter,
                               Timestamp t, std::size_t max_bins = kDefaultMaxBins);

// Two edges' binned series stacked into one 4-channel sequence, the
// recurrent comparator input. The shorter series is left-padded with
// zero bins so both ends align at the shared evaluation time.
// Channel layout per step: [first calls, first texts, second calls,
// second texts].
struct StackedSeries {
  Timestamp end = 0;
  std::vector<std::array<double, 4>> steps;  // oldest to newest

  std::size_t size() const { return steps.size(); }
};

StackedSeries stacked_series(const BinnedSeries& first, const BinnedSeries& second);

}  // namespace ties
