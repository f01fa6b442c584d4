#include "ties/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace ties {

const char* feature_name(std::size_t index) {
  static constexpr const char* kNames[kFeatureCount] = {
      "call_frequency", "call_recency", "call_duration", "call_volume",
      "text_frequency", "text_recency", "text_duration", "text_volume",
  };
  if (index >= kFeatureCount) throw std::out_of_range("feature_name: index out of range");
  return kNames[index];
}

namespace {

void fill_channel(const StoreView& store, const PersonId& ego, const PersonId& alter, Timestamp t,
                  ChannelFilter filter, Timestamp stale_origin, double* slot) {
  const std::int64_t count = store.pair_event_count(ego, alter, t, filter);
  if (count == 0) {
    slot[0] = 0.0;
    slot[1] = -static_cast<double>(t - stale_origin);
    slot[2] = 0.0;
    slot[3] = 0.0;
    return;
  }
  const Timestamp first = *store.pair_first_event(ego, alter, t, filter);
  const Timestamp last = *store.pair_last_event(ego, alter, t, filter);
  const Timestamp age = t - first;
  slot[0] = age > 0 ? static_cast<double>(count) / static_cast<double>(age) : 0.0;
  slot[1] = -static_cast<double>(t - last);
  slot[2] = static_cast<double>(age);
  slot[3] = static_cast<double>(count);
}

}  // namespace

FeatureVector feature_vector(const StoreView& store, const PersonId& ego, const PersonId& alter,
                             Timestamp t) {
  FeatureVector f{};
  // Staleness for a silent channel is measured from the start of data,
  // so it compares worse than any observed event.
  const Timestamp stale_origin = store.first_event_time().value_or(t);
  fill_channel(store, ego, alter, t, ChannelFilter::CallOnly, stale_origin, f.data() + kCallFrequency);
  fill_channel(store, ego, alter, t, ChannelFilter::TextOnly, stale_origin, f.data() + kTextFrequency);
  return f;
}

FeatureVector difference_features(const FeatureVector& x, const FeatureVector& y) {
  FeatureVector d{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) d[i] = x[i] - y[i];
  return d;
}

BinnedSeries binned_timeseries(const StoreView& store, const PersonId& ego, const PersonId& alter,
                               Timestamp t, std::size_t max_bins) {
  if (max_bins == 0) throw std::invalid_argument("binned_timeseries: max_bins must be positive");
  BinnedSeries series;
  series.end = t;
  const std::vector<CommEvent> timeline = store.pair_timeline(ego, alter, t);
  if (timeline.empty()) return series;

  const Timestamp first = timeline.front().timestamp;
  const Timestamp span = t - first;
  std::size_t bins = static_cast<std::size_t>((span + kBinWidth - 1) / kBinWidth);
  if (bins == 0) bins = 1;
  bins = std::min(bins, max_bins);
  const Timestamp start = t - static_cast<Timestamp>(bins) * kBinWidth;

  series.calls.assign(bins, 0);
  series.texts.assign(bins, 0);
  for (const CommEvent& e : timeline) {
    if (e.timestamp < start) continue;  // older than the retained window
    const std::size_t bin = static_cast<std::size_t>((e.timestamp - start) / kBinWidth);
    if (e.channel == ChannelKind::Call) {
      ++series.calls[bin];
    } else {
      ++series.texts[bin];
    }
  }
  return series;
}

StackedSeries stacked_series(const BinnedSeries& first, const BinnedSeries& second) {
  if (first.end != second.end) {
    throw std::invalid_argument("stacked_series: series end times differ");
  }
  StackedSeries out;
  out.end = first.end;
  const std::size_t n = std::max(first.size(), second.size());
  out.steps.assign(n, {0.0, 0.0, 0.0, 0.0});
  const std::size_t pad_first = n - first.size();
  const std::size_t pad_second = n - second.size();
  for (std::size_t i = 0; i < first.size(); ++i) {
    out.steps[pad_first + i][0] = static_cast<double>(first.calls[i]);
    out.steps[pad_first + i][1] = static_cast<double>(first.texts[i]);
  }
  for (std::size_t i = 0; i < second.size(); ++i) {
    out.steps[pad_second + i][2] = static_cast<double>(second.calls[i]);
    out.steps[pad_second + i][3] = static_cast<double>(second.texts[i]);
  }
  return out;
}

}  // namespace ties
