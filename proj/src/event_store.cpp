#include "ties/event_store.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

namespace ties {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::int64_t parse_int(std::string_view field, const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw DataError(std::string("non-numeric ") + what + ": '" + std::string(field) + "'");
  }
  return value;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::uint64_t pair_key(std::uint32_t lo, std::uint32_t hi) {
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

// Index of the first element >= t, i.e. the count of elements < t.
std::int64_t count_before(const std::vector<Timestamp>& ts, Timestamp t) {
  return std::lower_bound(ts.begin(), ts.end(), t) - ts.begin();
}

}  // namespace

CommEvent parse_cdr_line(std::string_view line) {
  std::array<std::string_view, 5> fields;
  std::size_t count = 0;
  std::string_view rest = line;
  while (true) {
    std::size_t comma = rest.find(',');
    std::string_view field = comma == std::string_view::npos ? rest : rest.substr(0, comma);
    if (count < 5) fields[count] = trim(field);
    ++count;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (count != 5) {
    throw DataError("expected 5 comma-separated fields, got " + std::to_string(count));
  }

  CommEvent event;
  event.timestamp = parse_int(fields[0], "timestamp");
  if (event.timestamp < 0) throw DataError("negative timestamp");
  event.sender = PersonId(fields[1]);
  event.receiver = PersonId(fields[2]);
  if (event.sender.empty() || event.receiver.empty()) throw DataError("empty person token");
  if (event.sender == event.receiver) {
    throw DataError("self-loop: sender equals receiver ('" + event.sender + "')");
  }
  std::string channel = lower(fields[3]);
  if (channel == "call") {
    event.channel = ChannelKind::Call;
  } else if (channel == "text") {
    event.channel = ChannelKind::Text;
  } else {
    throw DataError("unknown channel token: '" + std::string(fields[3]) + "'");
  }
  event.magnitude = parse_int(fields[4], "magnitude");
  if (event.magnitude < 0) throw DataError("negative magnitude");
  return event;
}

void EventStore::Builder::add(const CommEvent& event) { events_.push_back(event); }

void EventStore::Builder::set_participants(std::vector<PersonId> participants) {
  participants_ = std::move(participants);
}

EventStore EventStore::Builder::build() && {
  EventStore store;

  auto intern = [&store](const PersonId& id) -> PersonIndex {
    auto [it, inserted] = store.index_.try_emplace(id, static_cast<PersonIndex>(store.ids_.size()));
    if (inserted) store.ids_.push_back(id);
    return it->second;
  };

  // Group events by unordered pair, preserving input order within each
  // pair so the later stable sort keeps equal timestamps as given.
  for (const CommEvent& e : events_) {
    PersonIndex s = intern(e.sender);
    PersonIndex r = intern(e.receiver);
    PersonIndex lo = std::min(s, r);
    PersonIndex hi = std::max(s, r);
    auto [it, inserted] =
        store.pair_index_.try_emplace(pair_key(lo, hi), static_cast<std::uint32_t>(store.pairs_.size()));
    if (inserted) {
      store.pairs_.emplace_back();
      store.pairs_.back().lo = lo;
      store.pairs_.back().hi = hi;
    }
    Pair& pair = store.pairs_[it->second];
    pair.ts.push_back(e.timestamp);
    pair.magnitude.push_back(e.magnitude);
    pair.channel.push_back(e.channel);
    pair.from_lo.push_back(s == lo);
    store.all_timestamps_.push_back(e.timestamp);
  }

  for (Pair& pair : store.pairs_) {
    std::vector<std::size_t> order(pair.ts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&pair](std::size_t a, std::size_t b) { return pair.ts[a] < pair.ts[b]; });
    Pair sorted;
    sorted.lo = pair.lo;
    sorted.hi = pair.hi;
    sorted.ts.reserve(order.size());
    for (std::size_t i : order) {
      sorted.ts.push_back(pair.ts[i]);
      sorted.magnitude.push_back(pair.magnitude[i]);
      sorted.channel.push_back(pair.channel[i]);
      sorted.from_lo.push_back(pair.from_lo[i]);
      (sorted.channel.back() == ChannelKind::Call ? sorted.call_ts : sorted.text_ts)
          .push_back(sorted.ts.back());
    }
    pair = std::move(sorted);
  }

  std::sort(store.all_timestamps_.begin(), store.all_timestamps_.end());

  store.adjacency_.resize(store.ids_.size());
  for (std::uint32_t p = 0; p < store.pairs_.size(); ++p) {
    const Pair& pair = store.pairs_[p];
    store.adjacency_[pair.lo].push_back({pair.hi, p});
    store.adjacency_[pair.hi].push_back({pair.lo, p});
  }
  for (auto& neighbors : store.adjacency_) {
    std::sort(neighbors.begin(), neighbors.end(),
              [&store](const Neighbor& a, const Neighbor& b) {
                return store.ids_[a.person] < store.ids_[b.person];
              });
  }

  std::sort(participants_.begin(), participants_.end());
  participants_.erase(std::unique(participants_.begin(), participants_.end()),
                      participants_.end());
  store.participant_ids_ = std::move(participants_);
  store.participant_flag_.assign(store.ids_.size(), false);
  for (const PersonId& id : store.participant_ids_) {
    PersonIndex idx = store.find_person(id);
    if (idx != kNoPerson) store.participant_flag_[idx] = true;
  }

  return store;
}

EventStore::PersonIndex EventStore::find_person(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? kNoPerson : it->second;
}

const EventStore::Pair* EventStore::find_pair(std::string_view a, std::string_view b) const {
  PersonIndex ia = find_person(a);
  PersonIndex ib = find_person(b);
  if (ia == kNoPerson || ib == kNoPerson || ia == ib) return nullptr;
  auto it = pair_index_.find(pair_key(std::min(ia, ib), std::max(ia, ib)));
  return it == pair_index_.end() ? nullptr : &pairs_[it->second];
}

StoreView EventStore::view() const {
  return StoreView(this, std::numeric_limits<Timestamp>::max());
}

StoreView EventStore::view_before(Timestamp cap) const { return StoreView(this, cap); }

std::vector<PersonId> EventStore::persons() const {
  std::vector<PersonId> out = ids_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CommEvent> EventStore::all_events() const {
  std::vector<std::uint32_t> order(pairs_.size());
  std::iota(order.begin(), order.end(), 0);
  // lo/hi order people by intern index, not by id, so normalize here:
  // the canonical order must not depend on which event was seen first.
  std::sort(order.begin(), order.end(), [this](std::uint32_t a, std::uint32_t b) {
    const Pair& pa = pairs_[a];
    const Pair& pb = pairs_[b];
    const auto key = [this](const Pair& p) {
      return std::minmax(ids_[p.lo], ids_[p.hi]);
    };
    return key(pa) < key(pb);
  });
  std::vector<CommEvent> out;
  out.reserve(all_timestamps_.size());
  for (std::uint32_t p : order) {
    const Pair& pair = pairs_[p];
    for (std::size_t i = 0; i < pair.ts.size(); ++i) {
      CommEvent e;
      e.timestamp = pair.ts[i];
      e.sender = ids_[pair.from_lo[i] ? pair.lo : pair.hi];
      e.receiver = ids_[pair.from_lo[i] ? pair.hi : pair.lo];
      e.channel = pair.channel[i];
      e.magnitude = pair.magnitude[i];
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<CommEvent> StoreView::pair_timeline(const PersonId& a, const PersonId& b,
                                                Timestamp t_end) const {
  std::vector<CommEvent> out;
  if (store_ == nullptr) return out;
  const EventStore::Pair* pair = store_->find_pair(a, b);
  if (pair == nullptr) return out;
  std::int64_t n = count_before(pair->ts, limit(t_end));
  out.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) {
    CommEvent e;
    e.timestamp = pair->ts[i];
    e.sender = store_->ids_[pair->from_lo[i] ? pair->lo : pair->hi];
    e.receiver = store_->ids_[pair->from_lo[i] ? pair->hi : pair->lo];
    e.channel = pair->channel[i];
    e.magnitude = pair->magnitude[i];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<PersonId> StoreView::contacts_of(const PersonId& ego, Timestamp t) const {
  std::vector<PersonId> out;
  if (store_ == nullptr) return out;
  EventStore::PersonIndex idx = store_->find_person(ego);
  if (idx == EventStore::kNoPerson) return out;
  Timestamp bound = limit(t);
  for (const EventStore::Neighbor& n : store_->adjacency_[idx]) {
    const EventStore::Pair& pair = store_->pairs_[n.pair];
    if (!pair.ts.empty() && pair.ts.front() < bound) {
      out.push_back(store_->ids_[n.person]);
    }
  }
  return out;  // adjacency is pre-sorted by neighbor id
}

WeightedNeighbors StoreView::weighted_neighbors(const PersonId& p, Timestamp t) const {
  WeightedNeighbors out;
  if (store_ == nullptr) return out;
  EventStore::PersonIndex idx = store_->find_person(p);
  if (idx == EventStore::kNoPerson) return out;
  Timestamp bound = limit(t);
  for (const EventStore::Neighbor& n : store_->adjacency_[idx]) {
    const EventStore::Pair& pair = store_->pairs_[n.pair];
    std::int64_t count = count_before(pair.ts, bound);
    if (count > 0) {
      out.counts.emplace_back(store_->ids_[n.person], count);
      out.strength += count;
    }
  }
  return out;
}

std::int64_t StoreView::pair_event_count(const PersonId& a, const PersonId& b, Timestamp t,
                                         ChannelFilter filter) const {
  if (store_ == nullptr) return 0;
  const EventStore::Pair* pair = store_->find_pair(a, b);
  if (pair == nullptr) return 0;
  Timestamp bound = limit(t);
  switch (filter) {
    case ChannelFilter::All:
      return count_before(pair->ts, bound);
    case ChannelFilter::CallOnly:
      return count_before(pair->call_ts, bound);
    case ChannelFilter::TextOnly:
      return count_before(pair->text_ts, bound);
  }
  return 0;
}

std::optional<Timestamp> StoreView::pair_first_event(const PersonId& a, const PersonId& b,
                                                     Timestamp t, ChannelFilter filter) const {
  if (store_ == nullptr) return std::nullopt;
  const EventStore::Pair* pair = store_->find_pair(a, b);
  if (pair == nullptr) return std::nullopt;
  const std::vector<Timestamp>& ts = filter == ChannelFilter::All       ? pair->ts
                                     : filter == ChannelFilter::CallOnly ? pair->call_ts
                                                                         : pair->text_ts;
  if (ts.empty() || ts.front() >= limit(t)) return std::nullopt;
  return ts.front();
}

std::optional<Timestamp> StoreView::pair_last_event(const PersonId& a, const PersonId& b,
                                                    Timestamp t, ChannelFilter filter) const {
  if (store_ == nullptr) return std::nullopt;
  const EventStore::Pair* pair = store_->find_pair(a, b);
  if (pair == nullptr) return std::nullopt;
  const std::vector<Timestamp>& ts = filter == ChannelFilter::All       ? pair->ts
                                     : filter == ChannelFilter::CallOnly ? pair->call_ts
                                                                         : pair->text_ts;
  std::int64_t n = count_before(ts, limit(t));
  if (n == 0) return std::nullopt;
  return ts[n - 1];
}

std::optional<Timestamp> StoreView::first_event_time() const {
  if (store_ == nullptr || store_->all_timestamps_.empty()) return std::nullopt;
  Timestamp first = store_->all_timestamps_.front();
  if (first >= cap_) return std::nullopt;
  return first;
}

std::int64_t StoreView::events_before(Timestamp t) const {
  if (store_ == nullptr) return 0;
  return count_before(store_->all_timestamps_, limit(t));
}

bool StoreView::is_participant(const PersonId& id) const {
  if (store_ == nullptr) return false;
  return std::binary_search(store_->participant_ids_.begin(), store_->participant_ids_.end(), id);
}

const std::vector<PersonId>& StoreView::participants() const {
  static const std::vector<PersonId> empty;
  return store_ == nullptr ? empty : store_->participant_ids_;
}

LoadResult load_events(std::istream& in, std::vector<PersonId> participants) {
  LoadResult result;
  EventStore::Builder builder;
  builder.set_participants(std::move(participants));

  std::string line;
  std::size_t line_number = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view text = trim(line);
    if (text.empty()) continue;
    if (first_content_line) {
      first_content_line = false;
      if (text.substr(0, 9) == "timestamp") continue;  // header
    }
    try {
      builder.add(parse_cdr_line(text));
      ++result.accepted;
    } catch (const DataError& e) {
      result.rejects.push_back({line_number, std::string(text), e.what()});
    }
  }
  result.store = std::move(builder).build();
  return result;
}

void write_cdr(const EventStore& store, std::ostream& out) {
  out << "timestamp,sender,receiver,channel,magnitude\n";
  for (const CommEvent& e : store.all_events()) {
    out << e.timestamp << ',' << e.sender << ',' << e.receiver << ','
        << channel_name(e.channel) << ',' << e.magnitude << '\n';
  }
}

}  // namespace ties
