#pragma once
// Parsing, validation, and indexing of communication records.
//
// CDR file format: UTF-8, one event per line,
//   timestamp,sender,receiver,channel,magnitude
// with channel in {call, text} (case-insensitive) and an optional header
// line beginning "timestamp".
//
// The store is immutable after construction and safe for concurrent
// reads. All queries go through StoreView, which carries an exclusive
// visibility cap: a view truncated at time T behaves exactly as if no
// event at or after T exists. Query time bounds are themselves strict
// ("before t" means timestamp < t), so a survey at time t never sees
// communication at t.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ties/core.hpp"

namespace ties {

enum class ChannelFilter : std::uint8_t { All, CallOnly, TextOnly };

// Event counts per neighbor for one person at one time. `counts` is
// sorted by neighbor id; `strength` is the total over neighbors.
struct WeightedNeighbors {
  std::vector<std::pair<PersonId, std::int64_t>> counts;
  std::int64_t strength = 0;
};

class StoreView;

class EventStore {
 public:
  class Builder {
   public:
    void add(const CommEvent& event);
    void set_participants(std::vector<PersonId> participants);
    EventStore build() &&;

   private:
    std::vector<CommEvent> events_;
    std::vector<PersonId> participants_;
  };

  EventStore() = default;

  StoreView view() const;
  StoreView view_before(Timestamp cap) const;

  std::size_t total_events() const { return all_timestamps_.size(); }
  std::size_t person_count() const { return ids_.size(); }

  // All persons observed in events, sorted by id.
  std::vector<PersonId> persons() const;
  const std::vector<PersonId>& participants() const { return participant_ids_; }

  // Canonical event order: pairs sorted by (lo id, hi id), events within
  // a pair in timeline order. write_cdr emits exactly this order, which
  // makes load -> serialize -> load a fixed point.
  std::vector<CommEvent> all_events() const;

 private:
  friend class StoreView;

  using PersonIndex = std::uint32_t;
  static constexpr PersonIndex kNoPerson = static_cast<PersonIndex>(-1);

  struct Pair {
    PersonIndex lo = 0;
    PersonIndex hi = 0;
    // Parallel arrays, sorted by timestamp (stable on input order).
    std::vector<Timestamp> ts;
    std::vector<std::int64_t> magnitude;
    std::vector<ChannelKind> channel;
    std::vector<bool> from_lo;
    // Per-channel timestamp subsequences, for filtered count/first/last.
    std::vector<Timestamp> call_ts;
    std::vector<Timestamp> text_ts;
  };

  struct Neighbor {
    PersonIndex person;
    std::uint32_t pair;
  };

  PersonIndex find_person(std::string_view id) const;
  const Pair* find_pair(std::string_view a, std::string_view b) const;

  std::vector<PersonId> ids_;
  std::unordered_map<std::string, PersonIndex> index_;
  std::vector<Pair> pairs_;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_index_;
  std::vector<std::vector<Neighbor>> adjacency_;  // sorted by neighbor id
  std::vector<Timestamp> all_timestamps_;         // sorted
  std::vector<PersonId> participant_ids_;         // sorted
  std::vector<bool> participant_flag_;            // by PersonIndex
};

// Read-only window onto an EventStore with an exclusive time cap.
// Copyable and cheap; truncating returns a further-capped view.
class StoreView {
 public:
  StoreView() = default;
  StoreView(const EventStore* store, Timestamp cap) : store_(store), cap_(cap) {}

  StoreView truncated(Timestamp cap) const {
    return StoreView(store_, cap < cap_ ? cap : cap_);
  }
  Timestamp cap() const { return cap_; }

  // All events between a and b (either direction) strictly before t_end,
  // ascending by timestamp. Unknown pair gives an empty sequence.
  std::vector<CommEvent> pair_timeline(const PersonId& a, const PersonId& b,
                                       Timestamp t_end) const;

  // Persons sharing at least one event with ego strictly before t,
  // sorted by id.
  std::vector<PersonId> contacts_of(const PersonId& ego, Timestamp t) const;

  WeightedNeighbors weighted_neighbors(const PersonId& p, Timestamp t) const;

  std::int64_t pair_event_count(const PersonId& a, const PersonId& b, Timestamp t,
                                ChannelFilter filter = ChannelFilter::All) const;
  std::optional<Timestamp> pair_first_event(const PersonId& a, const PersonId& b,
                                            Timestamp t,
                                            ChannelFilter filter = ChannelFilter::All) const;
  std::optional<Timestamp> pair_last_event(const PersonId& a, const PersonId& b,
                                           Timestamp t,
                                           ChannelFilter filter = ChannelFilter::All) const;

  // Earliest visible event in the whole store, if any.
  std::optional<Timestamp> first_event_time() const;
  // Number of visible events strictly before t.
  std::int64_t events_before(Timestamp t) const;

  bool is_participant(const PersonId& id) const;
  const std::vector<PersonId>& participants() const;

  const EventStore& store() const { return *store_; }

 private:
  Timestamp limit(Timestamp t) const { return t < cap_ ? t : cap_; }

  const EventStore* store_ = nullptr;
  Timestamp cap_ = 0;
};

// Parses one CDR line. Throws DataError on malformed field count,
// non-numeric timestamp or magnitude, unknown channel, empty person
// token, or sender == receiver.
CommEvent parse_cdr_line(std::string_view line);

struct RejectedLine {
  std::size_t line_number = 0;  // 1-based
  std::string line;
  std::string reason;
};

struct LoadResult {
  EventStore store;
  std::vector<RejectedLine> rejects;
  std::size_t accepted = 0;
};

// Loads a CDR stream. Rejected lines never abort the load; they are
// recorded and counted. Participants (egos with full records) may be
// supplied so the store can distinguish them from contacts who only
// appear on the far end of events.
LoadResult load_events(std::istream& in, std::vector<PersonId> participants = {});

// Canonical serialization, inverse of load_events for valid data.
void write_cdr(const EventStore& store, std::ostream& out);

}  // namespace ties
