#pragma once
// Basic domain types shared across the library: people, communication
// events, time conventions, and the error hierarchy used by the CLI to
// map failures onto exit codes.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ties {

// Opaque person token. Must be non-empty and stable across a dataset.
using PersonId = std::string;

// Seconds since epoch. All "before time t" queries in this library are
// strict: an event at exactly t is not visible at t.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86'400;

enum class ChannelKind : std::uint8_t { Call, Text };

inline const char* channel_name(ChannelKind c) {
  return c == ChannelKind::Call ? "call" : "text";
}

// One timestamped directed communication event. Magnitude is the call
// duration in seconds or the message length in characters.
struct CommEvent {
  Timestamp timestamp = 0;
  PersonId sender;
  PersonId receiver;
  ChannelKind channel = ChannelKind::Text;
  std::int64_t magnitude = 0;

  bool operator==(const CommEvent&) const = default;
};

// Malformed or inconsistent input data (CDR lines, survey files, configs).
// CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model training or inference failure (divergence, bad model file).
// CLI exit code 3.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ties
