#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmapgame {

using TimeStep = std::int64_t;
using ByteSize = std::int64_t;
using ByteOffset = std::int64_t;
using TensorId = std::int64_t;
using AliasId = std::int64_t;

// Offset value for buffers served from slow memory.
inline constexpr ByteOffset kSlowMemory = -1;

// Closed interval of logical time steps [lo, hi]. An interval with hi < lo
// is empty; empty() is the canonical empty value.
struct TimeInterval {
  TimeStep lo = 0;
  TimeStep hi = -1;

  static constexpr TimeInterval empty() { return {0, -1}; }
  static constexpr TimeInterval single(TimeStep t) { return {t, t}; }

  bool is_empty() const { return hi < lo; }
  TimeStep length() const { return is_empty() ? 0 : hi - lo + 1; }
  bool contains(TimeStep t) const { return lo <= t && t <= hi; }
  bool contains(const TimeInterval& o) const {
    return o.is_empty() || (lo <= o.lo && o.hi <= hi);
  }
  bool intersects(const TimeInterval& o) const {
    return !is_empty() && !o.is_empty() && lo <= o.hi && o.lo <= hi;
  }
  TimeInterval intersection(const TimeInterval& o) const {
    if (!intersects(o)) return empty();
    return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
  }
  // Number of time steps shared with another interval.
  TimeStep overlap_length(const TimeInterval& o) const {
    return intersection(o).length();
  }
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

enum class ActionKind { Copy, NoCopy, Drop };

inline constexpr ActionKind kAllActions[] = {ActionKind::Copy,
                                             ActionKind::NoCopy,
                                             ActionKind::Drop};

std::string_view to_string(ActionKind a);
std::optional<ActionKind> action_from_string(std::string_view s);

// One operand or output occurrence of an instruction; the atomic unit of
// placement decisions. Ids follow chronological decision order.
struct Buffer {
  int id = 0;
  ByteSize size = 0;
  bool is_output = false;
  TimeStep target_time = 0;
  TensorId tensor_id = 0;
  std::optional<AliasId> alias_id;
  TimeInterval live_range;
  double demand = 0.0;
  double benefit = 0.0;
};

// Where and when one buffer sits in fast memory. Drop is encoded as the
// slow-memory offset with an empty interval. The copy span is stored as the
// closed set of steps whose supply the transfer consumes: [lo(I), target) for
// inputs, (target, hi(I)] for outputs, empty for NoCopy/Drop.
struct Placement {
  ActionKind action = ActionKind::Drop;
  ByteOffset offset = kSlowMemory;
  TimeInterval interval = TimeInterval::empty();
  TimeInterval copy_interval = TimeInterval::empty();

  bool in_fast_memory() const { return offset != kSlowMemory; }
};

struct Solution {
  std::vector<Placement> placements;
  double total_benefit = 0.0;
};

// Measured execution times of one instruction under subsets of its buffers
// kept in fast memory. Subsets range over the `capped` ids (largest first,
// at most 8); bit i of a subset mask selects capped[i]. Buffers beyond the
// cap carry a plain additive saving.
struct InstructionLatency {
  double base = 0.0;
  std::vector<int> capped;
  std::vector<double> latencies;  // 2^capped.size() entries; latencies[0] == base
  std::vector<std::pair<int, double>> extra_savings;

  double lookup(std::uint32_t mask) const { return latencies[mask]; }
};

struct LatencyTables {
  std::vector<InstructionLatency> per_instruction;  // one entry per time step
};

struct ProblemInstance {
  TimeStep num_instructions = 0;  // T
  ByteSize max_size = 0;          // fast-memory capacity in bytes
  std::vector<double> initial_supply;
  std::vector<Buffer> buffers;  // sorted by (target_time, id); ids 0..n-1
  std::optional<LatencyTables> latency_tables;

  double total_static_benefit() const;
};

// Thrown when a problem violates its structural invariants.
// The message names the offending buffer or field.
void check_problem(const ProblemInstance& problem);

struct IllegalMoveError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DigestMismatchError : ParseError {
  using ParseError::ParseError;
};

}  // namespace mmapgame
