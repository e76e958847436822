#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "mmapgame/types.hpp"

namespace mmapgame {

// Thrown when an occupy() call would put two tensors on the same byte at the
// same time step.
struct OccupancyConflict : std::logic_error {
  OccupancyConflict(int existing_buffer, TimeStep step, ByteOffset byte,
                    const std::string& msg)
      : std::logic_error(msg),
        existing_buffer(existing_buffer),
        step(step),
        byte(byte) {}
  int existing_buffer;
  TimeStep step;
  ByteOffset byte;
};

struct OverlapConflict {
  int buffer_a = 0;
  int buffer_b = 0;
  TimeStep step = 0;
  ByteOffset byte = 0;
};

// Occupancy of the (time x offset) plane, kept as per-step sorted byte
// ranges. Bytes covered by several buffers of one tensor carry dual
// attribution; the tensor id is the authoritative occupancy key.
class MemoryGrid {
 public:
  MemoryGrid() = default;
  MemoryGrid(TimeStep num_steps, ByteSize capacity);

  TimeStep num_steps() const { return static_cast<TimeStep>(steps_.size()); }
  ByteSize capacity() const { return capacity_; }

  // True iff every cell of interval x [offset, offset+size) is empty or held
  // by the same tensor.
  bool is_free(const TimeInterval& interval, ByteOffset offset, ByteSize size,
               TensorId tensor_id) const;

  // Claims interval x [offset, offset+size) for the buffer. Throws
  // OccupancyConflict if a different tensor holds any covered cell.
  void occupy(const Buffer& buffer, const TimeInterval& interval,
              ByteOffset offset);

  // Claims the cells without the conflict check; used to materialize
  // arbitrary (possibly invalid) solutions for inspection.
  void force_occupy(const Buffer& buffer, const TimeInterval& interval,
                    ByteOffset offset);

  // Smallest offset at which the range fits over the whole interval, or
  // nullopt. With a pinned offset (alias groups) only that offset is tried.
  // Candidates are 0 plus the end boundaries of conflicting ranges, which is
  // sufficient for first-fit.
  std::optional<ByteOffset> find_lowest_offset(
      const TimeInterval& interval, ByteSize size, TensorId tensor_id,
      std::optional<ByteOffset> pinned_offset = std::nullopt) const;

  // All pairs of different-tensor buffers sharing a cell, one entry per
  // buffer pair, referencing the first clashing cell found.
  std::vector<OverlapConflict> sweep_conflicts() const;

  // Recovers (offset, interval) per buffer id from the stored ranges.
  std::map<int, std::pair<ByteOffset, TimeInterval>> extract_placements() const;

 private:
  struct Span {
    ByteOffset lo = 0;
    ByteOffset hi = 0;  // exclusive
    TensorId tensor = 0;
    int buffer = 0;
  };

  void check_query(const TimeInterval& interval, ByteOffset offset,
                   ByteSize size) const;
  void insert_span(TimeStep t, const Span& span);

  ByteSize capacity_ = 0;
  std::vector<std::vector<Span>> steps_;  // sorted by Span::lo
};

}  // namespace mmapgame
