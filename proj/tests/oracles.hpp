#pragma once

#include <optional>
#include <vector>

#include "mmapgame/game.hpp"
#include "mmapgame/observation.hpp"
#include "mmapgame/types.hpp"
#include "mmapgame/validator.hpp"

namespace mmapgame::testing {

// Byte-granularity occupancy, one cell per (step, byte). The slow oracle for
// grid queries; keep max_size small.
class ByteGrid {
 public:
  ByteGrid(TimeStep num_steps, ByteSize capacity)
      : capacity_(capacity),
        cells_(static_cast<std::size_t>(num_steps),
               std::vector<TensorId>(static_cast<std::size_t>(capacity), -1)) {
  }

  bool is_free(const TimeInterval& interval, ByteOffset offset, ByteSize size,
               TensorId tensor) const {
    if (interval.is_empty()) return true;
    for (TimeStep t = interval.lo; t <= interval.hi; ++t)
      for (ByteOffset o = offset; o < offset + size; ++o) {
        const TensorId held = cells_[t][o];
        if (held != -1 && held != tensor) return false;
      }
    return true;
  }

  void occupy(const Buffer& b, const TimeInterval& interval,
              ByteOffset offset) {
    for (TimeStep t = interval.lo; t <= interval.hi; ++t)
      for (ByteOffset o = offset; o < offset + b.size; ++o)
        cells_[t][o] = b.tensor_id;
  }

  std::optional<ByteOffset> lowest_offset(
      const TimeInterval& interval, ByteSize size, TensorId tensor,
      std::optional<ByteOffset> pinned = std::nullopt) const {
    if (pinned) {
      if (*pinned + size <= capacity_ && is_free(interval, *pinned, size, tensor))
        return pinned;
      return std::nullopt;
    }
    for (ByteOffset o = 0; o + size <= capacity_; ++o)
      if (is_free(interval, o, size, tensor)) return o;
    return std::nullopt;
  }

 private:
  ByteSize capacity_;
  std::vector<std::vector<TensorId>> cells_;
};

// Literal reading of the copy-placement rule: walk starts (ends) away from
// the target one step at a time and return the first that satisfies supply,
// exclusivity and first-fit on a byte-granularity grid.
inline std::optional<Placement> brute_force_resolve_copy(
    const GameState& state) {
  const Buffer& b = state.current_buffer();
  const ProblemInstance& problem = state.problem();
  const auto& supply = state.remaining_supply();

  ByteGrid bytes(problem.num_instructions, problem.max_size);
  std::optional<ByteOffset> pinned;
  const Solution partial = state.solution();
  for (int i = 0; i < state.cursor(); ++i) {
    const Placement& placement = partial.placements[i];
    const bool same_alias = problem.buffers[i].alias_id && b.alias_id &&
                            *problem.buffers[i].alias_id == *b.alias_id;
    if (!placement.in_fast_memory()) {
      if (same_alias) return std::nullopt;  // dropped sibling forces Drop
      continue;
    }
    bytes.occupy(problem.buffers[i], placement.interval, placement.offset);
    if (same_alias) pinned = placement.offset;
  }

  auto feasible = [&](const TimeInterval& interval,
                      const TimeInterval& span) -> std::optional<Placement> {
    double available = 0.0;
    for (TimeStep t = span.lo; t <= span.hi; ++t) available += supply[t];
    if (available < b.demand) return std::nullopt;
    for (const TimeInterval& other : state.committed_copy_spans())
      if (span.overlap_length(other) > 1) return std::nullopt;
    const auto offset = bytes.lowest_offset(interval, b.size, b.tensor_id,
                                            pinned);
    if (!offset) return std::nullopt;
    return Placement{ActionKind::Copy, *offset, interval, span};
  };

  if (b.is_output) {
    for (TimeStep e = b.target_time; e <= b.live_range.hi; ++e)
      if (auto p = feasible({b.target_time, e}, {b.target_time + 1, e}))
        return p;
  } else {
    for (TimeStep s = b.target_time; s >= b.live_range.lo; --s)
      if (auto p = feasible({s, b.target_time}, {s, b.target_time - 1}))
        return p;
  }
  return std::nullopt;
}

// Cell-by-cell downsampler over every (step, byte) pair; the reference for
// the production memory image.
inline std::vector<float> reference_memory_image(const GameState& state,
                                                 const ObservationConfig& cfg) {
  const ProblemInstance& problem = state.problem();
  const Buffer& b = state.current_buffer();
  const int img = cfg.image_size;
  const ByteSize M = problem.max_size;
  const TimeInterval window = centered_window(
      b.target_time, cfg.image_time_window, problem.num_instructions);

  ByteGrid bytes(problem.num_instructions, M);
  const Solution partial = state.solution();
  for (int i = 0; i < state.cursor(); ++i)
    if (partial.placements[i].in_fast_memory())
      bytes.occupy(problem.buffers[i], partial.placements[i].interval,
                   partial.placements[i].offset);

  auto time_edge = [&](int bin) {
    return window.lo + static_cast<TimeStep>(bin) * window.length() / img;
  };
  auto offset_edge = [&](int bin) {
    return static_cast<ByteOffset>(bin) * M / img;
  };

  std::vector<float> image(static_cast<std::size_t>(img) * img, 0.0f);
  if (window.is_empty()) return image;
  for (int tb = 0; tb < img; ++tb) {
    for (int ob = 0; ob < img; ++ob) {
      const TimeStep t_lo = time_edge(tb);
      const TimeStep t_hi = time_edge(tb + 1);
      const ByteOffset o_lo = offset_edge(ob);
      const ByteOffset o_hi = offset_edge(ob + 1);
      const double area = static_cast<double>(t_hi - t_lo) *
                          static_cast<double>(o_hi - o_lo);
      if (area <= 0.0) continue;
      double occupied = 0.0;
      for (TimeStep t = t_lo; t < t_hi; ++t)
        for (ByteOffset o = o_lo; o < o_hi; ++o)
          if (!bytes.is_free({t, t}, o, 1, -2)) occupied += 1.0;
      image[static_cast<std::size_t>(tb) * img + ob] =
          static_cast<float>(occupied / area);
    }
  }
  return image;
}

}  // namespace mmapgame::testing
