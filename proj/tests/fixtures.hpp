#pragma once

#include "mmapgame/generator.hpp"
#include "mmapgame/types.hpp"

namespace mmapgame::testing {

inline Buffer make_buffer(int id, ByteSize size, bool is_output,
                          TimeStep target, TensorId tensor, TimeStep live_lo,
                          TimeStep live_hi, double demand, double benefit,
                          std::optional<AliasId> alias = std::nullopt) {
  Buffer b;
  b.id = id;
  b.size = size;
  b.is_output = is_output;
  b.target_time = target;
  b.tensor_id = tensor;
  b.alias_id = alias;
  b.live_range = {live_lo, live_hi};
  b.demand = demand;
  b.benefit = benefit;
  return b;
}

// Three-buffer instance: a tensor created at step 0 and read at step 2, and
// a big late read that needs most of the memory and three supply steps.
// With 100 bytes the big buffer cannot coexist with the small tensor, so the
// best play drops the small tensor entirely (return 20, by exhaustive
// search).
inline ProblemInstance p1() {
  ProblemInstance p;
  p.num_instructions = 4;
  p.max_size = 100;
  p.initial_supply = {10, 10, 10, 10};
  p.buffers = {
      make_buffer(0, 40, true, 0, 0, 0, 2, 15, 5),
      make_buffer(1, 40, false, 2, 0, 0, 2, 15, 8),
      make_buffer(2, 80, false, 3, 1, 0, 3, 25, 20),
  };
  return p;
}

// Same shape with 128 bytes of memory: everything fits (return 33).
inline ProblemInstance p1_wide() {
  ProblemInstance p = p1();
  p.max_size = 128;
  return p;
}

// Two aliased buffers where placing the first starves the second of both
// offset and bandwidth: every non-Drop line dead-ends.
inline ProblemInstance alias_trap_pair() {
  ProblemInstance p;
  p.num_instructions = 4;
  p.max_size = 100;
  p.initial_supply = {10, 10, 10, 10};
  p.buffers = {
      make_buffer(0, 40, true, 0, 0, 0, 3, 5, 5, 7),
      make_buffer(1, 40, false, 3, 1, 0, 3, 30, 5, 7),
  };
  return p;
}

// The pair trap with a valuable independent buffer in between; a greedy
// player places the first alias member, dead-ends on the second, and must
// back up once (final return 50).
inline ProblemInstance alias_trap_triple() {
  ProblemInstance p;
  p.num_instructions = 4;
  p.max_size = 100;
  p.initial_supply = {10, 10, 10, 10};
  p.buffers = {
      make_buffer(0, 40, true, 0, 0, 0, 3, 5, 5, 7),
      make_buffer(1, 20, true, 1, 2, 1, 3, 5, 50),
      make_buffer(2, 40, false, 3, 1, 0, 3, 30, 5, 7),
  };
  return p;
}

inline GenParams small_gen_params(std::uint64_t seed) {
  GenParams p;
  p.num_instructions = 12;
  p.max_size = 512;
  p.num_tensors = 5;
  p.uses_per_tensor_mean = 1.5;
  p.uses_per_tensor_max = 3;
  p.use_gap_mean = 2;
  p.size_min = 32;
  p.size_max = 256;
  p.size_quantum = 32;
  p.alias_rate = 0.3;
  p.bandwidth_factor = 0.2;
  p.seed = seed;
  return p;
}

}  // namespace mmapgame::testing
