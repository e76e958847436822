#pragma once

#include <cstdint>

#include "mmapgame/types.hpp"

namespace mmapgame {

// Knobs for synthetic instances. Demands are size * bandwidth_factor; supply
// and benefit values are derived from sampled per-instruction latency tables.
struct GenParams {
  TimeStep num_instructions = 64;
  ByteSize max_size = 4096;
  int num_tensors = 24;
  double uses_per_tensor_mean = 2.0;  // Poisson
  int uses_per_tensor_max = 6;
  TimeStep use_gap_mean = 4;          // geometric-ish spacing between uses
  ByteSize size_min = 64;
  ByteSize size_max = 1024;
  ByteSize size_quantum = 64;
  double alias_rate = 0.1;            // chance a tensor creation joins a pair
  double bandwidth_factor = 0.05;     // demand per byte
  // latency model
  double base_latency_min = 50.0;
  double base_latency_max = 150.0;
  double saving_frac_min = 0.05;      // per-buffer share of base latency
  double saving_frac_max = 0.25;
  double interaction_scale = 0.0;     // pairwise extra saving, 0 = additive
  double interaction_pair_prob = 0.5;
  bool emit_tables = true;
  std::uint64_t seed = 0;
};

// Deterministic synthetic problem for a parameter set. Throws
// std::invalid_argument on unsatisfiable parameters.
ProblemInstance generate(const GenParams& params);

// Rewrites supply and benefit values from the instance's latency tables:
// supply(t) is the all-in-fast-memory execution time of instruction t, the
// benefit of a buffer is its lone marginal saving. Throws on missing or
// non-monotone tables. Idempotent.
void derive_supply_benefit(ProblemInstance& problem);

// End-to-end execution time of the program under a solution, summed from the
// per-instruction tables; buffers beyond a table's cap contribute their
// additive saving.
double proxy_latency(const ProblemInstance& problem, const Solution& solution);

// Latency with every buffer in slow memory (the all-Drop row sum).
double baseline_latency(const ProblemInstance& problem);

}  // namespace mmapgame
