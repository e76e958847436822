#include "mmapgame/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mmapgame/rng.hpp"

namespace mmapgame {

namespace {

struct TensorDraft {
  TensorId id = 0;
  ByteSize size = 0;
  TimeStep creation = 0;
  std::vector<TimeStep> uses;
  std::optional<AliasId> alias;
};

ByteSize sample_size(Rng& rng, const GenParams& p) {
  const ByteSize cap = std::min(p.size_max, p.max_size);
  const ByteSize lo = std::min(p.size_min, cap);
  // log-uniform over [lo, cap], snapped to the quantum
  const double x =
      std::exp(rng.uniform(std::log(static_cast<double>(lo)),
                           std::log(static_cast<double>(cap))));
  ByteSize s = static_cast<ByteSize>(x);
  if (p.size_quantum > 1)
    s = std::max<ByteSize>(p.size_quantum, s / p.size_quantum * p.size_quantum);
  return std::clamp<ByteSize>(s, 1, cap);
}

}  // namespace

ProblemInstance generate(const GenParams& p) {
  if (p.num_instructions <= 0 || p.max_size <= 0 || p.num_tensors < 0)
    throw std::invalid_argument("generator: sizes must be positive");
  if (p.num_tensors > p.num_instructions)
    throw std::invalid_argument(
        "generator: more tensors than instructions (each tensor needs a "
        "creation slot)");
  if (p.bandwidth_factor <= 0.0)
    throw std::invalid_argument("generator: bandwidth_factor must be > 0");
  if (p.size_min <= 0 || p.size_max < p.size_min)
    throw std::invalid_argument("generator: bad size range");

  Rng rng(p.seed);
  const TimeStep T = p.num_instructions;

  std::vector<TensorDraft> tensors(p.num_tensors);
  for (int k = 0; k < p.num_tensors; ++k) {
    TensorDraft& d = tensors[k];
    d.id = k;
    d.size = sample_size(rng, p);
    d.creation = rng.uniform_int(0, T - 1);
    int uses = std::min(p.uses_per_tensor_max,
                        rng.poisson(p.uses_per_tensor_mean));
    TimeStep t = d.creation;
    for (int u = 0; u < uses; ++u) {
      t += 1 + static_cast<TimeStep>(rng.below(
               static_cast<std::size_t>(std::max<TimeStep>(
                   1, 2 * p.use_gap_mean - 1))));
      if (t >= T) break;
      d.uses.push_back(t);
    }
  }

  // Alias pairs across same-size tensor creations.
  {
    std::map<ByteSize, std::vector<int>> by_size;
    for (int k = 0; k < p.num_tensors; ++k)
      by_size[tensors[k].size].push_back(k);
    AliasId next_alias = 0;
    for (auto& [size, group] : by_size) {
      for (std::size_t i = 0; i + 1 < group.size(); i += 2)
        if (rng.chance(p.alias_rate)) {
          tensors[group[i]].alias = next_alias;
          tensors[group[i + 1]].alias = next_alias;
          ++next_alias;
        }
    }
  }

  ProblemInstance problem;
  problem.num_instructions = T;
  problem.max_size = p.max_size;

  for (const TensorDraft& d : tensors) {
    const TimeStep last = d.uses.empty() ? d.creation : d.uses.back();
    const TimeInterval live{d.creation, last};
    Buffer creation;
    creation.size = d.size;
    creation.is_output = true;
    creation.target_time = d.creation;
    creation.tensor_id = d.id;
    creation.alias_id = d.alias;
    creation.live_range = live;
    creation.demand =
        p.bandwidth_factor * static_cast<double>(d.size);
    problem.buffers.push_back(creation);
    for (TimeStep use : d.uses) {
      Buffer b = creation;
      b.is_output = false;
      b.target_time = use;
      b.alias_id = std::nullopt;
      problem.buffers.push_back(b);
    }
  }
  std::stable_sort(problem.buffers.begin(), problem.buffers.end(),
                   [](const Buffer& a, const Buffer& b) {
                     return a.target_time < b.target_time;
                   });
  for (std::size_t i = 0; i < problem.buffers.size(); ++i)
    problem.buffers[i].id = static_cast<int>(i);

  // Per-instruction latency tables over the (at most 8) largest buffers.
  if (p.emit_tables) {
    LatencyTables tables;
    tables.per_instruction.resize(T);
    std::vector<std::vector<int>> by_instruction(T);
    for (const Buffer& b : problem.buffers)
      by_instruction[b.target_time].push_back(b.id);

    for (TimeStep t = 0; t < T; ++t) {
      InstructionLatency& lt = tables.per_instruction[t];
      lt.base = rng.uniform(p.base_latency_min, p.base_latency_max);

      std::vector<int> ids = by_instruction[t];
      std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const auto sa = problem.buffers[a].size;
        const auto sb = problem.buffers[b].size;
        return sa != sb ? sa > sb : a < b;
      });
      const std::size_t cap = std::min<std::size_t>(8, ids.size());
      lt.capped.assign(ids.begin(), ids.begin() + cap);
      std::sort(lt.capped.begin(), lt.capped.end());

      const std::size_t k = lt.capped.size();
      std::vector<double> saving(k);
      const double share =
          1.0 / static_cast<double>(std::max<std::size_t>(ids.size(), 1));
      for (std::size_t i = 0; i < k; ++i)
        saving[i] =
            lt.base * share * rng.uniform(p.saving_frac_min, p.saving_frac_max);

      for (std::size_t i = cap; i < ids.size(); ++i)
        lt.extra_savings.emplace_back(
            ids[i], lt.base * share *
                        rng.uniform(p.saving_frac_min, p.saving_frac_max));
      std::sort(lt.extra_savings.begin(), lt.extra_savings.end());

      std::vector<std::vector<double>> pair_extra(k,
                                                  std::vector<double>(k, 0.0));
      double pair_total = 0.0;
      if (p.interaction_scale > 0.0) {
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = i + 1; j < k; ++j)
            if (rng.chance(p.interaction_pair_prob)) {
              pair_extra[i][j] = p.interaction_scale * rng.unit() * 0.5 *
                                 (saving[i] + saving[j]);
              pair_total += pair_extra[i][j];
            }
      }
      // Rescale interactions so the deepest subset stays well above zero.
      double additive_total =
          std::accumulate(saving.begin(), saving.end(), 0.0);
      for (const auto& [id, s] : lt.extra_savings) additive_total += s;
      const double headroom = 0.9 * lt.base - additive_total;
      if (pair_total > headroom && pair_total > 0.0) {
        const double scale = std::max(0.0, headroom) / pair_total;
        for (auto& row : pair_extra)
          for (double& x : row) x *= scale;
      }

      lt.latencies.resize(std::size_t{1} << k);
      for (std::uint32_t mask = 0; mask < lt.latencies.size(); ++mask) {
        double latency = lt.base;
        for (std::size_t i = 0; i < k; ++i) {
          if (!(mask & (1u << i))) continue;
          latency -= saving[i];
          for (std::size_t j = i + 1; j < k; ++j)
            if (mask & (1u << j)) latency -= pair_extra[i][j];
        }
        lt.latencies[mask] = latency;
      }
    }
    problem.latency_tables = std::move(tables);
    derive_supply_benefit(problem);
  } else {
    problem.initial_supply.resize(T);
    for (double& s : problem.initial_supply)
      s = rng.uniform(p.base_latency_min, p.base_latency_max);
    for (Buffer& b : problem.buffers)
      b.benefit = rng.uniform(p.saving_frac_min, p.saving_frac_max) *
                  0.5 * (p.base_latency_min + p.base_latency_max);
  }

  check_problem(problem);
  return problem;
}

namespace {

void check_monotone(const InstructionLatency& lt, TimeStep t) {
  for (std::uint32_t mask = 0; mask < lt.latencies.size(); ++mask)
    for (std::size_t bit = 0; bit < lt.capped.size(); ++bit)
      if (!(mask & (1u << bit)) &&
          lt.lookup(mask) < lt.lookup(mask | (1u << bit)))
        throw std::invalid_argument(
            "latency table at instruction " + std::to_string(t) +
            " is not monotone");
  for (const auto& [id, saving] : lt.extra_savings)
    if (saving < 0.0)
      throw std::invalid_argument(
          "latency table at instruction " + std::to_string(t) +
          " has a negative extra saving");
}

}  // namespace

void derive_supply_benefit(ProblemInstance& problem) {
  if (!problem.latency_tables)
    throw std::invalid_argument("derive_supply_benefit needs latency tables");
  const auto& tables = problem.latency_tables->per_instruction;
  if (static_cast<TimeStep>(tables.size()) != problem.num_instructions)
    throw std::invalid_argument("latency tables must cover every instruction");

  problem.initial_supply.assign(problem.num_instructions, 0.0);
  for (TimeStep t = 0; t < problem.num_instructions; ++t) {
    const InstructionLatency& lt = tables[t];
    check_monotone(lt, t);
    double all_in = lt.latencies.empty() ? lt.base
                                         : lt.latencies[lt.latencies.size() - 1];
    for (const auto& [id, saving] : lt.extra_savings) all_in -= saving;
    problem.initial_supply[t] = all_in;
  }

  for (Buffer& b : problem.buffers) {
    const InstructionLatency& lt = tables[b.target_time];
    bool found = false;
    for (std::size_t i = 0; i < lt.capped.size() && !found; ++i)
      if (lt.capped[i] == b.id) {
        b.benefit = lt.base - lt.lookup(1u << i);
        found = true;
      }
    for (const auto& [id, saving] : lt.extra_savings)
      if (id == b.id) {
        b.benefit = saving;
        found = true;
      }
    if (!found)
      throw std::invalid_argument("buffer " + std::to_string(b.id) +
                                  " missing from its instruction's table");
  }
}

double proxy_latency(const ProblemInstance& problem,
                     const Solution& solution) {
  if (!problem.latency_tables)
    throw std::invalid_argument("proxy_latency needs latency tables");
  if (solution.placements.size() != problem.buffers.size())
    throw std::invalid_argument("proxy_latency needs a complete solution");

  const auto& tables = problem.latency_tables->per_instruction;
  double total = 0.0;
  for (TimeStep t = 0; t < problem.num_instructions; ++t)
    total += tables[t].base;
  for (const Buffer& b : problem.buffers) {
    const Placement& p = solution.placements[b.id];
    if (!p.in_fast_memory() || !p.interval.contains(b.target_time)) continue;
    // accounted per instruction below via masks; extras are additive
    const InstructionLatency& lt = tables[b.target_time];
    for (const auto& [id, saving] : lt.extra_savings)
      if (id == b.id) total -= saving;
  }
  for (TimeStep t = 0; t < problem.num_instructions; ++t) {
    const InstructionLatency& lt = tables[t];
    if (lt.capped.empty()) continue;
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < lt.capped.size(); ++i) {
      const Buffer& b = problem.buffers[lt.capped[i]];
      const Placement& p = solution.placements[b.id];
      if (p.in_fast_memory() && p.interval.contains(b.target_time))
        mask |= 1u << i;
    }
    total -= lt.base - lt.lookup(mask);
  }
  return total;
}

double baseline_latency(const ProblemInstance& problem) {
  if (!problem.latency_tables)
    throw std::invalid_argument("baseline_latency needs latency tables");
  double total = 0.0;
  for (const InstructionLatency& lt : problem.latency_tables->per_instruction)
    total += lt.base;
  return total;
}

}  // namespace mmapgame
