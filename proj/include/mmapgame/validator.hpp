#pragma once

#include <string>
#include <vector>

#include "mmapgame/types.hpp"

namespace mmapgame {

enum class ViolationKind {
  Overlap,
  UseSupply,
  CreationSupply,
  Alias,
  MemorySize,
  CopyExclusivity,
  IntervalShape,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::vector<int> buffer_ids;
  std::string locus;  // human-readable time step / offset context
};

struct ViolationReport {
  std::vector<Violation> violations;
  bool empty() const { return violations.empty(); }
  bool has(ViolationKind k) const;
  std::string to_text() const;
};

// Steps whose supply a placement's transfer consumes, as a closed interval:
// [interval.lo, target) for inputs placed with Copy, (target, interval.hi]
// for outputs placed with Copy, empty otherwise.
TimeInterval copy_interval_of(const Buffer& buffer, const Placement& placement);

std::vector<Violation> check_overlap(const Solution& solution,
                                     const ProblemInstance& problem);
std::vector<Violation> check_supply_demand(const Solution& solution,
                                           const ProblemInstance& problem);
std::vector<Violation> check_alias(const Solution& solution,
                                   const ProblemInstance& problem);
std::vector<Violation> check_memory_size(const Solution& solution,
                                         const ProblemInstance& problem);

// Runs every check plus interval-shape rules. Throws std::invalid_argument
// if the solution does not cover every buffer.
ViolationReport validate(const Solution& solution,
                         const ProblemInstance& problem);

// Sum of static benefits over buffers kept in fast memory.
double total_benefit(const Solution& solution, const ProblemInstance& problem);

}  // namespace mmapgame
