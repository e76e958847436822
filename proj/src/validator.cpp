#include "mmapgame/validator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mmapgame/memory_grid.hpp"

namespace mmapgame {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Overlap:
      return "Overlap";
    case ViolationKind::UseSupply:
      return "UseSupply";
    case ViolationKind::CreationSupply:
      return "CreationSupply";
    case ViolationKind::Alias:
      return "Alias";
    case ViolationKind::MemorySize:
      return "MemorySize";
    case ViolationKind::CopyExclusivity:
      return "CopyExclusivity";
    case ViolationKind::IntervalShape:
      return "IntervalShape";
  }
  return "?";
}

bool ViolationReport::has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

std::string ViolationReport::to_text() const {
  std::ostringstream os;
  for (const Violation& v : violations) {
    os << to_string(v.kind) << " [buffers";
    for (int id : v.buffer_ids) os << ' ' << id;
    os << "] " << v.locus << '\n';
  }
  return os.str();
}

TimeInterval copy_interval_of(const Buffer& buffer,
                              const Placement& placement) {
  if (placement.action != ActionKind::Copy || placement.interval.is_empty())
    return TimeInterval::empty();
  if (buffer.is_output)
    return {buffer.target_time + 1, placement.interval.hi};
  return {placement.interval.lo, buffer.target_time - 1};
}

namespace {

std::string step_locus(TimeStep t) { return "at step " + std::to_string(t); }

void require_complete(const Solution& solution,
                      const ProblemInstance& problem) {
  if (solution.placements.size() != problem.buffers.size())
    throw std::invalid_argument(
        "solution covers " + std::to_string(solution.placements.size()) +
        " buffers, problem has " + std::to_string(problem.buffers.size()));
}

// Consumes `amount` of supply across the closed span, starting at the step
// nearest the target and moving outward, clipping at what is available.
void consume_supply(std::vector<double>& supply, const TimeInterval& span,
                    bool outward_forward, double amount) {
  if (span.is_empty()) return;
  double remaining = amount;
  if (outward_forward) {
    for (TimeStep t = span.lo; t <= span.hi && remaining > 0.0; ++t) {
      const double take = std::min(supply[t], remaining);
      supply[t] -= take;
      remaining -= take;
    }
  } else {
    for (TimeStep t = span.hi; t >= span.lo && remaining > 0.0; --t) {
      const double take = std::min(supply[t], remaining);
      supply[t] -= take;
      remaining -= take;
    }
  }
}

}  // namespace

std::vector<Violation> check_overlap(const Solution& solution,
                                     const ProblemInstance& problem) {
  require_complete(solution, problem);
  MemoryGrid grid(problem.num_instructions, problem.max_size);
  for (std::size_t i = 0; i < problem.buffers.size(); ++i) {
    const Placement& p = solution.placements[i];
    if (!p.in_fast_memory() || p.interval.is_empty()) continue;
    if (p.offset < 0 || p.offset + problem.buffers[i].size > problem.max_size)
      continue;  // reported by check_memory_size
    if (p.interval.lo < 0 || p.interval.hi >= problem.num_instructions)
      continue;  // reported as IntervalShape
    grid.force_occupy(problem.buffers[i], p.interval, p.offset);
  }
  std::vector<Violation> out;
  for (const OverlapConflict& c : grid.sweep_conflicts())
    out.push_back({ViolationKind::Overlap,
                   {c.buffer_a, c.buffer_b},
                   step_locus(c.step) + ", byte " + std::to_string(c.byte)});
  return out;
}

std::vector<Violation> check_supply_demand(const Solution& solution,
                                           const ProblemInstance& problem) {
  require_complete(solution, problem);
  std::vector<Violation> out;
  std::vector<double> supply = problem.initial_supply;
  std::vector<TimeInterval> committed;
  std::vector<int> committed_ids;

  for (std::size_t i = 0; i < problem.buffers.size(); ++i) {
    const Buffer& b = problem.buffers[i];
    const Placement& p = solution.placements[i];
    if (!p.in_fast_memory()) continue;

    if (p.action == ActionKind::Copy) {
      // clamp to the program so malformed intervals cannot index out of range
      const TimeInterval span = copy_interval_of(b, p).intersection(
          {0, problem.num_instructions - 1});
      double available = 0.0;
      for (TimeStep t = span.lo; t <= span.hi; ++t) available += supply[t];
      if (available < b.demand)
        out.push_back({b.is_output ? ViolationKind::CreationSupply
                                   : ViolationKind::UseSupply,
                       {b.id},
                       "copy span supplies " + std::to_string(available) +
                           " of demand " + std::to_string(b.demand)});
      for (std::size_t k = 0; k < committed.size(); ++k)
        if (span.overlap_length(committed[k]) > 1)
          out.push_back({ViolationKind::CopyExclusivity,
                         {committed_ids[k], b.id},
                         "copy spans share more than one step"});
      if (!span.is_empty()) {
        consume_supply(supply, span, b.is_output, b.demand);
        committed.push_back(span);
        committed_ids.push_back(b.id);
      }
    } else if (p.action == ActionKind::NoCopy) {
      if (b.is_output) {
        if (!(p.interval == b.live_range))
          out.push_back({ViolationKind::CreationSupply,
                         {b.id},
                         "output placed without copy must span its live "
                         "range"});
      } else {
        bool reused = false;
        for (std::size_t j = 0; j < i && !reused; ++j) {
          const Buffer& prev = problem.buffers[j];
          const Placement& pp = solution.placements[j];
          reused = prev.tensor_id == b.tensor_id && pp.in_fast_memory() &&
                   !pp.interval.is_empty() &&
                   pp.interval.lo < b.target_time &&
                   pp.interval.intersects(p.interval);
        }
        if (!reused)
          out.push_back({ViolationKind::UseSupply,
                         {b.id},
                         "no earlier allocation of tensor " +
                             std::to_string(b.tensor_id) + " to reuse"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_alias(const Solution& solution,
                                   const ProblemInstance& problem) {
  require_complete(solution, problem);
  std::vector<Violation> out;
  std::map<AliasId, std::pair<int, ByteOffset>> group_offset;
  for (const Buffer& b : problem.buffers) {
    if (!b.alias_id) continue;
    const ByteOffset offset = solution.placements[b.id].offset;
    auto [it, inserted] = group_offset.emplace(*b.alias_id,
                                               std::make_pair(b.id, offset));
    if (!inserted && it->second.second != offset)
      out.push_back({ViolationKind::Alias,
                     {it->second.first, b.id},
                     "alias group " + std::to_string(*b.alias_id) +
                         " offsets differ"});
  }
  return out;
}

std::vector<Violation> check_memory_size(const Solution& solution,
                                         const ProblemInstance& problem) {
  require_complete(solution, problem);
  std::vector<Violation> out;
  for (const Buffer& b : problem.buffers) {
    const Placement& p = solution.placements[b.id];
    if (p.in_fast_memory() &&
        (p.offset < 0 || p.offset + b.size > problem.max_size))
      out.push_back({ViolationKind::MemorySize,
                     {b.id},
                     "offset " + std::to_string(p.offset) + " + size " +
                         std::to_string(b.size) + " outside capacity " +
                         std::to_string(problem.max_size)});
  }
  return out;
}

namespace {

std::vector<Violation> check_interval_shape(const Solution& solution,
                                            const ProblemInstance& problem) {
  std::vector<Violation> out;
  for (const Buffer& b : problem.buffers) {
    const Placement& p = solution.placements[b.id];
    const bool placed = p.in_fast_memory();
    if (placed != (p.action != ActionKind::Drop) ||
        placed == p.interval.is_empty()) {
      out.push_back({ViolationKind::IntervalShape,
                     {b.id},
                     "action, offset and interval disagree"});
      continue;
    }
    if (!placed) continue;
    if (!p.interval.contains(b.target_time))
      out.push_back({ViolationKind::IntervalShape,
                     {b.id},
                     "interval misses " + step_locus(b.target_time)});
    if (p.interval.lo < 0 || p.interval.hi >= problem.num_instructions)
      out.push_back({ViolationKind::IntervalShape,
                     {b.id},
                     "interval outside the program"});
    if (p.action == ActionKind::Copy) {
      if (!b.is_output && p.interval.hi != b.target_time)
        out.push_back({ViolationKind::IntervalShape,
                       {b.id},
                       "input copy interval must end at its target"});
      if (b.is_output && p.interval.lo != b.target_time)
        out.push_back({ViolationKind::IntervalShape,
                       {b.id},
                       "output copy interval must start at its target"});
    }
  }
  return out;
}

}  // namespace

ViolationReport validate(const Solution& solution,
                         const ProblemInstance& problem) {
  require_complete(solution, problem);
  ViolationReport report;
  auto append = [&report](std::vector<Violation> vs) {
    for (Violation& v : vs) report.violations.push_back(std::move(v));
  };
  append(check_interval_shape(solution, problem));
  append(check_overlap(solution, problem));
  append(check_supply_demand(solution, problem));
  append(check_alias(solution, problem));
  append(check_memory_size(solution, problem));
  return report;
}

double total_benefit(const Solution& solution,
                     const ProblemInstance& problem) {
  require_complete(solution, problem);
  double sum = 0.0;
  for (const Buffer& b : problem.buffers)
    if (solution.placements[b.id].in_fast_memory()) sum += b.benefit;
  return sum;
}

}  // namespace mmapgame
