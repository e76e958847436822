#include "mmapgame/types.hpp"

#include <algorithm>
#include <unordered_map>

namespace mmapgame {

std::string_view to_string(ActionKind a) {
  switch (a) {
    case ActionKind::Copy:
      return "copy";
    case ActionKind::NoCopy:
      return "nocopy";
    case ActionKind::Drop:
      return "drop";
  }
  return "?";
}

std::optional<ActionKind> action_from_string(std::string_view s) {
  if (s == "copy") return ActionKind::Copy;
  if (s == "nocopy") return ActionKind::NoCopy;
  if (s == "drop") return ActionKind::Drop;
  return std::nullopt;
}

double ProblemInstance::total_static_benefit() const {
  double sum = 0.0;
  for (const Buffer& b : buffers) sum += b.benefit;
  return sum;
}

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("malformed problem: " + what);
}

}  // namespace

void check_problem(const ProblemInstance& p) {
  if (p.num_instructions <= 0) fail("num_instructions must be positive");
  if (p.max_size <= 0) fail("max_size must be positive");
  if (static_cast<TimeStep>(p.initial_supply.size()) != p.num_instructions)
    fail("initial_supply length must equal num_instructions");
  for (TimeStep t = 0; t < p.num_instructions; ++t)
    if (p.initial_supply[t] < 0.0)
      fail("initial_supply[" + std::to_string(t) + "] is negative");

  std::unordered_map<TensorId, const Buffer*> tensor_rep;
  for (std::size_t i = 0; i < p.buffers.size(); ++i) {
    const Buffer& b = p.buffers[i];
    const std::string tag = "buffer " + std::to_string(b.id);
    if (b.id != static_cast<int>(i)) fail(tag + ": ids must be 0..n-1 in order");
    if (b.size <= 0) fail(tag + ": size must be positive");
    if (b.live_range.is_empty()) fail(tag + ": empty live range");
    if (b.live_range.lo < 0 || b.live_range.hi >= p.num_instructions)
      fail(tag + ": live range outside the program");
    if (!b.live_range.contains(b.target_time))
      fail(tag + ": target_time outside live range");
    if (b.is_output && b.target_time != b.live_range.lo)
      fail(tag + ": output target_time must open its live range");
    if (b.demand < 0.0) fail(tag + ": negative demand");
    if (b.benefit < 0.0) fail(tag + ": negative benefit");
    if (i > 0) {
      const Buffer& prev = p.buffers[i - 1];
      if (prev.target_time > b.target_time)
        fail(tag + ": buffers not sorted by target_time");
    }
    auto [it, inserted] = tensor_rep.emplace(b.tensor_id, &b);
    if (!inserted) {
      const Buffer& rep = *it->second;
      if (rep.size != b.size || !(rep.live_range == b.live_range))
        fail(tag + ": tensor " + std::to_string(b.tensor_id) +
             " buffers disagree on size or live range");
    }
  }

  if (p.latency_tables) {
    if (static_cast<TimeStep>(p.latency_tables->per_instruction.size()) !=
        p.num_instructions)
      fail("latency_tables must cover every instruction");
    for (TimeStep t = 0; t < p.num_instructions; ++t) {
      const InstructionLatency& lt = p.latency_tables->per_instruction[t];
      if (lt.capped.size() > 8) fail("latency table at " + std::to_string(t) +
                                     ": more than 8 capped buffers");
      if (lt.latencies.size() != (std::size_t{1} << lt.capped.size()))
        fail("latency table at " + std::to_string(t) +
             ": latencies size must be 2^capped");
      if (!lt.latencies.empty() && lt.latencies[0] != lt.base)
        fail("latency table at " + std::to_string(t) +
             ": latencies[0] must equal base");
    }
  }
}

}  // namespace mmapgame
