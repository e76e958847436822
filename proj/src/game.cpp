#include "mmapgame/game.hpp"

#include <algorithm>
#include <cmath>

#include "mmapgame/validator.hpp"

namespace mmapgame {

std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::Running:
      return "running";
    case GameStatus::Complete:
      return "complete";
    case GameStatus::Infeasible:
      return "infeasible";
  }
  return "?";
}

GameState::GameState(const ProblemInstance& problem) : problem_(&problem) {
  check_problem(problem);
  supply_ = problem.initial_supply;
  grid_ = MemoryGrid(problem.num_instructions, problem.max_size);
  placements_.reserve(problem.buffers.size());
  status_ = problem.buffers.empty() ? GameStatus::Complete
                                    : GameStatus::Running;
}

const Buffer& GameState::current_buffer() const {
  if (cursor_ >= num_buffers())
    throw IllegalMoveError("no current buffer: game is complete");
  return problem_->buffers[cursor_];
}

bool GameState::alias_forces_placement(const Buffer& b) const {
  return b.alias_id && alias_offset_.count(*b.alias_id) > 0;
}

bool GameState::alias_forces_drop(const Buffer& b) const {
  return b.alias_id && alias_dropped_.count(*b.alias_id) > 0;
}

std::optional<ByteOffset> GameState::pick_offset(const TimeInterval& interval,
                                                 const Buffer& b) const {
  std::optional<ByteOffset> pinned;
  if (b.alias_id) {
    auto it = alias_offset_.find(*b.alias_id);
    if (it != alias_offset_.end()) pinned = it->second;
  }
  return grid_.find_lowest_offset(interval, b.size, b.tensor_id, pinned);
}

// Latest start (inputs) or earliest end (outputs) whose copy span covers the
// demand, clamped to the live range; the span must also share at most one
// step with every committed copy and leave room in memory. Growing the
// interval further can only hurt the latter two, so the supply bound is the
// single candidate to check.
std::optional<Placement> GameState::resolve_copy() const {
  const Buffer& b = current_buffer();
  if (alias_forces_drop(b)) return std::nullopt;

  TimeInterval interval;
  TimeInterval span;  // closed copy span
  if (b.is_output) {
    TimeStep e = b.target_time;
    double available = 0.0;
    while (available < b.demand) {
      ++e;
      if (e > b.live_range.hi) return std::nullopt;
      available += supply_[e];
    }
    interval = {b.target_time, e};
    span = {b.target_time + 1, e};
  } else {
    TimeStep s = b.target_time;
    double available = 0.0;
    while (available < b.demand) {
      --s;
      if (s < b.live_range.lo) return std::nullopt;
      available += supply_[s];
    }
    interval = {s, b.target_time};
    span = {s, b.target_time - 1};
  }

  for (const TimeInterval& other : committed_copies_)
    if (span.overlap_length(other) > 1) return std::nullopt;

  const auto offset = pick_offset(interval, b);
  if (!offset) return std::nullopt;
  return Placement{ActionKind::Copy, *offset, interval, span};
}

std::optional<Placement> GameState::resolve_nocopy() const {
  const Buffer& b = current_buffer();
  if (alias_forces_drop(b)) return std::nullopt;

  if (b.is_output) {
    const auto offset = pick_offset(b.live_range, b);
    if (!offset) return std::nullopt;
    return Placement{ActionKind::NoCopy, *offset, b.live_range,
                     TimeInterval::empty()};
  }

  // Reuse: extend the latest same-tensor allocation that starts before the
  // target. The extension begins at the latest allocated step before the
  // target, so it overlaps what it extends.
  auto it = tensor_allocations_.find(b.tensor_id);
  if (it == tensor_allocations_.end()) return std::nullopt;
  TimeStep start = -1;
  ByteOffset reuse_offset = kSlowMemory;
  for (int id : it->second) {
    const TimeInterval& prev = placements_[id].interval;
    if (prev.lo >= b.target_time) continue;
    const TimeStep candidate = std::min(prev.hi, b.target_time - 1);
    if (candidate > start ||
        (candidate == start && placements_[id].offset < reuse_offset)) {
      start = candidate;
      reuse_offset = placements_[id].offset;
    }
  }
  if (start < 0) return std::nullopt;

  if (b.alias_id) {
    auto pin = alias_offset_.find(*b.alias_id);
    if (pin != alias_offset_.end() && pin->second != reuse_offset)
      return std::nullopt;
  }
  const TimeInterval interval{start, b.target_time};
  if (!grid_.is_free(interval, reuse_offset, b.size, b.tensor_id))
    return std::nullopt;
  return Placement{ActionKind::NoCopy, reuse_offset, interval,
                   TimeInterval::empty()};
}

std::optional<Placement> GameState::resolve(ActionKind action) const {
  if (status_ != GameStatus::Running)
    throw IllegalMoveError("cannot resolve an action: game is " +
                           std::string(to_string(status_)));
  if (action == ActionKind::Drop) {
    if (alias_forces_placement(current_buffer())) return std::nullopt;
    return Placement{};
  }
  if (cache_.cursor != cursor_) {
    cache_ = ResolutionCache{};
    cache_.cursor = cursor_;
  }
  if (action == ActionKind::Copy) {
    if (!cache_.have_copy) {
      cache_.copy = resolve_copy();
      cache_.have_copy = true;
    }
    return cache_.copy;
  }
  if (!cache_.have_nocopy) {
    cache_.nocopy = resolve_nocopy();
    cache_.have_nocopy = true;
  }
  return cache_.nocopy;
}

std::vector<ActionKind> GameState::legal_actions() const {
  std::vector<ActionKind> out;
  if (status_ != GameStatus::Running) return out;
  for (ActionKind a : kAllActions)
    if (resolve(a)) out.push_back(a);
  return out;
}

bool GameState::is_legal(ActionKind action) const {
  return status_ == GameStatus::Running && resolve(action).has_value();
}

double GameState::current_benefit() const {
  const Buffer& b = current_buffer();
  if (!problem_->latency_tables) return b.benefit;
  const InstructionLatency& lt =
      problem_->latency_tables->per_instruction[b.target_time];
  for (const auto& [id, saving] : lt.extra_savings)
    if (id == b.id) return saving;
  std::uint32_t placed_mask = 0;
  int self_bit = -1;
  for (std::size_t i = 0; i < lt.capped.size(); ++i) {
    const int id = lt.capped[i];
    if (id == b.id) {
      self_bit = static_cast<int>(i);
    } else if (id < cursor_ && placements_[id].in_fast_memory()) {
      placed_mask |= 1u << i;
    }
  }
  if (self_bit < 0) return b.benefit;  // instruction without a table row
  return lt.lookup(placed_mask) - lt.lookup(placed_mask | (1u << self_bit));
}

void GameState::consume_supply(const TimeInterval& span, bool forward,
                               double amount) {
  double remaining = amount;
  if (forward) {
    for (TimeStep t = span.lo; t <= span.hi && remaining > 0.0; ++t) {
      const double take = std::min(supply_[t], remaining);
      supply_[t] -= take;
      remaining -= take;
    }
  } else {
    for (TimeStep t = span.hi; t >= span.lo && remaining > 0.0; --t) {
      const double take = std::min(supply_[t], remaining);
      supply_[t] -= take;
      remaining -= take;
    }
  }
}

void GameState::refresh_status_after_advance() {
  if (cursor_ >= num_buffers()) {
    status_ = GameStatus::Complete;
    return;
  }
  status_ = GameStatus::Running;
  if (legal_actions().empty()) status_ = GameStatus::Infeasible;
}

StepResult GameState::step(ActionKind action) {
  if (status_ != GameStatus::Running)
    throw IllegalMoveError("step on a finished game");
  const auto placement = resolve(action);
  if (!placement)
    throw IllegalMoveError("illegal action " + std::string(to_string(action)) +
                           " for buffer " + std::to_string(cursor_));
  const Buffer& b = current_buffer();

  StepResult result;
  if (action == ActionKind::Drop) {
    if (b.alias_id) alias_dropped_.insert(*b.alias_id);
  } else {
    result.reward = current_benefit();
    grid_.occupy(b, placement->interval, placement->offset);
    tensor_allocations_[b.tensor_id].push_back(b.id);
    if (b.alias_id) alias_offset_.emplace(*b.alias_id, placement->offset);
    if (action == ActionKind::Copy && !placement->copy_interval.is_empty()) {
      consume_supply(placement->copy_interval, b.is_output, b.demand);
      committed_copies_.push_back(placement->copy_interval);
    }
  }
  placements_.push_back(*placement);
  episode_return_ += result.reward;
  ++cursor_;
  refresh_status_after_advance();

  result.status = status_;
  result.done = status_ != GameStatus::Running;
  if (status_ == GameStatus::Infeasible)
    result.terminal_penalty = -episode_return_;
  return result;
}

Solution GameState::solution() const {
  Solution s;
  s.placements = placements_;
  for (int i = 0; i < cursor_; ++i)
    if (placements_[i].in_fast_memory())
      s.total_benefit += problem_->buffers[i].benefit;
  return s;
}

}  // namespace mmapgame
