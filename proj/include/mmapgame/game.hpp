#pragma once

#include <array>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mmapgame/memory_grid.hpp"
#include "mmapgame/types.hpp"

namespace mmapgame {

enum class GameStatus { Running, Complete, Infeasible };

std::string_view to_string(GameStatus s);

struct StepResult {
  double reward = 0.0;
  // -episode_return when the step landed in a dead end, else 0; adding it to
  // the rewards so far yields a total return of zero for a lost game.
  double terminal_penalty = 0.0;
  bool done = false;
  GameStatus status = GameStatus::Running;
};

// One play of the memory-mapping game. Copyable: a copy is an independent
// game sharing only the immutable problem, which is what tree search clones.
class GameState {
 public:
  explicit GameState(const ProblemInstance& problem);

  const ProblemInstance& problem() const { return *problem_; }
  GameStatus status() const { return status_; }
  int cursor() const { return cursor_; }
  int num_buffers() const { return static_cast<int>(problem_->buffers.size()); }
  double episode_return() const { return episode_return_; }
  const std::vector<double>& remaining_supply() const { return supply_; }
  const MemoryGrid& grid() const { return grid_; }
  const std::vector<TimeInterval>& committed_copy_spans() const {
    return committed_copies_;
  }
  const Buffer& current_buffer() const;

  // Placement the action would make from this state, or nullopt when the
  // action is infeasible here. Drop always resolves.
  std::optional<Placement> resolve(ActionKind action) const;

  // Legal actions in Copy, NoCopy, Drop order. Empty means a dead end.
  std::vector<ActionKind> legal_actions() const;
  bool is_legal(ActionKind action) const;

  // Reward this buffer would earn if placed now: its marginal latency saving
  // when tables are present, its static benefit otherwise.
  double current_benefit() const;

  // Applies a legal action. Throws IllegalMoveError otherwise.
  StepResult step(ActionKind action);

  // Placements decided so far (length cursor()), or the full solution once
  // complete. total_benefit is the static benefit sum of placed buffers.
  Solution solution() const;

 private:
  std::optional<Placement> resolve_copy() const;
  std::optional<Placement> resolve_nocopy() const;
  std::optional<ByteOffset> pick_offset(const TimeInterval& interval,
                                        const Buffer& b) const;
  bool alias_forces_placement(const Buffer& b) const;
  bool alias_forces_drop(const Buffer& b) const;
  void consume_supply(const TimeInterval& span, bool forward, double amount);
  void refresh_status_after_advance();

  struct ResolutionCache {
    int cursor = -1;
    bool have_copy = false;
    bool have_nocopy = false;
    std::optional<Placement> copy;
    std::optional<Placement> nocopy;
  };

  const ProblemInstance* problem_;
  GameStatus status_ = GameStatus::Running;
  int cursor_ = 0;
  double episode_return_ = 0.0;
  std::vector<Placement> placements_;
  std::vector<double> supply_;
  MemoryGrid grid_;
  std::vector<TimeInterval> committed_copies_;
  std::unordered_map<AliasId, ByteOffset> alias_offset_;
  std::unordered_set<AliasId> alias_dropped_;
  // tensor id -> ids of its buffers placed in fast memory, in decision order
  std::unordered_map<TensorId, std::vector<int>> tensor_allocations_;
  mutable ResolutionCache cache_;
};

}  // namespace mmapgame
