#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mmapgame/game.hpp"

namespace mmapgame {

// Maps a running state and its (non-empty) legal set to one of those actions.
using Policy =
    std::function<ActionKind(const GameState&, const std::vector<ActionKind>&)>;

struct TrajectoryStep {
  int buffer_id = 0;
  ActionKind action = ActionKind::Drop;
  double reward = 0.0;
};

struct BackupEvent {
  int failed_buffer_id = 0;
  AliasId alias_id = 0;
  int restored_cursor = 0;
  double forfeited_benefit = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;  // the surviving action sequence
  std::vector<BackupEvent> backups;
  GameStatus final_status = GameStatus::Running;
  Solution solution;
  double episode_return = 0.0;
  bool budget_exhausted = false;

  int backup_resets() const { return static_cast<int>(backups.size()); }
};

// Plays one episode to completion. Before every decision where no future
// buffer shares an alias group with an already placed one, the current prefix
// becomes the restore point. A dead end rewinds to that prefix and force-drops
// the failing alias group, so the episode always completes. The forfeited
// benefit between restore point and failure is recorded per event.
Trajectory run_episode_with_backup(const ProblemInstance& problem,
                                   const Policy& policy);

// The same mechanism from an arbitrary mid-game state: restore points are
// only taken at or after the given state, so a dead end whose cause predates
// it ends the game as lost (Infeasible). Appends to the optional records.
GameState continue_with_backup(GameState state, const Policy& policy,
                               std::vector<TrajectoryStep>* steps = nullptr,
                               std::vector<BackupEvent>* backups = nullptr);

// Replays a recorded action sequence through a fresh game. Throws
// IllegalMoveError if the sequence does not fit the problem.
GameState replay(const ProblemInstance& problem,
                 const std::vector<TrajectoryStep>& steps);

// Digest of a game state, mixed from cursor, return, supply and placements;
// used to cross-check trajectory replays.
std::uint64_t state_digest(const GameState& state);

}  // namespace mmapgame
