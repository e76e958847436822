#include "mmapgame/episode.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "mmapgame/validator.hpp"

namespace mmapgame {

namespace {

// Alias bookkeeping for restore-point eligibility: a group is open while one
// of its members is placed and another is still undecided.
struct AliasTracker {
  std::unordered_map<AliasId, int> last_index;
  std::unordered_map<AliasId, int> placed_members;
  int open_groups = 0;

  explicit AliasTracker(const GameState& state) {
    const ProblemInstance& problem = state.problem();
    for (const Buffer& b : problem.buffers)
      if (b.alias_id) last_index[*b.alias_id] = b.id;
    const Solution decided = state.solution();
    for (int i = 0; i < state.cursor(); ++i) {
      const Buffer& b = problem.buffers[i];
      if (b.alias_id && decided.placements[i].in_fast_memory() &&
          placed_members[*b.alias_id]++ == 0 &&
          last_index[*b.alias_id] >= state.cursor())
        ++open_groups;
    }
  }

  void on_place(const Buffer& b, int index) {
    if (!b.alias_id) return;
    if (placed_members[*b.alias_id]++ == 0 && last_index[*b.alias_id] > index)
      ++open_groups;
  }

  void on_pass(const Buffer& b, int index) {
    // called after deciding `index`; closes groups whose last member this was
    if (!b.alias_id) return;
    if (last_index[*b.alias_id] == index && placed_members[*b.alias_id] > 0)
      --open_groups;
  }
};

}  // namespace

std::uint64_t state_digest(const GameState& state) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  auto mix_double = [&mix](double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    mix(bits);
  };
  mix(static_cast<std::uint64_t>(state.cursor()));
  mix_double(state.episode_return());
  for (double w : state.remaining_supply()) mix_double(w);
  const Solution partial = state.solution();
  for (const Placement& p : partial.placements) {
    mix(static_cast<std::uint64_t>(p.action));
    mix(static_cast<std::uint64_t>(p.offset));
    mix(static_cast<std::uint64_t>(p.interval.lo));
    mix(static_cast<std::uint64_t>(p.interval.hi));
  }
  return h;
}

GameState continue_with_backup(GameState state, const Policy& policy,
                               std::vector<TrajectoryStep>* steps,
                               std::vector<BackupEvent>* backups) {
  const ProblemInstance& problem = state.problem();
  bool has_alias = false;
  for (const Buffer& b : problem.buffers) has_alias |= b.alias_id.has_value();

  std::unordered_set<AliasId> forced_drop;
  AliasTracker tracker(state);
  std::optional<GameState> origin;  // restore base; only kept when needed
  if (has_alias) origin = state;
  const int origin_cursor = state.cursor();
  std::vector<ActionKind> taken;  // actions since origin

  int restore_point = -1;  // actions-since-origin count; -1: none yet
  double restore_return = 0.0;
  std::size_t resets = 0;
  std::size_t max_resets = 1;
  for (const Buffer& b : problem.buffers)
    if (b.alias_id) ++max_resets;

  while (state.status() != GameStatus::Complete) {
    if (state.status() == GameStatus::Running && tracker.open_groups == 0) {
      restore_point = static_cast<int>(taken.size());
      restore_return = state.episode_return();
    }

    const std::vector<ActionKind> legal = state.legal_actions();
    if (legal.empty()) {
      // Dead end: only an alias-pinned buffer can lack even Drop.
      const Buffer& failed = state.current_buffer();
      if (!failed.alias_id)
        throw std::logic_error("dead end at a buffer without an alias group");
      if (restore_point < 0 || resets >= max_resets)
        return state;  // unsalvageable from here; the game stays lost
      ++resets;
      if (backups)
        backups->push_back({failed.id, *failed.alias_id,
                            origin_cursor + restore_point,
                            state.episode_return() - restore_return});
      forced_drop.insert(*failed.alias_id);

      // Rewind by replaying the surviving prefix; recorded rewards stay
      // valid because the game is deterministic in its action sequence.
      taken.resize(restore_point);
      if (steps)
        steps->resize(steps->size() -
                      (static_cast<std::size_t>(state.cursor()) -
                       origin_cursor - taken.size()));
      state = *origin;
      for (ActionKind a : taken) state.step(a);
      tracker = AliasTracker(state);
      continue;
    }

    const Buffer& current = state.current_buffer();
    ActionKind action;
    if (current.alias_id && forced_drop.count(*current.alias_id)) {
      action = ActionKind::Drop;
    } else {
      action = policy(state, legal);
      if (std::find(legal.begin(), legal.end(), action) == legal.end())
        throw IllegalMoveError("policy chose an illegal action");
    }

    const int index = state.cursor();
    const StepResult result = state.step(action);
    taken.push_back(action);
    if (steps) steps->push_back({index, action, result.reward});
    if (action != ActionKind::Drop) tracker.on_place(current, index);
    tracker.on_pass(current, index);
  }
  return state;
}

Trajectory run_episode_with_backup(const ProblemInstance& problem,
                                   const Policy& policy) {
  Trajectory traj;
  GameState final_state = continue_with_backup(
      GameState(problem), policy, &traj.steps, &traj.backups);
  traj.final_status = final_state.status();
  traj.solution = final_state.solution();
  traj.episode_return = final_state.episode_return();
  return traj;
}

GameState replay(const ProblemInstance& problem,
                 const std::vector<TrajectoryStep>& steps) {
  GameState state(problem);
  for (const TrajectoryStep& s : steps) {
    if (state.status() != GameStatus::Running)
      throw IllegalMoveError("trajectory longer than the game");
    if (s.buffer_id != state.cursor())
      throw IllegalMoveError("trajectory step out of order at buffer " +
                             std::to_string(s.buffer_id));
    state.step(s.action);
  }
  return state;
}

}  // namespace mmapgame
