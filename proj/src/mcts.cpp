#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include "mmapgame/rng.hpp"
#include "mmapgame/solvers.hpp"

namespace mmapgame {

namespace {

using Clock = std::chrono::steady_clock;

struct MinMax {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void update(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double normalize(double v) const {
    if (hi > lo) return (v - lo) / (hi - lo);
    return v;
  }
};

struct Node;

struct Edge {
  ActionKind action = ActionKind::Drop;
  double prior = 0.0;
  double reward = 0.0;  // filled on first traversal
  int visits = 0;
  double value_sum = 0.0;
  double best_value = 0.0;  // max return-to-go seen through this edge
  std::unique_ptr<Node> child;

  // The game is deterministic and single-player: any return seen through an
  // edge is achievable on demand, so the edge exploits its best line rather
  // than the mean over exploratory continuations.
  double q() const { return best_value; }
};

struct Node {
  bool expanded = false;
  int visits = 0;
  std::vector<Edge> edges;
};

class Search {
 public:
  explicit Search(const SolverConfig& config)
      : config_(config), rng_(config.seed) {
    if (config_.budget_seconds)
      deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(
                                         *config_.budget_seconds));
  }

  bool budget_exhausted() const {
    if (config_.budget_steps && simulations_used_ >= *config_.budget_steps)
      return true;
    if (deadline_ && Clock::now() >= *deadline_) return true;
    return false;
  }

  ActionKind act(const GameState& state, const std::vector<ActionKind>& legal,
                 int move_number) {
    if (state.cursor() != expected_cursor_ || !root_) root_ = nullptr;
    if (!root_) root_ = std::make_unique<Node>();
    if (!root_->expanded) expand(*root_, legal);
    refresh_priors(*root_, legal);

    // Normalization is per search; prime it with the retained subtree.
    minmax_ = MinMax{};
    for (const Edge& e : root_->edges)
      if (e.visits > 0) minmax_.update(e.q());

    const int target = simulations_for_move(state);
    ActionKind action;
    if (target < 3) {
      // Not enough time for the search to out-judge its own rollout policy.
      action = greedy_action(state, legal, config_);
    } else {
      const auto sims_start = Clock::now();
      int ran = 0;
      for (; ran < target && !budget_exhausted(); ++ran) {
        simulate(state);
        ++simulations_used_;
      }
      if (ran > 0) {
        const double per_sim =
            std::chrono::duration<double>(Clock::now() - sims_start).count() /
            ran;
        sim_seconds_ = sim_seconds_ > 0.0 ? 0.7 * sim_seconds_ + 0.3 * per_sim
                                          : per_sim;
      }
      action = pick_action(state, legal, move_number);
    }
    descend(action);
    expected_cursor_ = state.cursor() + 1;
    return action;
  }

  // Under a wall-clock budget, spread simulations over the remaining moves,
  // spending ahead of schedule since early placements matter most.
  int simulations_for_move(const GameState& state) const {
    if (!deadline_ || sim_seconds_ <= 0.0) return config_.num_simulations;
    const double remaining =
        std::chrono::duration<double>(*deadline_ - Clock::now()).count();
    if (remaining <= 0.0) return 0;
    const int moves_left =
        std::max(1, state.num_buffers() - state.cursor());
    const double allowance = 2.0 * remaining / moves_left;
    const double affordable = allowance / sim_seconds_;
    if (affordable >= config_.num_simulations) return config_.num_simulations;
    return static_cast<int>(affordable);
  }

 private:
  void expand(Node& node, const std::vector<ActionKind>& legal) {
    node.edges.clear();
    node.edges.reserve(legal.size());
    const double uniform = 1.0 / static_cast<double>(legal.size());
    for (ActionKind a : legal) {
      Edge e;
      e.action = a;
      e.prior = uniform;
      node.edges.push_back(std::move(e));
    }
    node.expanded = true;
  }

  // Uniform priors mixed with fresh Dirichlet noise at the root.
  void refresh_priors(Node& root, const std::vector<ActionKind>& legal) {
    if (root.edges.size() != legal.size()) {
      expand(root, legal);
    }
    const double uniform = 1.0 / static_cast<double>(root.edges.size());
    const auto noise = rng_.dirichlet(config_.noise_alpha, root.edges.size());
    for (std::size_t i = 0; i < root.edges.size(); ++i)
      root.edges[i].prior = (1.0 - config_.noise_fraction) * uniform +
                            config_.noise_fraction * noise[i];
  }

  std::size_t select(const Node& node) const {
    const double sqrt_visits =
        std::sqrt(static_cast<double>(std::max(node.visits, 1)));
    double best = -std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t i = 0; i < node.edges.size(); ++i) {
      const Edge& e = node.edges[i];
      const double exploit = e.visits > 0 ? minmax_.normalize(e.q()) : 0.0;
      const double score =
          exploit + config_.puct_c * e.prior * sqrt_visits / (1.0 + e.visits);
      if (score > best) {
        best = score;
        pick = i;
      }
    }
    return pick;
  }

  // Future return from this state under the greedy policy, playing through
  // the drop-backup rule so salvageable alias traps are valued at what play
  // would actually recover. An unsalvageable dead end loses the game: the
  // return-to-go is the negation of everything earned so far.
  double rollout(GameState state) const {
    const double base = state.episode_return();
    const GameState final_state = continue_with_backup(
        std::move(state),
        [this](const GameState& s, const std::vector<ActionKind>& legal) {
          return greedy_action(s, legal, config_);
        });
    if (final_state.status() == GameStatus::Infeasible) return -base;
    return final_state.episode_return() - base;
  }

  void simulate(const GameState& root_state) {
    GameState state = root_state;
    Node* node = root_.get();
    std::vector<std::pair<Node*, std::size_t>> path;

    while (node->expanded && state.status() == GameStatus::Running) {
      const std::size_t i = select(*node);
      Edge& e = node->edges[i];
      const StepResult r = state.step(e.action);
      e.reward = r.reward;
      path.emplace_back(node, i);
      if (!e.child) e.child = std::make_unique<Node>();
      node = e.child.get();
    }

    double value = 0.0;
    if (state.status() == GameStatus::Complete) {
      value = 0.0;
    } else if (state.status() == GameStatus::Infeasible) {
      value = -state.episode_return();
    } else {
      if (!node->expanded) expand(*node, state.legal_actions());
      value = rollout(std::move(state));
    }

    node->visits += 1;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      Edge& e = it->first->edges[it->second];
      value = e.reward + value;  // edge value is reward-to-go through it
      e.visits += 1;
      e.value_sum += value;
      if (e.visits == 1 || value > e.best_value) e.best_value = value;
      minmax_.update(e.q());
      it->first->visits += 1;
    }
  }

  double temperature(int move_number) const {
    if (config_.temperature_decay_moves <= 0) return config_.final_temperature;
    if (move_number >= config_.temperature_decay_moves)
      return config_.final_temperature;
    const double f = static_cast<double>(move_number) /
                     static_cast<double>(config_.temperature_decay_moves);
    return config_.init_temperature +
           f * (config_.final_temperature - config_.init_temperature);
  }

  ActionKind pick_action(const GameState& state,
                         const std::vector<ActionKind>& legal,
                         int move_number) {
    if (!root_ || !root_->expanded) return greedy_action(state, legal, config_);
    int total_visits = 0;
    for (const Edge& e : root_->edges) total_visits += e.visits;
    if (total_visits == 0) return greedy_action(state, legal, config_);

    const double temp = temperature(move_number);
    if (temp < 0.05) {
      const Edge* best = &root_->edges.front();
      for (const Edge& e : root_->edges)
        if (e.visits > best->visits) best = &e;
      return best->action;
    }
    std::vector<double> weights(root_->edges.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < root_->edges.size(); ++i) {
      weights[i] =
          std::pow(static_cast<double>(root_->edges[i].visits), 1.0 / temp);
      sum += weights[i];
    }
    double ticket = rng_.unit() * sum;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      ticket -= weights[i];
      if (ticket <= 0.0) return root_->edges[i].action;
    }
    return root_->edges.back().action;
  }

  void descend(ActionKind action) {
    if (!root_ || !root_->expanded) {
      root_ = nullptr;
      return;
    }
    for (Edge& e : root_->edges) {
      if (e.action == action) {
        root_ = std::move(e.child);
        return;
      }
    }
    root_ = nullptr;
  }

  const SolverConfig& config_;
  Rng rng_;
  std::optional<Clock::time_point> deadline_;
  std::int64_t simulations_used_ = 0;
  double sim_seconds_ = 0.0;
  std::unique_ptr<Node> root_;
  int expected_cursor_ = 0;
  MinMax minmax_;
};

}  // namespace

Trajectory solve_mcts(const ProblemInstance& problem,
                      const SolverConfig& config) {
  Search search(config);
  bool exhausted = false;
  int move_number = 0;
  Policy policy = [&](const GameState& state,
                      const std::vector<ActionKind>& legal) {
    if (search.budget_exhausted()) {
      exhausted = true;
      return greedy_action(state, legal, config);
    }
    return search.act(state, legal, move_number++);
  };
  Trajectory traj = run_episode_with_backup(problem, policy);
  traj.budget_exhausted = exhausted;
  return traj;
}

}  // namespace mmapgame
