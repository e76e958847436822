#include "mmapgame/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mmapgame/rng.hpp"

namespace mmapgame {

Trajectory solve_random(const ProblemInstance& problem, std::uint64_t seed) {
  Rng rng(seed);
  Policy policy = [&rng](const GameState&,
                         const std::vector<ActionKind>& legal) {
    return legal[rng.below(legal.size())];
  };
  return run_episode_with_backup(problem, policy);
}

ActionKind greedy_action(const GameState& state,
                         const std::vector<ActionKind>& legal,
                         const SolverConfig& config) {
  const ProblemInstance& problem = state.problem();
  const Buffer& b = state.current_buffer();
  const double plane = static_cast<double>(problem.max_size) *
                       static_cast<double>(problem.num_instructions);

  ActionKind best = legal.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (ActionKind a : legal) {  // legal comes in Copy, NoCopy, Drop order
    double score = 0.0;
    if (a != ActionKind::Drop) {
      const auto placement = state.resolve(a);
      const double cost = config.greedy_lambda * static_cast<double>(b.size) *
                          static_cast<double>(placement->interval.length()) /
                          plane;
      score = state.current_benefit() - cost;
      if (config.greedy_lookahead) {
        GameState next = state;
        if (next.step(a).status == GameStatus::Running) {
          double best_next = 0.0;
          for (ActionKind na : next.legal_actions())
            if (na != ActionKind::Drop)
              best_next = std::max(best_next, next.current_benefit());
          score += best_next;
        }
      }
    } else if (config.greedy_lookahead) {
      GameState next = state;
      if (next.step(a).status == GameStatus::Running) {
        double best_next = 0.0;
        for (ActionKind na : next.legal_actions())
          if (na != ActionKind::Drop)
            best_next = std::max(best_next, next.current_benefit());
        score += best_next;
      }
    }
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

Trajectory solve_greedy(const ProblemInstance& problem,
                        const SolverConfig& config) {
  Policy policy = [&config](const GameState& state,
                            const std::vector<ActionKind>& legal) {
    return greedy_action(state, legal, config);
  };
  return run_episode_with_backup(problem, policy);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
  std::optional<Clock::time_point> deadline;
  std::optional<std::int64_t> steps;
  std::int64_t used = 0;

  explicit Budget(const SolverConfig& config) {
    if (config.budget_seconds)
      deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(
                                        *config.budget_seconds));
    steps = config.budget_steps;
  }

  bool exhausted() const {
    if (steps && used >= *steps) return true;
    if (deadline && Clock::now() >= *deadline) return true;
    return false;
  }
};

// Play a genome: take the preferred action when legal, otherwise the first
// legal fallback in NoCopy, Copy, Drop order.
Trajectory play_genome(const ProblemInstance& problem,
                       const std::vector<ActionKind>& genome) {
  Policy policy = [&genome](const GameState& state,
                            const std::vector<ActionKind>& legal) {
    const ActionKind preferred =
        genome[static_cast<std::size_t>(state.cursor())];
    if (std::find(legal.begin(), legal.end(), preferred) != legal.end())
      return preferred;
    for (ActionKind a :
         {ActionKind::NoCopy, ActionKind::Copy, ActionKind::Drop})
      if (a != preferred &&
          std::find(legal.begin(), legal.end(), a) != legal.end())
        return a;
    return legal.front();
  };
  return run_episode_with_backup(problem, policy);
}

}  // namespace

Trajectory solve_es(const ProblemInstance& problem,
                    const SolverConfig& config) {
  const std::size_t n = problem.buffers.size();
  Rng rng(config.seed);
  Budget budget(config);
  if (!budget.deadline && !budget.steps) budget.steps = 20;  // generations

  const int pop_size = std::max(1, config.population_size);
  const int elites = std::max(
      1, static_cast<int>(std::floor(config.elite_fraction * pop_size)));

  struct Member {
    std::vector<ActionKind> genome;
    Trajectory trajectory;
    double fitness = 0.0;
  };

  auto random_genome = [&rng, n]() {
    std::vector<ActionKind> g(n);
    for (ActionKind& a : g) a = kAllActions[rng.below(3)];
    return g;
  };

  std::vector<Member> population(pop_size);
  for (Member& m : population) {
    m.genome = random_genome();
    m.trajectory = play_genome(problem, m.genome);
    m.fitness = m.trajectory.episode_return;
  }
  auto by_fitness = [](const Member& a, const Member& b) {
    return a.fitness > b.fitness;
  };
  std::stable_sort(population.begin(), population.end(), by_fitness);

  while (!budget.exhausted()) {
    ++budget.used;
    std::vector<Member> next(population.begin(), population.begin() + elites);
    while (static_cast<int>(next.size()) < pop_size) {
      Member child;
      child.genome = population[rng.below(elites)].genome;
      bool mutated = false;
      for (ActionKind& a : child.genome) {
        if (rng.chance(config.mutation_rate)) {
          a = kAllActions[rng.below(3)];
          mutated = true;
        }
      }
      if (!mutated && !child.genome.empty())
        child.genome[rng.below(child.genome.size())] =
            kAllActions[rng.below(3)];
      child.trajectory = play_genome(problem, child.genome);
      child.fitness = child.trajectory.episode_return;
      next.push_back(std::move(child));
    }
    population = std::move(next);
    std::stable_sort(population.begin(), population.end(), by_fitness);
  }
  return population.front().trajectory;
}

Trajectory solve_exact(const ProblemInstance& problem, int max_buffers) {
  const int n = static_cast<int>(problem.buffers.size());
  if (n > max_buffers)
    throw std::invalid_argument(
        "exact search refused: " + std::to_string(n) + " buffers exceeds " +
        std::to_string(max_buffers));

  // Optimistic per-buffer reward bounds for pruning.
  std::vector<double> suffix_bound(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    const Buffer& b = problem.buffers[i];
    double bound = b.benefit;
    if (problem.latency_tables) {
      const InstructionLatency& lt =
          problem.latency_tables->per_instruction[b.target_time];
      for (const auto& [id, saving] : lt.extra_savings)
        if (id == b.id) bound = saving;
      for (std::size_t bit = 0; bit < lt.capped.size(); ++bit) {
        if (lt.capped[bit] != b.id) continue;
        // largest marginal over all co-placement masks
        double best = 0.0;
        const std::uint32_t self = 1u << bit;
        for (std::uint32_t mask = 0; mask < lt.latencies.size(); ++mask)
          if (!(mask & self))
            best = std::max(best, lt.lookup(mask) - lt.lookup(mask | self));
        bound = best;
      }
    }
    suffix_bound[i] = suffix_bound[i + 1] + std::max(0.0, bound);
  }

  std::vector<ActionKind> current;
  std::vector<ActionKind> best_actions;
  double best_return = -1.0;
  bool found = false;

  auto dfs = [&](auto&& self, const GameState& state) -> void {
    if (state.status() == GameStatus::Complete) {
      if (!found || state.episode_return() > best_return) {
        found = true;
        best_return = state.episode_return();
        best_actions = current;
      }
      return;
    }
    if (state.status() == GameStatus::Infeasible) return;
    if (found &&
        state.episode_return() + suffix_bound[state.cursor()] <= best_return)
      return;
    for (ActionKind a : state.legal_actions()) {
      GameState child = state;
      child.step(a);
      current.push_back(a);
      self(self, child);
      current.pop_back();
    }
  };

  GameState root(problem);
  dfs(dfs, root);
  if (!found) throw std::logic_error("exhaustive search found no completion");

  Trajectory traj;
  GameState state(problem);
  for (ActionKind a : best_actions) {
    const int id = state.cursor();
    const StepResult r = state.step(a);
    traj.steps.push_back({id, a, r.reward});
  }
  traj.final_status = state.status();
  traj.solution = state.solution();
  traj.episode_return = state.episode_return();
  return traj;
}

}  // namespace mmapgame
