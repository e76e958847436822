#pragma once

#include <cstdint>
#include <optional>

#include "mmapgame/episode.hpp"

namespace mmapgame {

struct SolverConfig {
  std::uint64_t seed = 0;

  // Wall-clock and step budgets; whichever is set first binds. The step unit
  // is solver-specific: total simulations for tree search, generations for
  // evolutionary search.
  std::optional<double> budget_seconds;
  std::optional<std::int64_t> budget_steps;

  // tree search
  int num_simulations = 400;
  double puct_c = 1.25;
  double noise_fraction = 0.25;
  double noise_alpha = 0.03;
  double init_temperature = 1.0;
  double final_temperature = 0.2;
  // Moves over which the selection temperature anneals from init to final.
  // A pure play-time solver has no training phase, so by default it starts
  // already annealed.
  int temperature_decay_moves = 0;

  // evolutionary search
  int population_size = 16;
  double mutation_rate = 0.03;
  double elite_fraction = 0.25;

  // greedy
  double greedy_lambda = 1.0;
  bool greedy_lookahead = false;
};

// Uniformly random legal actions, one episode, deterministic per seed.
Trajectory solve_random(const ProblemInstance& problem, std::uint64_t seed);

// One pass choosing the action with the best immediate reward minus an
// opportunity-cost term lambda * size * interval_length / (M * T); ties fall
// to Copy over NoCopy over Drop.
Trajectory solve_greedy(const ProblemInstance& problem,
                        const SolverConfig& config = {});

// Evolves action-preference genomes, repaired to legality at play time.
// Returns the best trajectory found within the budget.
Trajectory solve_es(const ProblemInstance& problem, const SolverConfig& config);

// Tree search over the true game with uniform priors, Dirichlet root noise
// and greedy rollouts; falls back to the greedy policy for the remaining
// moves when the budget runs out.
Trajectory solve_mcts(const ProblemInstance& problem,
                      const SolverConfig& config);

// Exhaustive enumeration of legal action sequences; the return-maximal
// trajectory, ties broken lexicographically (Copy < NoCopy < Drop). Refuses
// instances with more than max_buffers buffers.
Trajectory solve_exact(const ProblemInstance& problem, int max_buffers = 14);

// The greedy scoring rule as a reusable policy (used for rollouts).
ActionKind greedy_action(const GameState& state,
                         const std::vector<ActionKind>& legal,
                         const SolverConfig& config);

}  // namespace mmapgame
