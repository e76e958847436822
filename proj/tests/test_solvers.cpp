#include <doctest.h>

#include <map>

#include "mmapgame/episode.hpp"
#include "mmapgame/generator.hpp"
#include "mmapgame/solvers.hpp"
#include "mmapgame/validator.hpp"

#include "fixtures.hpp"

using namespace mmapgame;
using namespace mmapgame::testing;

namespace {

// An early full-width buffer of negligible value that blocks two late
// valuable ones.
ProblemInstance blocker_instance() {
  ProblemInstance p;
  p.num_instructions = 4;
  p.max_size = 100;
  p.initial_supply = {50, 50, 50, 50};
  p.buffers = {
      make_buffer(0, 100, true, 0, 0, 0, 3, 150, 1),
      make_buffer(1, 40, true, 1, 1, 1, 3, 10, 50),
      make_buffer(2, 40, true, 2, 2, 2, 3, 10, 50),
  };
  return p;
}

}  // namespace

TEST_CASE("random play is valid and deterministic per seed") {
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    const ProblemInstance p = generate(small_gen_params(seed));
    const Trajectory a = solve_random(p, seed);
    const Trajectory b = solve_random(p, seed);
    CHECK(a.episode_return == b.episode_return);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i)
      CHECK(a.steps[i].action == b.steps[i].action);
    CHECK(validate(a.solution, p).empty());
    CHECK(a.final_status == GameStatus::Complete);
  }
}

TEST_CASE("random play on a zero-buffer instance") {
  ProblemInstance p;
  p.num_instructions = 2;
  p.max_size = 16;
  p.initial_supply = {1, 1};
  const Trajectory traj = solve_random(p, 0);
  CHECK(traj.steps.empty());
  CHECK(traj.episode_return == 0.0);
  CHECK(traj.final_status == GameStatus::Complete);
}

TEST_CASE("random choices spread over the legal set") {
  // single buffer with all three actions legal
  ProblemInstance p;
  p.num_instructions = 3;
  p.max_size = 100;
  p.initial_supply = {10, 10, 10};
  p.buffers = {make_buffer(0, 40, true, 0, 0, 0, 2, 5, 3)};

  std::map<ActionKind, int> counts;
  for (std::uint64_t seed = 0; seed < 99; ++seed)
    counts[solve_random(p, seed).steps[0].action] += 1;
  // chi-squared against uniform over 3 actions, df=2, p=0.001 cutoff 13.8
  double chi2 = 0.0;
  for (ActionKind a : kAllActions) {
    const double expected = 99.0 / 3.0;
    const double d = counts[a] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 13.8);
}

TEST_CASE("greedy drops zero-benefit buffers") {
  ProblemInstance p;
  p.num_instructions = 3;
  p.max_size = 100;
  p.initial_supply = {10, 10, 10};
  p.buffers = {make_buffer(0, 40, true, 0, 0, 0, 2, 5, 0)};
  SolverConfig config;
  config.greedy_lambda = 1.0;
  const Trajectory traj = solve_greedy(p, config);
  CHECK(traj.steps[0].action == ActionKind::Drop);
  CHECK(traj.episode_return == 0.0);
}

TEST_CASE("greedy against the exact oracle") {
  SolverConfig config;
  config.greedy_lambda = 0.0;

  SUBCASE("immediate gain walks into the supply wall") {
    // Copying the first tensor drains the supply the big read needs; greedy
    // still banks the first two benefits while search drops them for 20.
    const ProblemInstance p = p1();
    const Trajectory greedy = solve_greedy(p, config);
    const Trajectory exact = solve_exact(p);
    CHECK(greedy.episode_return == 13.0);
    CHECK(exact.episode_return == 20.0);
  }

  SUBCASE("a cheap blocker hides two valuable placements") {
    const ProblemInstance p = blocker_instance();
    const Trajectory greedy = solve_greedy(p, config);
    const Trajectory exact = solve_exact(p);
    CHECK(greedy.episode_return == 1.0);
    CHECK(exact.episode_return == 100.0);
    CHECK(greedy.episode_return < exact.episode_return);
  }
}

TEST_CASE("evolutionary search equals its seed genome at budget one") {
  const ProblemInstance p = generate(small_gen_params(5));
  SolverConfig config;
  config.seed = 12;
  config.population_size = 1;
  config.budget_steps = 1;
  config.mutation_rate = 0.0;
  const Trajectory traj = solve_es(p, config);
  CHECK(traj.final_status == GameStatus::Complete);
  CHECK(validate(traj.solution, p).empty());
}

TEST_CASE("evolutionary search finds the small optimum") {
  SolverConfig config;
  config.seed = 3;
  config.population_size = 24;
  config.budget_steps = 40;
  config.mutation_rate = 0.1;

  const ProblemInstance wide = p1_wide();
  CHECK(solve_es(wide, config).episode_return ==
        solve_exact(wide).episode_return);

  const ProblemInstance narrow = p1();
  CHECK(solve_es(narrow, config).episode_return ==
        solve_exact(narrow).episode_return);
}

TEST_CASE("evolutionary best never decreases with a longer run") {
  const ProblemInstance p = generate(small_gen_params(9));
  SolverConfig config;
  config.seed = 4;
  config.population_size = 8;
  config.mutation_rate = 0.05;
  double last = -1.0;
  for (std::int64_t generations : {1, 3, 6, 10}) {
    config.budget_steps = generations;
    const double ret = solve_es(p, config).episode_return;
    CHECK(ret >= last);
    last = ret;
  }
}

TEST_CASE("tree search matches the exact oracle on small instances") {
  SolverConfig config;
  config.seed = 1;
  config.num_simulations = 400;

  const ProblemInstance narrow = p1();
  CHECK(solve_mcts(narrow, config).episode_return ==
        solve_exact(narrow).episode_return);

  const ProblemInstance wide = p1_wide();
  CHECK(solve_mcts(wide, config).episode_return ==
        solve_exact(wide).episode_return);

  const ProblemInstance blocker = blocker_instance();
  CHECK(solve_mcts(blocker, config).episode_return ==
        solve_exact(blocker).episode_return);
}

TEST_CASE("tree search with one simulation still completes") {
  const ProblemInstance p = p1();
  SolverConfig config;
  config.seed = 0;
  config.num_simulations = 1;
  config.final_temperature = 0.01;  // effectively argmax
  const Trajectory traj = solve_mcts(p, config);
  CHECK(traj.final_status == GameStatus::Complete);
  CHECK(validate(traj.solution, p).empty());
}

TEST_CASE("tree search respects a step budget with a greedy tail") {
  const ProblemInstance p = generate(small_gen_params(11));
  SolverConfig config;
  config.seed = 2;
  config.num_simulations = 64;
  config.budget_steps = 8;  // enough for the first move only
  const Trajectory traj = solve_mcts(p, config);
  CHECK(traj.budget_exhausted);
  CHECK(traj.final_status == GameStatus::Complete);
  CHECK(validate(traj.solution, p).empty());
}

TEST_CASE("exhaustive search on the fixtures") {
  const Trajectory narrow = solve_exact(p1());
  CHECK(narrow.episode_return == 20.0);
  CHECK(narrow.solution.placements[0].in_fast_memory() == false);
  CHECK(narrow.solution.placements[2].in_fast_memory() == true);

  const Trajectory wide = solve_exact(p1_wide());
  CHECK(wide.episode_return == 33.0);
  for (const Placement& placement : wide.solution.placements)
    CHECK(placement.in_fast_memory());
}

TEST_CASE("exhaustive search returns zero when no benefit exists") {
  ProblemInstance p = p1();
  for (Buffer& b : p.buffers) b.benefit = 0.0;
  const Trajectory traj = solve_exact(p);
  CHECK(traj.episode_return == 0.0);
  CHECK(validate(traj.solution, p).empty());
}

TEST_CASE("exhaustive search drops everything when all else dead-ends") {
  const Trajectory traj = solve_exact(alias_trap_pair());
  CHECK(traj.episode_return == 0.0);
  for (const Placement& placement : traj.solution.placements)
    CHECK_FALSE(placement.in_fast_memory());
}

TEST_CASE("exhaustive search refuses large instances") {
  GenParams params = small_gen_params(1);
  params.num_tensors = 10;
  params.uses_per_tensor_mean = 3.0;
  params.num_instructions = 40;
  const ProblemInstance p = generate(params);
  REQUIRE(p.buffers.size() > 14);
  CHECK_THROWS_AS(solve_exact(p), std::invalid_argument);
}

TEST_CASE("solver ordering on random small instances") {
  double sum_random = 0.0;
  double sum_greedy = 0.0;
  double sum_mcts = 0.0;
  double sum_exact = 0.0;
  int used = 0;
  for (std::uint64_t seed = 200; used < 25; ++seed) {
    GenParams params = small_gen_params(seed);
    params.num_tensors = 4;
    const ProblemInstance p = generate(params);
    if (p.buffers.size() > 10) continue;
    ++used;

    SolverConfig config;
    config.seed = seed;
    config.num_simulations = 128;
    const double r_random = solve_random(p, seed).episode_return;
    const double r_greedy = solve_greedy(p, config).episode_return;
    const double r_mcts = solve_mcts(p, config).episode_return;
    const double r_exact = solve_exact(p).episode_return;

    CHECK(r_random <= r_exact + 1e-9);
    CHECK(r_greedy <= r_exact + 1e-9);
    CHECK(r_mcts <= r_exact + 1e-9);

    sum_random += r_random;
    sum_greedy += r_greedy;
    sum_mcts += r_mcts;
    sum_exact += r_exact;
  }
  CHECK(sum_random <= sum_greedy);
  CHECK(sum_greedy <= sum_mcts);
  CHECK(sum_mcts <= sum_exact);
}
