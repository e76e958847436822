#include <doctest.h>

#include "mmapgame/episode.hpp"
#include "mmapgame/game.hpp"
#include "mmapgame/generator.hpp"
#include "mmapgame/io.hpp"
#include "mmapgame/solvers.hpp"

#include "fixtures.hpp"

using namespace mmapgame;
using namespace mmapgame::testing;

TEST_CASE("problems round-trip through JSON") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance p = generate(small_gen_params(seed));
    const std::string text = problem_to_json(p);
    const ProblemInstance back = problem_from_json(text);
    CHECK(problem_to_json(back) == text);
    CHECK(problem_digest(back) == problem_digest(p));
  }
}

TEST_CASE("hand fixtures round-trip too") {
  for (const ProblemInstance& p : {p1(), alias_trap_triple()}) {
    const ProblemInstance back = problem_from_json(problem_to_json(p));
    CHECK(problem_to_json(back) == problem_to_json(p));
  }
}

TEST_CASE("solutions round-trip and verify their digest") {
  const ProblemInstance p = generate(small_gen_params(1));
  const Trajectory traj = solve_random(p, 5);
  const std::string text = solution_to_json(traj.solution, p);
  const Solution back = solution_from_json(text, p);
  CHECK(solution_to_json(back, p) == text);

  ProblemInstance other = generate(small_gen_params(2));
  CHECK_THROWS_AS(solution_from_json(text, other), DigestMismatchError);
}

TEST_CASE("trajectories round-trip with steps and backup events") {
  const ProblemInstance p = alias_trap_triple();
  SolverConfig config;
  config.greedy_lambda = 0.0;
  const Trajectory traj = solve_greedy(p, config);
  REQUIRE(traj.backup_resets() == 1);

  const std::string text = trajectory_to_json(traj, p);
  const Trajectory back = trajectory_from_json(text, p);
  CHECK(back.episode_return == traj.episode_return);
  CHECK(back.backup_resets() == 1);
  CHECK(back.backups[0].failed_buffer_id == 2);
  CHECK(back.steps.size() == traj.steps.size());
  CHECK(trajectory_to_json(back, p) == text);
}

TEST_CASE("broken invariants are parse errors that name the buffer") {
  const ProblemInstance p = p1();
  std::string text = problem_to_json(p);
  // push b1's target outside its live range
  const auto pos = text.find("\"target_time\": 2");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 16, "\"target_time\": 3");
  try {
    problem_from_json(text, "p1.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("p1.json") != std::string::npos);
    CHECK(msg.find("buffer 1") != std::string::npos);
  }
}

TEST_CASE("missing fields and bad JSON are parse errors") {
  CHECK_THROWS_AS(problem_from_json("{nope"), ParseError);
  CHECK_THROWS_AS(problem_from_json("{}"), ParseError);
  CHECK_THROWS_AS(problem_from_json(R"({"version": 99})"), ParseError);
}

TEST_CASE("gen params parse with defaults for absent fields") {
  const GenParams p = gen_params_from_json(
      R"({"T": 32, "max_size": 2048, "num_tensors": 7, "seed": 3})");
  CHECK(p.num_instructions == 32);
  CHECK(p.max_size == 2048);
  CHECK(p.num_tensors == 7);
  CHECK(p.seed == 3);
  CHECK(p.bandwidth_factor == doctest::Approx(GenParams{}.bandwidth_factor));
}

TEST_CASE("placement files reject inconsistent drop rows") {
  const ProblemInstance p = p1();
  Solution s;
  s.placements.assign(p.buffers.size(), Placement{});
  std::string text = solution_to_json(s, p);
  const auto pos = text.find("\"offset\": null");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 14, "\"offset\": 0");
  CHECK_THROWS_AS(solution_from_json(text, p), ParseError);
}

TEST_CASE("negative offsets are rejected at parse time") {
  const ProblemInstance p = p1();
  GameState state(p);
  state.step(ActionKind::Drop);
  state.step(ActionKind::Drop);
  state.step(ActionKind::Copy);
  std::string text = solution_to_json(state.solution(), p);
  const auto pos = text.find("\"offset\": 0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 11, "\"offset\": -4");
  CHECK_THROWS_AS(solution_from_json(text, p), ParseError);
}
