#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmapgame/episode.hpp"
#include "mmapgame/game.hpp"
#include "mmapgame/generator.hpp"
#include "mmapgame/io.hpp"
#include "mmapgame/log.hpp"
#include "mmapgame/render.hpp"
#include "mmapgame/report.hpp"
#include "mmapgame/solvers.hpp"
#include "mmapgame/validator.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mmapgame;

namespace {

// Exit codes: 0 success / valid, 1 violations or mismatches, 2 usage, parse
// or runtime errors.
constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

void emit_error(const std::string& kind, const std::string& message) {
  json doc;
  doc["error"] = kind;
  doc["message"] = message;
  std::cerr << doc.dump() << '\n';
}

// "--budget 30s" -> seconds; "--budget 5000" -> solver steps (simulations
// for tree search, generations for evolutionary search).
void apply_budget(SolverConfig& config, const std::string& budget) {
  if (budget.empty()) return;
  if (budget.back() == 's' || budget.back() == 'S') {
    config.budget_seconds = std::stod(budget.substr(0, budget.size() - 1));
  } else {
    config.budget_steps = std::stoll(budget);
  }
}

RunReport report_for(const std::string& solver, const Trajectory& traj,
                     const ProblemInstance& problem, double wall_seconds,
                     std::uint64_t seed) {
  RunReport r;
  r.solver = solver;
  r.episode_return = traj.episode_return;
  r.normalized_return = normalized_return(traj, problem);
  if (problem.latency_tables)
    r.proxy_latency = proxy_latency(problem, traj.solution);
  r.wall_time_seconds = wall_seconds;
  r.seed = seed;
  r.backup_resets = traj.backup_resets();
  return r;
}

int cmd_generate(const std::string& params_path, std::uint64_t seed,
                 bool seed_given, const std::string& out_path) {
  GenParams params = read_gen_params(params_path);
  if (seed_given) params.seed = seed;
  const ProblemInstance problem = generate(params);
  write_problem(problem, out_path);
  MMAP_LOG_INFO("generated " + std::to_string(problem.buffers.size()) +
                " buffers over " + std::to_string(problem.num_instructions) +
                " instructions -> " + out_path);
  return kExitOk;
}

int cmd_solve(const std::string& algo, const std::string& problem_path,
              const std::string& out_path, const std::string& traj_path,
              SolverConfig config) {
  const ProblemInstance problem = read_problem(problem_path);
  const auto start = std::chrono::steady_clock::now();
  Trajectory traj;
  if (algo == "random") {
    traj = solve_random(problem, config.seed);
  } else if (algo == "greedy") {
    traj = solve_greedy(problem, config);
  } else if (algo == "es") {
    traj = solve_es(problem, config);
  } else if (algo == "mcts") {
    traj = solve_mcts(problem, config);
  } else if (algo == "exact") {
    traj = solve_exact(problem);
  } else {
    emit_error("usage", "unknown algorithm " + algo);
    return kExitUsage;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_solution(traj.solution, problem, out_path);
  if (!traj_path.empty()) write_trajectory(traj, problem, traj_path);
  MMAP_LOG_INFO(run_report_to_json(
      report_for(algo, traj, problem, wall, config.seed)));
  return kExitOk;
}

int cmd_validate(const std::string& problem_path,
                 const std::string& solution_path) {
  const ProblemInstance problem = read_problem(problem_path);
  const Solution solution = read_solution(solution_path, problem);
  const ViolationReport report = validate(solution, problem);
  if (report.empty()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  std::cout << report.to_text();
  return kExitViolations;
}

int cmd_render(const std::string& problem_path,
               const std::string& solution_path, const std::string& out_path) {
  const ProblemInstance problem = read_problem(problem_path);
  const Solution solution = read_solution(solution_path, problem);
  write_text_file(out_path, render_layout(problem, solution));
  return kExitOk;
}

int cmd_eval(const std::string& problem_path, const std::string& solution_path,
             const std::string& baseline_path) {
  const ProblemInstance problem = read_problem(problem_path);
  const Solution candidate = read_solution(solution_path, problem);

  json doc;
  RunReport cand;
  cand.solver = "candidate";
  cand.episode_return = total_benefit(candidate, problem);
  cand.normalized_return = normalized_return(candidate, problem);
  if (problem.latency_tables) {
    cand.proxy_latency = proxy_latency(problem, candidate);
    cand.speedup =
        compute_speedup(baseline_latency(problem), *cand.proxy_latency);
  }
  doc["candidate"] = json::parse(run_report_to_json(cand));

  if (!baseline_path.empty()) {
    const Solution baseline = read_solution(baseline_path, problem);
    RunReport base;
    base.solver = "baseline";
    base.episode_return = total_benefit(baseline, problem);
    base.normalized_return = normalized_return(baseline, problem);
    json best;
    if (problem.latency_tables) {
      base.proxy_latency = proxy_latency(problem, baseline);
      base.speedup =
          compute_speedup(baseline_latency(problem), *base.proxy_latency);
      // best-of-two against the baseline: never below 1
      const bool candidate_wins = *cand.proxy_latency < *base.proxy_latency;
      best["source"] = candidate_wins ? "candidate" : "baseline";
      best["speedup"] = candidate_wins ? compute_speedup(*base.proxy_latency,
                                                         *cand.proxy_latency)
                                       : 1.0;
    } else {
      const bool candidate_wins =
          cand.episode_return > base.episode_return;
      best["source"] = candidate_wins ? "candidate" : "baseline";
      best["speedup"] = nullptr;
    }
    doc["baseline"] = json::parse(run_report_to_json(base));
    doc["best_of_two"] = std::move(best);
  }
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_correlate(const std::string& problem_path,
                  const std::string& solutions_dir) {
  const ProblemInstance problem = read_problem(problem_path);
  if (!problem.latency_tables) {
    emit_error("usage", "correlate needs an instance with latency tables");
    return kExitUsage;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(solutions_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<double> returns;
  std::vector<double> latencies;
  for (const fs::path& f : files) {
    const Solution s = read_solution(f, problem);
    returns.push_back(total_benefit(s, problem));
    latencies.push_back(proxy_latency(problem, s));
  }
  json doc;
  doc["count"] = returns.size();
  doc["pearson_r"] = pearson(returns, latencies);
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_play_trace(const std::string& problem_path,
                   const std::string& traj_path) {
  const ProblemInstance problem = read_problem(problem_path);
  const Trajectory traj = read_trajectory(traj_path, problem);
  GameState state = replay(problem, traj.steps);
  json doc;
  doc["status"] = std::string(to_string(state.status()));
  doc["return"] = state.episode_return();
  doc["matches_file"] = state.episode_return() == traj.episode_return &&
                        state.status() == traj.final_status;
  std::cout << doc.dump(2) << '\n';
  return doc["matches_file"].get<bool>() ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory-mapping game toolkit"};
  app.require_subcommand(1);

  std::string params_path;
  std::string problem_path;
  std::string solution_path;
  std::string baseline_path;
  std::string traj_path;
  std::string out_path;
  std::string solutions_dir;
  std::string algo = "mcts";
  std::string budget;
  SolverConfig config;
  std::uint64_t seed = 0;
  bool seed_given = false;

  auto* generate_cmd = app.add_subcommand("generate", "sample an instance");
  generate_cmd->add_option("--params", params_path, "generator parameter file")
      ->required();
  generate_cmd->add_option("--seed", seed, "generator seed");
  generate_cmd->add_option("-o,--output", out_path, "problem file")
      ->required();

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd
      ->add_option("--algo", algo, "random|greedy|es|mcts|exact")
      ->check(CLI::IsMember({"random", "greedy", "es", "mcts", "exact"}));
  solve_cmd->add_option("--budget", budget,
                        "wall-clock budget like 30s, or a step budget");
  solve_cmd->add_option("--seed", seed, "solver seed");
  solve_cmd->add_option("--simulations", config.num_simulations,
                        "tree-search simulations per move");
  solve_cmd->add_option("--population", config.population_size,
                        "evolutionary population size");
  solve_cmd->add_option("--mutation-rate", config.mutation_rate,
                        "per-gene mutation probability");
  solve_cmd->add_option("--lambda", config.greedy_lambda,
                        "greedy opportunity-cost weight");
  solve_cmd->add_option("--noise-fraction", config.noise_fraction,
                        "root exploration noise for tree search");
  solve_cmd->add_option("--temperature", config.final_temperature,
                        "action-selection temperature for tree search");
  solve_cmd->add_option("problem", problem_path, "problem file")->required();
  solve_cmd->add_option("-o,--output", out_path, "solution file")->required();
  solve_cmd->add_option("--trajectory", traj_path, "also write the trajectory");

  auto* validate_cmd = app.add_subcommand("validate", "check a solution");
  validate_cmd->add_option("problem", problem_path)->required();
  validate_cmd->add_option("solution", solution_path)->required();

  auto* render_cmd = app.add_subcommand("render", "draw a layout SVG");
  render_cmd->add_option("problem", problem_path)->required();
  render_cmd->add_option("solution", solution_path)->required();
  render_cmd->add_option("-o,--output", out_path, "SVG file")->required();

  auto* eval_cmd = app.add_subcommand("eval", "score a solution");
  eval_cmd->add_option("problem", problem_path)->required();
  eval_cmd->add_option("solution", solution_path)->required();
  eval_cmd->add_option("--baseline", baseline_path,
                       "baseline solution for best-of-two");

  auto* correlate_cmd =
      app.add_subcommand("correlate", "reward-to-latency correlation");
  correlate_cmd->add_option("problem", problem_path)->required();
  correlate_cmd->add_option("solutions", solutions_dir, "solution directory")
      ->required();

  auto* trace_cmd =
      app.add_subcommand("play-trace", "replay and verify a trajectory");
  trace_cmd->add_option("problem", problem_path)->required();
  trace_cmd->add_option("trajectory", traj_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error("usage", e.what());
    return kExitUsage;
  }

  seed_given = generate_cmd->count("--seed") > 0;
  config.seed = seed;

  try {
    if (generate_cmd->parsed())
      return cmd_generate(params_path, seed, seed_given, out_path);
    if (solve_cmd->parsed()) {
      apply_budget(config, budget);
      return cmd_solve(algo, problem_path, out_path, traj_path, config);
    }
    if (validate_cmd->parsed())
      return cmd_validate(problem_path, solution_path);
    if (render_cmd->parsed())
      return cmd_render(problem_path, solution_path, out_path);
    if (eval_cmd->parsed())
      return cmd_eval(problem_path, solution_path, baseline_path);
    if (correlate_cmd->parsed())
      return cmd_correlate(problem_path, solutions_dir);
    if (trace_cmd->parsed()) return cmd_play_trace(problem_path, traj_path);
  } catch (const DigestMismatchError& e) {
    emit_error("digest-mismatch", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    emit_error("parse", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    emit_error("input", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
