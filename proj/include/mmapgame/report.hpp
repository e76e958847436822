#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmapgame/episode.hpp"
#include "mmapgame/types.hpp"

namespace mmapgame {

struct RunReport {
  std::string solver;
  double episode_return = 0.0;
  double normalized_return = 0.0;
  std::optional<double> proxy_latency;
  std::optional<double> speedup;
  double wall_time_seconds = 0.0;
  std::uint64_t seed = 0;
  int backup_resets = 0;
};

// baseline / candidate; > 1 means the candidate is faster. Throws
// std::invalid_argument on non-positive latencies.
double compute_speedup(double latency_baseline, double latency_candidate);

// Static benefit mass placed, as a fraction of the total available; 0 when
// the instance carries no benefit at all. Always in [0, 1].
double normalized_return(const Trajectory& trajectory,
                         const ProblemInstance& problem);
double normalized_return(const Solution& solution,
                         const ProblemInstance& problem);

// Pearson correlation coefficient. Throws std::invalid_argument for fewer
// than two samples or zero variance in either series.
double pearson(std::span<const double> xs, std::span<const double> ys);

std::string run_report_to_json(const RunReport& report);

}  // namespace mmapgame
