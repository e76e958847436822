#include "mmapgame/report.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mmapgame/validator.hpp"

namespace mmapgame {

double compute_speedup(double latency_baseline, double latency_candidate) {
  if (latency_baseline <= 0.0 || latency_candidate <= 0.0)
    throw std::invalid_argument("speedup needs positive latencies");
  return latency_baseline / latency_candidate;
}

double normalized_return(const Solution& solution,
                         const ProblemInstance& problem) {
  const double total = problem.total_static_benefit();
  if (total <= 0.0) return 0.0;
  return total_benefit(solution, problem) / total;
}

double normalized_return(const Trajectory& trajectory,
                         const ProblemInstance& problem) {
  return normalized_return(trajectory.solution, problem);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("pearson needs equal-length series");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("pearson needs at least 2 samples");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw std::invalid_argument(
        "pearson undefined: a series has zero variance");
  return sxy / std::sqrt(sxx * syy);
}

std::string run_report_to_json(const RunReport& r) {
  nlohmann::json doc;
  doc["solver"] = r.solver;
  doc["return"] = r.episode_return;
  doc["normalized_return"] = r.normalized_return;
  if (r.proxy_latency)
    doc["proxy_latency"] = *r.proxy_latency;
  else
    doc["proxy_latency"] = nullptr;
  if (r.speedup)
    doc["speedup"] = *r.speedup;
  else
    doc["speedup"] = nullptr;
  doc["wall_time_seconds"] = r.wall_time_seconds;
  doc["seed"] = r.seed;
  doc["backup_resets"] = r.backup_resets;
  return doc.dump(2);
}

}  // namespace mmapgame
