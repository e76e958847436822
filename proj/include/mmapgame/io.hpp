#pragma once

#include <filesystem>
#include <string>

#include "mmapgame/episode.hpp"
#include "mmapgame/generator.hpp"
#include "mmapgame/types.hpp"

namespace mmapgame {

inline constexpr int kFileFormatVersion = 1;

// Canonical serialization: sorted keys, integers for all discrete
// quantities, shortest-round-trip decimals. The digest is a 64-bit FNV-1a
// over the canonical problem document.
std::string problem_digest(const ProblemInstance& problem);

std::string problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const std::string& text,
                                  const std::string& origin = "<string>");

std::string solution_to_json(const Solution& solution,
                             const ProblemInstance& problem);
// Checks the stored digest against the given problem.
Solution solution_from_json(const std::string& text,
                            const ProblemInstance& problem,
                            const std::string& origin = "<string>");

std::string trajectory_to_json(const Trajectory& trajectory,
                               const ProblemInstance& problem);
Trajectory trajectory_from_json(const std::string& text,
                                const ProblemInstance& problem,
                                const std::string& origin = "<string>");

GenParams gen_params_from_json(const std::string& text,
                               const std::string& origin = "<string>");

ProblemInstance read_problem(const std::filesystem::path& path);
void write_problem(const ProblemInstance& problem,
                   const std::filesystem::path& path);
Solution read_solution(const std::filesystem::path& path,
                       const ProblemInstance& problem);
void write_solution(const Solution& solution, const ProblemInstance& problem,
                    const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path,
                           const ProblemInstance& problem);
void write_trajectory(const Trajectory& trajectory,
                      const ProblemInstance& problem,
                      const std::filesystem::path& path);
GenParams read_gen_params(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace mmapgame
