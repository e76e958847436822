#pragma once

#include <string>

#include "mmapgame/types.hpp"

namespace mmapgame {

// SVG layout plot: logical time on the x axis, memory offset on the y axis,
// one rectangle per placed buffer, one deterministic color per tensor.
// Output bytes are a pure function of (problem, solution).
std::string render_layout(const ProblemInstance& problem,
                          const Solution& solution);

// Deterministic fill color for a tensor, as an SVG hex color.
std::string tensor_color(TensorId tensor_id);

}  // namespace mmapgame
