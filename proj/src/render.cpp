#include "mmapgame/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mmapgame {

namespace {

constexpr double kPlotWidth = 880.0;
constexpr double kPlotHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 48.0;
constexpr double kMarginRight = 24.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Round tick spacing to a 1/2/5 decade step covering ~target ticks.
double tick_step(double span, int target) {
  if (span <= 0.0) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::string tensor_color(TensorId tensor_id) {
  const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(tensor_id));
  // hue spread over the wheel, saturation/lightness in a readable band
  const double hue = static_cast<double>(h % 360);
  const double sat = 0.55 + 0.25 * static_cast<double>((h >> 16) % 100) / 100.0;
  const double light = 0.45 + 0.2 * static_cast<double>((h >> 32) % 100) / 100.0;

  const double c = (1.0 - std::fabs(2.0 * light - 1.0)) * sat;
  const double x = c * (1.0 - std::fabs(std::fmod(hue / 60.0, 2.0) - 1.0));
  const double m = light - c / 2.0;
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  if (hue < 60) {
    r = c; g = x;
  } else if (hue < 120) {
    r = x; g = c;
  } else if (hue < 180) {
    g = c; b = x;
  } else if (hue < 240) {
    g = x; b = c;
  } else if (hue < 300) {
    r = x; b = c;
  } else {
    r = c; b = x;
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<unsigned>(std::lround((r + m) * 255.0)),
                static_cast<unsigned>(std::lround((g + m) * 255.0)),
                static_cast<unsigned>(std::lround((b + m) * 255.0)));
  return buf;
}

std::string render_layout(const ProblemInstance& problem,
                          const Solution& solution) {
  if (solution.placements.size() != problem.buffers.size())
    throw std::invalid_argument("render needs a complete solution");

  const double T = static_cast<double>(problem.num_instructions);
  const double M = static_cast<double>(problem.max_size);
  const double width = kMarginLeft + kPlotWidth + kMarginRight;
  const double height = kMarginTop + kPlotHeight + kMarginBottom;
  const double sx = kPlotWidth / T;
  const double sy = kPlotHeight / M;

  auto px = [&](double t) { return kMarginLeft + t * sx; };
  auto py = [&](double offset) {  // y axis points up
    return kMarginTop + kPlotHeight - offset * sy;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\">\n";
  svg << "<rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop)
      << "\" width=\"" << fmt(kPlotWidth) << "\" height=\""
      << fmt(kPlotHeight)
      << "\" fill=\"#fafafa\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (const Buffer& b : problem.buffers) {
    const Placement& p = solution.placements[b.id];
    if (!p.in_fast_memory() || p.interval.is_empty()) continue;
    const double x = px(static_cast<double>(p.interval.lo));
    const double w = (static_cast<double>(p.interval.length())) * sx;
    const double y = py(static_cast<double>(p.offset + b.size));
    const double h = static_cast<double>(b.size) * sy;
    svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
        << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\""
        << tensor_color(b.tensor_id)
        << "\" stroke=\"#222222\" stroke-width=\"0.5\" opacity=\"0.9\">"
        << "<title>buffer " << b.id << " tensor " << b.tensor_id
        << "</title></rect>\n";
  }

  // x axis: logical time
  const double xstep = tick_step(T, 8);
  for (double t = 0.0; t <= T + 1e-9; t += xstep) {
    const double x = px(std::min(t, T));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\""
        << fmt(kMarginTop + kPlotHeight) << "\" x2=\"" << fmt(x) << "\" y2=\""
        << fmt(kMarginTop + kPlotHeight + 6.0)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\""
        << fmt(kMarginTop + kPlotHeight + 20.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << static_cast<long long>(t) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kMarginLeft + kPlotWidth / 2.0) << "\" y=\""
      << fmt(height - 10.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">logical time</text>\n";

  // y axis: memory offset
  const double ystep = tick_step(M, 6);
  for (double o = 0.0; o <= M + 1e-9; o += ystep) {
    const double y = py(std::min(o, M));
    svg << "<line x1=\"" << fmt(kMarginLeft - 6.0) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(kMarginLeft - 10.0) << "\" y=\""
        << fmt(y + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">"
        << static_cast<long long>(o) << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << fmt(kMarginTop + kPlotHeight / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << fmt(kMarginTop + kPlotHeight / 2.0)
      << ")\">memory offset (bytes)</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mmapgame
