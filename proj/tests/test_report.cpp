#include <doctest.h>

#include <vector>

#include "mmapgame/generator.hpp"
#include "mmapgame/io.hpp"
#include "mmapgame/render.hpp"
#include "mmapgame/report.hpp"
#include "mmapgame/solvers.hpp"
#include "mmapgame/validator.hpp"

#include "fixtures.hpp"

using namespace mmapgame;
using namespace mmapgame::testing;

TEST_CASE("speedup is the latency ratio") {
  CHECK(compute_speedup(1.8787, 1.0) == doctest::Approx(1.8787));
  CHECK(compute_speedup(5.0, 5.0) == 1.0);
  CHECK(compute_speedup(100.0, 80.0) == doctest::Approx(1.25));
  CHECK_THROWS_AS(compute_speedup(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_speedup(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("normalized return") {
  const ProblemInstance p = p1();

  Solution drop_all;
  drop_all.placements.assign(p.buffers.size(), Placement{});
  CHECK(normalized_return(drop_all, p) == 0.0);

  const Trajectory best = solve_exact(p);
  CHECK(normalized_return(best, p) == doctest::Approx(20.0 / 33.0));

  const Trajectory wide_best = solve_exact(p1_wide());
  CHECK(normalized_return(wide_best, p1_wide()) == doctest::Approx(1.0));

  ProblemInstance empty;
  empty.num_instructions = 1;
  empty.max_size = 8;
  empty.initial_supply = {1};
  Solution none;
  CHECK(normalized_return(none, empty) == 0.0);
}

TEST_CASE("pearson correlation") {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(7.0 - 2.0 * x);
  CHECK(pearson(xs, ys) == doctest::Approx(-1.0));
  CHECK(pearson(xs, xs) == doctest::Approx(1.0));

  const std::vector<double> flat{3, 3, 3, 3, 3};
  CHECK_THROWS_AS(pearson(xs, flat), std::invalid_argument);
  const std::vector<double> one_x{1.0};
  const std::vector<double> one_y{2.0};
  CHECK_THROWS_AS(pearson(one_x, one_y), std::invalid_argument);
  const std::vector<double> short_x{1, 2, 3};
  CHECK_THROWS_AS(pearson(short_x, xs), std::invalid_argument);
}

TEST_CASE("rewards and proxy latency correlate perfectly on additive tables") {
  GenParams params = small_gen_params(21);
  params.interaction_scale = 0.0;
  const ProblemInstance p = generate(params);

  std::vector<double> returns;
  std::vector<double> latencies;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Trajectory traj = solve_random(p, seed);
    returns.push_back(total_benefit(traj.solution, p));
    latencies.push_back(proxy_latency(p, traj.solution));
  }
  CHECK(pearson(returns, latencies) <= -0.999);
}

TEST_CASE("rendering is deterministic and complete") {
  const ProblemInstance p = p1_wide();
  const Trajectory best = solve_exact(p1_wide());
  const std::string svg = render_layout(p, best.solution);
  CHECK(svg == render_layout(p, best.solution));

  // three placements, three rectangles with a title each
  std::size_t rects = 0;
  for (std::size_t at = svg.find("<title>"); at != std::string::npos;
       at = svg.find("<title>", at + 1))
    ++rects;
  CHECK(rects == 3);

  // the two same-tensor buffers share a color, the third differs
  CHECK(svg.find(tensor_color(0)) != std::string::npos);
  CHECK(svg.find(tensor_color(1)) != std::string::npos);
  CHECK(tensor_color(0) != tensor_color(1));
  const auto first = svg.find(tensor_color(0));
  const auto second = svg.find(tensor_color(0), first + 1);
  CHECK(second != std::string::npos);
}

TEST_CASE("an all-drop render has axes but no rectangles") {
  const ProblemInstance p = p1();
  Solution drop_all;
  drop_all.placements.assign(p.buffers.size(), Placement{});
  const std::string svg = render_layout(p, drop_all);
  CHECK(svg.find("<title>") == std::string::npos);
  CHECK(svg.find("logical time") != std::string::npos);
  CHECK(svg.find("memory offset") != std::string::npos);
}

TEST_CASE("the committed layout snapshot stays byte-identical") {
  const ProblemInstance p = p1_wide();
  const Trajectory best = solve_exact(p);
  const std::string got = render_layout(p, best.solution);
  const std::string want = mmapgame::read_text_file(
      std::string(MMAPGAME_TEST_DATA_DIR) + "/golden_layout.svg");
  CHECK(got == want);
}
