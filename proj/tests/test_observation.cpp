#include <doctest.h>

#include "mmapgame/observation.hpp"
#include "mmapgame/rng.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mmapgame;
using namespace mmapgame::testing;

namespace {

ObservationConfig tiny_config() {
  ObservationConfig cfg;
  cfg.image_size = 8;
  cfg.image_time_window = 16;
  cfg.profile_bins = 10;
  cfg.supply_window = 8;
  return cfg;
}

}  // namespace

TEST_CASE("window placement clamps at the edges") {
  CHECK(centered_window(0, 8, 100) == TimeInterval{0, 7});
  CHECK(centered_window(50, 8, 100) == TimeInterval{46, 53});
  CHECK(centered_window(99, 8, 100) == TimeInterval{92, 99});
  CHECK(centered_window(2, 8, 5) == TimeInterval{0, 4});  // shorter program
}

TEST_CASE("empty grid observes as all zeros") {
  const ProblemInstance p = p1();
  GameState state(p);
  const Observation obs = observe(state, tiny_config());
  for (float v : obs.memory_image) CHECK(v == 0.0f);
  for (float v : obs.memory_profile) CHECK(v == 0.0f);
}

TEST_CASE("a fully packed window observes as all ones") {
  ProblemInstance p;
  p.num_instructions = 4;
  p.max_size = 100;
  p.initial_supply = {10, 10, 10, 10};
  p.buffers = {make_buffer(0, 100, true, 0, 0, 0, 3, 0, 1),
               make_buffer(1, 100, false, 3, 0, 0, 3, 0, 1)};
  GameState state(p);
  state.step(ActionKind::NoCopy);  // covers the whole live range and width
  ObservationConfig cfg = tiny_config();
  cfg.image_size = 4;  // every cell covers at least one step
  cfg.image_time_window = 4;
  const Observation obs = observe(state, cfg);
  for (float v : obs.memory_image) CHECK(v == 1.0f);
  for (float v : obs.memory_profile) CHECK(v == 1.0f);
}

TEST_CASE("image fractions match the cell-by-cell reference") {
  const ObservationConfig cfg = tiny_config();
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const ProblemInstance p = generate(small_gen_params(seed));
    GameState state(p);
    Rng rng(seed + 1000);
    while (state.status() == GameStatus::Running) {
      const Observation obs = observe(state, cfg);
      const std::vector<float> ref = reference_memory_image(state, cfg);
      REQUIRE(obs.memory_image.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(obs.memory_image[i] == ref[i]);
      const auto legal = state.legal_actions();
      state.step(legal[rng.below(legal.size())]);
    }
  }
}

TEST_CASE("partial occupancy shows the exact fraction") {
  const ProblemInstance p = p1();
  GameState state(p);
  state.step(ActionKind::NoCopy);  // 40 of 100 bytes over steps [0,2]
  ObservationConfig cfg;
  cfg.image_size = 1;  // one cell covering everything
  cfg.image_time_window = 4;
  cfg.profile_bins = 1;
  cfg.supply_window = 4;
  const Observation obs = observe(state, cfg);
  // 40 bytes x 3 steps of 400 byte-steps
  CHECK(obs.memory_image[0] == doctest::Approx(0.3f));
  // at the target step (2) the profile sees 40 of 100 bytes
  CHECK(obs.memory_profile[0] == doctest::Approx(0.4f));
}

TEST_CASE("buffer slots, action features and globals") {
  const ProblemInstance p = alias_trap_triple();
  GameState state(p);
  ObservationConfig cfg = tiny_config();
  cfg.future_buffers = 2;
  cfg.same_tensor_buffers = 2;
  const Observation obs = observe(state, cfg);

  CHECK(obs.current.present == 1.0f);
  CHECK(obs.current.size == 40.0f);
  CHECK(obs.current.is_output == 1.0f);
  CHECK(obs.current.alias_id == 7.0f);
  CHECK(obs.future[0].present == 1.0f);
  CHECK(obs.future[0].benefit == 50.0f);
  CHECK(obs.future[1].present == 1.0f);
  CHECK(obs.same_tensor[0].present == 0.0f);  // tensor 0 never reappears

  // Copy resolves to [0,1] at offset 0 (demand 5 covered by step 1)
  CHECK(obs.actions[0].legal == 1.0f);
  CHECK(obs.actions[0].interval_lo == 0.0f);
  CHECK(obs.actions[0].interval_hi == 1.0f);
  CHECK(obs.actions[0].offset == 0.0f);
  // NoCopy holds the live range
  CHECK(obs.actions[1].legal == 1.0f);
  CHECK(obs.actions[1].interval_hi == 3.0f);
  // Drop is legal and placeless
  CHECK(obs.actions[2].legal == 1.0f);
  CHECK(obs.actions[2].offset == -1.0f);

  CHECK(obs.move_number == 0.0f);
  CHECK(obs.cursor == 0.0f);
  CHECK(obs.alias_index == 0.0f);
  CHECK(obs.alias_remaining == 1.0f);

  CHECK(obs.dimension() == obs.flatten().size());
}

TEST_CASE("supply window reads the remaining supply around the target") {
  const ProblemInstance p = p1();
  GameState state(p);
  state.step(ActionKind::Copy);  // supply becomes [10, 0, 5, 10]
  ObservationConfig cfg = tiny_config();
  cfg.supply_window = 4;
  const Observation obs = observe(state, cfg);  // b1 targets step 2
  CHECK(obs.supply_window == std::vector<float>{10, 0, 5, 10});
}

TEST_CASE("illegal actions observe as illegal") {
  const ProblemInstance trap = alias_trap_pair();
  GameState state(trap);
  state.step(ActionKind::Drop);
  const Observation obs = observe(state, tiny_config());
  CHECK(obs.actions[0].legal == 0.0f);  // alias sibling dropped
  CHECK(obs.actions[1].legal == 0.0f);
  CHECK(obs.actions[2].legal == 1.0f);
}
