#pragma once

#include <array>
#include <vector>

#include "mmapgame/game.hpp"

namespace mmapgame {

struct ObservationConfig {
  int future_buffers = 5;       // k
  int same_tensor_buffers = 5;  // l
  int image_size = 128;         // square memory image
  TimeStep image_time_window = 1024;
  int profile_bins = 1024;      // offset bins at the target step
  int supply_window = 128;      // supply steps around the target
};

// Per-buffer feature slot: presence flag plus the raw buffer features.
struct BufferFeatures {
  float present = 0.0f;
  float size = 0.0f;
  float is_output = 0.0f;
  float target_time = 0.0f;
  float tensor_id = 0.0f;
  float alias_id = -1.0f;  // -1 when the buffer has no alias group
  float live_lo = 0.0f;
  float live_hi = 0.0f;
  float demand = 0.0f;
  float benefit = 0.0f;
};

struct ActionFeatures {
  float legal = 0.0f;
  float interval_lo = -1.0f;
  float interval_hi = -1.0f;
  float offset = -1.0f;  // slow memory encodes as -1
};

struct Observation {
  BufferFeatures current;
  std::vector<BufferFeatures> future;       // k slots, zero-padded
  std::vector<BufferFeatures> same_tensor;  // l slots, zero-padded
  std::vector<float> memory_image;          // image_size^2 fractions in [0,1]
  std::vector<float> memory_profile;        // profile_bins fractions in [0,1]
  std::vector<float> supply_window;
  std::array<ActionFeatures, 3> actions;    // Copy, NoCopy, Drop order
  float move_number = 0.0f;
  float cursor = 0.0f;
  float alias_index = 0.0f;
  float alias_remaining = 0.0f;

  std::size_t dimension() const;
  std::vector<float> flatten() const;
};

Observation observe(const GameState& state,
                    const ObservationConfig& config = {});

// Time window of `length` steps centered on `center`, shifted to stay inside
// [0, num_steps); shorter than `length` only when the program is shorter.
TimeInterval centered_window(TimeStep center, TimeStep length,
                             TimeStep num_steps);

}  // namespace mmapgame
