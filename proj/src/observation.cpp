#include "mmapgame/observation.hpp"

#include <algorithm>

namespace mmapgame {

namespace {

BufferFeatures features_of(const Buffer& b) {
  BufferFeatures f;
  f.present = 1.0f;
  f.size = static_cast<float>(b.size);
  f.is_output = b.is_output ? 1.0f : 0.0f;
  f.target_time = static_cast<float>(b.target_time);
  f.tensor_id = static_cast<float>(b.tensor_id);
  f.alias_id = b.alias_id ? static_cast<float>(*b.alias_id) : -1.0f;
  f.live_lo = static_cast<float>(b.live_range.lo);
  f.live_hi = static_cast<float>(b.live_range.hi);
  f.demand = static_cast<float>(b.demand);
  f.benefit = static_cast<float>(b.benefit);
  return f;
}

// Bin b covers [b*total/bins, (b+1)*total/bins) in integer arithmetic.
ByteOffset bin_edge(int bin, ByteSize total, int bins) {
  return static_cast<ByteOffset>(bin) * total / bins;
}

// Merged occupied byte ranges at one step, so dual-attributed bytes count
// once.
std::vector<std::pair<ByteOffset, ByteOffset>> merged_ranges(
    const std::map<int, std::pair<ByteOffset, TimeInterval>>& placements,
    const ProblemInstance& problem, TimeStep step) {
  std::vector<std::pair<ByteOffset, ByteOffset>> ranges;
  for (const auto& [id, po] : placements) {
    const auto& [offset, interval] = po;
    if (interval.contains(step))
      ranges.emplace_back(offset, offset + problem.buffers[id].size);
  }
  std::sort(ranges.begin(), ranges.end());
  std::vector<std::pair<ByteOffset, ByteOffset>> merged;
  for (auto [lo, hi] : ranges) {
    if (!merged.empty() && lo <= merged.back().second)
      merged.back().second = std::max(merged.back().second, hi);
    else
      merged.emplace_back(lo, hi);
  }
  return merged;
}

// Adds the exact byte overlap of [lo, hi) with each bin to acc.
void spread_over_bins(ByteOffset lo, ByteOffset hi, ByteSize total, int bins,
                      double* acc) {
  if (lo >= hi) return;
  int bin = static_cast<int>(lo * bins / total);
  if (bin > 0) --bin;  // guard against edge rounding
  for (; bin < bins; ++bin) {
    const ByteOffset bin_lo = bin_edge(bin, total, bins);
    const ByteOffset bin_hi = bin_edge(bin + 1, total, bins);
    if (bin_lo >= hi) break;
    const ByteOffset overlap = std::min(hi, bin_hi) - std::max(lo, bin_lo);
    if (overlap > 0) acc[bin] += static_cast<double>(overlap);
  }
}

}  // namespace

TimeInterval centered_window(TimeStep center, TimeStep length,
                             TimeStep num_steps) {
  const TimeStep len = std::min(length, num_steps);
  if (len <= 0) return TimeInterval::empty();
  TimeStep lo = center - len / 2;
  lo = std::max<TimeStep>(0, std::min(lo, num_steps - len));
  return {lo, lo + len - 1};
}

std::size_t Observation::dimension() const {
  return 10 * (1 + future.size() + same_tensor.size()) + memory_image.size() +
         memory_profile.size() + supply_window.size() + 3 * 4 + 4;
}

std::vector<float> Observation::flatten() const {
  std::vector<float> out;
  out.reserve(dimension());
  auto push_buffer = [&out](const BufferFeatures& f) {
    out.insert(out.end(), {f.present, f.size, f.is_output, f.target_time,
                           f.tensor_id, f.alias_id, f.live_lo, f.live_hi,
                           f.demand, f.benefit});
  };
  push_buffer(current);
  for (const auto& f : future) push_buffer(f);
  for (const auto& f : same_tensor) push_buffer(f);
  out.insert(out.end(), memory_image.begin(), memory_image.end());
  out.insert(out.end(), memory_profile.begin(), memory_profile.end());
  out.insert(out.end(), supply_window.begin(), supply_window.end());
  for (const auto& a : actions)
    out.insert(out.end(), {a.legal, a.interval_lo, a.interval_hi, a.offset});
  out.insert(out.end(), {move_number, cursor, alias_index, alias_remaining});
  return out;
}

Observation observe(const GameState& state, const ObservationConfig& config) {
  const ProblemInstance& problem = state.problem();
  const Buffer& b = state.current_buffer();
  const int n = state.num_buffers();
  const int t = state.cursor();
  const ByteSize M = problem.max_size;

  Observation obs;
  obs.current = features_of(b);

  obs.future.resize(config.future_buffers);
  for (int i = 0; i < config.future_buffers; ++i)
    if (t + 1 + i < n) obs.future[i] = features_of(problem.buffers[t + 1 + i]);

  obs.same_tensor.resize(config.same_tensor_buffers);
  int filled = 0;
  for (int i = t + 1; i < n && filled < config.same_tensor_buffers; ++i)
    if (problem.buffers[i].tensor_id == b.tensor_id)
      obs.same_tensor[filled++] = features_of(problem.buffers[i]);

  const auto placements = state.grid().extract_placements();

  // Memory image: mean occupancy per cell over a time window x the full
  // offset axis. Byte-step counts are accumulated exactly and divided once.
  const int img = config.image_size;
  const TimeInterval window = centered_window(
      b.target_time, config.image_time_window, problem.num_instructions);
  obs.memory_image.assign(static_cast<std::size_t>(img) * img, 0.0f);
  if (!window.is_empty()) {
    const TimeStep win_len = window.length();
    std::vector<double> cell_bytes(static_cast<std::size_t>(img) * img, 0.0);
    std::vector<TimeStep> steps_in_bin(img, 0);
    int time_bin = 0;
    for (TimeStep step = window.lo; step <= window.hi; ++step) {
      const TimeStep rel = step - window.lo;
      while (time_bin + 1 < img &&
             rel >= bin_edge(time_bin + 1, win_len, img))
        ++time_bin;
      ++steps_in_bin[time_bin];
      double* row = cell_bytes.data() + static_cast<std::size_t>(time_bin) * img;
      for (auto [lo, hi] : merged_ranges(placements, problem, step))
        spread_over_bins(lo, hi, M, img, row);
    }
    for (int tb = 0; tb < img; ++tb) {
      if (steps_in_bin[tb] == 0) continue;
      for (int ob = 0; ob < img; ++ob) {
        const ByteOffset width =
            bin_edge(ob + 1, M, img) - bin_edge(ob, M, img);
        if (width <= 0) continue;
        const double area =
            static_cast<double>(steps_in_bin[tb]) * static_cast<double>(width);
        obs.memory_image[static_cast<std::size_t>(tb) * img + ob] =
            static_cast<float>(
                cell_bytes[static_cast<std::size_t>(tb) * img + ob] / area);
      }
    }
  }

  // Memory profile: occupancy fraction per offset bin at the target step.
  obs.memory_profile.assign(config.profile_bins, 0.0f);
  {
    const int bins = config.profile_bins;
    std::vector<double> bin_bytes(bins, 0.0);
    for (auto [lo, hi] : merged_ranges(placements, problem, b.target_time))
      spread_over_bins(lo, hi, M, bins, bin_bytes.data());
    for (int bin = 0; bin < bins; ++bin) {
      const ByteOffset width =
          bin_edge(bin + 1, M, bins) - bin_edge(bin, M, bins);
      if (width > 0)
        obs.memory_profile[bin] =
            static_cast<float>(bin_bytes[bin] / static_cast<double>(width));
    }
  }

  // Supply window around the target; slots past the program end stay zero.
  obs.supply_window.assign(config.supply_window, 0.0f);
  {
    const TimeInterval w = centered_window(b.target_time, config.supply_window,
                                           problem.num_instructions);
    for (TimeStep step = w.lo; step <= w.hi && !w.is_empty(); ++step)
      obs.supply_window[static_cast<std::size_t>(step - w.lo)] =
          static_cast<float>(state.remaining_supply()[step]);
  }

  for (int i = 0; i < 3; ++i) {
    const auto placement = state.resolve(kAllActions[i]);
    ActionFeatures& f = obs.actions[i];
    f.legal = placement ? 1.0f : 0.0f;
    if (placement && placement->in_fast_memory()) {
      f.interval_lo = static_cast<float>(placement->interval.lo);
      f.interval_hi = static_cast<float>(placement->interval.hi);
      f.offset = static_cast<float>(placement->offset);
    }
  }

  obs.move_number = static_cast<float>(t);
  obs.cursor = static_cast<float>(t);
  if (b.alias_id) {
    int before = 0;
    int after = 0;
    for (int i = 0; i < n; ++i) {
      const auto& other = problem.buffers[i];
      if (!other.alias_id || *other.alias_id != *b.alias_id) continue;
      if (i < t) ++before;
      if (i > t) ++after;
    }
    obs.alias_index = static_cast<float>(before);
    obs.alias_remaining = static_cast<float>(after);
  }
  return obs;
}

}  // namespace mmapgame
