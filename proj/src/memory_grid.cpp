#include "mmapgame/memory_grid.hpp"

#include <algorithm>
#include <set>

namespace mmapgame {

MemoryGrid::MemoryGrid(TimeStep num_steps, ByteSize capacity)
    : capacity_(capacity), steps_(static_cast<std::size_t>(num_steps)) {
  if (num_steps < 0 || capacity <= 0)
    throw std::out_of_range("memory grid needs num_steps >= 0, capacity > 0");
}

void MemoryGrid::check_query(const TimeInterval& interval, ByteOffset offset,
                             ByteSize size) const {
  if (interval.lo < 0 || interval.hi >= num_steps())
    throw std::out_of_range("grid interval [" + std::to_string(interval.lo) +
                            "," + std::to_string(interval.hi) +
                            "] outside [0," + std::to_string(num_steps()) +
                            ")");
  if (offset < 0 || size <= 0 || offset + size > capacity_)
    throw std::out_of_range("grid byte range [" + std::to_string(offset) +
                            "," + std::to_string(offset + size) +
                            ") outside capacity " + std::to_string(capacity_));
}

bool MemoryGrid::is_free(const TimeInterval& interval, ByteOffset offset,
                         ByteSize size, TensorId tensor_id) const {
  if (interval.is_empty()) return true;
  check_query(interval, offset, size);
  const ByteOffset end = offset + size;
  for (TimeStep t = interval.lo; t <= interval.hi; ++t) {
    for (const Span& s : steps_[t]) {
      if (s.lo >= end) break;
      if (s.hi > offset && s.tensor != tensor_id) return false;
    }
  }
  return true;
}

void MemoryGrid::insert_span(TimeStep t, const Span& span) {
  auto& row = steps_[t];
  auto it = std::upper_bound(
      row.begin(), row.end(), span,
      [](const Span& a, const Span& b) { return a.lo < b.lo; });
  row.insert(it, span);
}

void MemoryGrid::occupy(const Buffer& buffer, const TimeInterval& interval,
                        ByteOffset offset) {
  if (interval.is_empty())
    throw std::out_of_range("cannot occupy an empty interval");
  check_query(interval, offset, buffer.size);
  const ByteOffset end = offset + buffer.size;
  for (TimeStep t = interval.lo; t <= interval.hi; ++t) {
    for (const Span& s : steps_[t]) {
      if (s.lo >= end) break;
      if (s.hi > offset && s.tensor != buffer.tensor_id)
        throw OccupancyConflict(
            s.buffer, t, std::max(s.lo, offset),
            "occupancy conflict: buffer " + std::to_string(buffer.id) +
                " vs buffer " + std::to_string(s.buffer) + " at step " +
                std::to_string(t) + ", byte " +
                std::to_string(std::max(s.lo, offset)));
    }
  }
  force_occupy(buffer, interval, offset);
}

void MemoryGrid::force_occupy(const Buffer& buffer,
                              const TimeInterval& interval,
                              ByteOffset offset) {
  if (interval.is_empty())
    throw std::out_of_range("cannot occupy an empty interval");
  check_query(interval, offset, buffer.size);
  const Span span{offset, offset + buffer.size, buffer.tensor_id, buffer.id};
  for (TimeStep t = interval.lo; t <= interval.hi; ++t) insert_span(t, span);
}

std::optional<ByteOffset> MemoryGrid::find_lowest_offset(
    const TimeInterval& interval, ByteSize size, TensorId tensor_id,
    std::optional<ByteOffset> pinned_offset) const {
  if (size <= 0) throw std::out_of_range("find_lowest_offset needs size > 0");
  if (size > capacity_) return std::nullopt;
  if (pinned_offset) {
    if (*pinned_offset < 0 || *pinned_offset + size > capacity_)
      return std::nullopt;
    if (is_free(interval, *pinned_offset, size, tensor_id))
      return *pinned_offset;
    return std::nullopt;
  }
  if (interval.is_empty()) return 0;

  // First-fit candidates: 0 and the end of every range a different tensor
  // holds somewhere in the interval.
  std::set<ByteOffset> candidates{0};
  for (TimeStep t = interval.lo; t <= interval.hi; ++t)
    for (const Span& s : steps_[t])
      if (s.tensor != tensor_id && s.hi + size <= capacity_)
        candidates.insert(s.hi);
  for (ByteOffset o : candidates)
    if (is_free(interval, o, size, tensor_id)) return o;
  return std::nullopt;
}

std::vector<OverlapConflict> MemoryGrid::sweep_conflicts() const {
  std::vector<OverlapConflict> out;
  std::set<std::pair<int, int>> seen;
  for (TimeStep t = 0; t < num_steps(); ++t) {
    const auto& row = steps_[t];
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (std::size_t j = i + 1; j < row.size(); ++j) {
        if (row[j].lo >= row[i].hi) break;
        if (row[i].tensor == row[j].tensor) continue;
        auto key = std::minmax(row[i].buffer, row[j].buffer);
        if (seen.insert(key).second)
          out.push_back({key.first, key.second, t, row[j].lo});
      }
    }
  }
  return out;
}

std::map<int, std::pair<ByteOffset, TimeInterval>>
MemoryGrid::extract_placements() const {
  std::map<int, std::pair<ByteOffset, TimeInterval>> out;
  for (TimeStep t = 0; t < num_steps(); ++t) {
    for (const Span& s : steps_[t]) {
      auto it = out.find(s.buffer);
      if (it == out.end()) {
        out.emplace(s.buffer, std::make_pair(s.lo, TimeInterval{t, t}));
      } else {
        it->second.second.hi = t;
      }
    }
  }
  return out;
}

}  // namespace mmapgame
