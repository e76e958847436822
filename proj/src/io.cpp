#include "mmapgame/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmapgame/validator.hpp"

namespace mmapgame {

using json = nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& origin,
                             const std::string& what) {
  throw ParseError(origin + ": " + what);
}

json parse_document(const std::string& text, const std::string& origin) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) parse_fail(origin, "not valid JSON");
  return doc;
}

const json& field(const json& doc, const char* key,
                  const std::string& origin) {
  auto it = doc.find(key);
  if (it == doc.end()) parse_fail(origin, std::string("missing field '") +
                                              key + "'");
  return *it;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

json interval_to_json(const TimeInterval& iv) {
  return json::array({iv.lo, iv.hi});
}

TimeInterval interval_from_json(const json& j, const std::string& origin) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer())
    parse_fail(origin, "interval must be [lo, hi]");
  return {j[0].get<TimeStep>(), j[1].get<TimeStep>()};
}

json problem_document(const ProblemInstance& p) {
  json doc;
  doc["version"] = kFileFormatVersion;
  doc["T"] = p.num_instructions;
  doc["max_size"] = p.max_size;
  doc["supply"] = p.initial_supply;
  json buffers = json::array();
  for (const Buffer& b : p.buffers) {
    json jb;
    jb["id"] = b.id;
    jb["size"] = b.size;
    jb["is_output"] = b.is_output;
    jb["target_time"] = b.target_time;
    jb["tensor_id"] = b.tensor_id;
    if (b.alias_id)
      jb["alias_id"] = *b.alias_id;
    else
      jb["alias_id"] = nullptr;
    jb["live_range"] = interval_to_json(b.live_range);
    jb["demand"] = b.demand;
    jb["benefit"] = b.benefit;
    buffers.push_back(std::move(jb));
  }
  doc["buffers"] = std::move(buffers);
  if (p.latency_tables) {
    json tables = json::array();
    for (TimeStep t = 0; t < p.num_instructions; ++t) {
      const InstructionLatency& lt = p.latency_tables->per_instruction[t];
      json jt;
      jt["instruction"] = t;
      jt["base"] = lt.base;
      jt["capped"] = lt.capped;
      jt["latencies"] = lt.latencies;
      json extras = json::object();
      for (const auto& [id, saving] : lt.extra_savings)
        extras[std::to_string(id)] = saving;
      jt["extra_savings"] = std::move(extras);
      tables.push_back(std::move(jt));
    }
    doc["latency_tables"] = std::move(tables);
  } else {
    doc["latency_tables"] = nullptr;
  }
  return doc;
}

}  // namespace

std::string problem_to_json(const ProblemInstance& problem) {
  return problem_document(problem).dump(2) + "\n";
}

std::string problem_digest(const ProblemInstance& problem) {
  return hex64(fnv1a(problem_document(problem).dump()));
}

ProblemInstance problem_from_json(const std::string& text,
                                  const std::string& origin) {
  const json doc = parse_document(text, origin);
  if (!doc.is_object()) parse_fail(origin, "top level must be an object");
  if (field(doc, "version", origin).get<int>() != kFileFormatVersion)
    parse_fail(origin, "unsupported version");

  ProblemInstance p;
  p.num_instructions = field(doc, "T", origin).get<TimeStep>();
  p.max_size = field(doc, "max_size", origin).get<ByteSize>();
  const json& supply = field(doc, "supply", origin);
  if (!supply.is_array()) parse_fail(origin, "supply must be an array");
  p.initial_supply = supply.get<std::vector<double>>();

  const json& buffers = field(doc, "buffers", origin);
  if (!buffers.is_array()) parse_fail(origin, "buffers must be an array");
  for (const json& jb : buffers) {
    Buffer b;
    const std::string ctx =
        origin + ": buffer " + std::to_string(p.buffers.size());
    b.id = field(jb, "id", ctx).get<int>();
    b.size = field(jb, "size", ctx).get<ByteSize>();
    b.is_output = field(jb, "is_output", ctx).get<bool>();
    b.target_time = field(jb, "target_time", ctx).get<TimeStep>();
    b.tensor_id = field(jb, "tensor_id", ctx).get<TensorId>();
    const json& alias = field(jb, "alias_id", ctx);
    if (!alias.is_null()) b.alias_id = alias.get<AliasId>();
    b.live_range = interval_from_json(field(jb, "live_range", ctx), ctx);
    b.demand = field(jb, "demand", ctx).get<double>();
    b.benefit = field(jb, "benefit", ctx).get<double>();
    p.buffers.push_back(b);
  }

  const json& tables = field(doc, "latency_tables", origin);
  if (!tables.is_null()) {
    if (!tables.is_array())
      parse_fail(origin, "latency_tables must be an array or null");
    LatencyTables lt;
    lt.per_instruction.resize(p.num_instructions);
    for (const json& jt : tables) {
      const std::string ctx = origin + ": latency table";
      const TimeStep t = field(jt, "instruction", ctx).get<TimeStep>();
      if (t < 0 || t >= p.num_instructions)
        parse_fail(ctx, "instruction index out of range");
      InstructionLatency& entry = lt.per_instruction[t];
      entry.base = field(jt, "base", ctx).get<double>();
      entry.capped = field(jt, "capped", ctx).get<std::vector<int>>();
      entry.latencies =
          field(jt, "latencies", ctx).get<std::vector<double>>();
      for (const auto& [key, value] :
           field(jt, "extra_savings", ctx).items())
        entry.extra_savings.emplace_back(std::stoi(key),
                                         value.get<double>());
      std::sort(entry.extra_savings.begin(), entry.extra_savings.end());
    }
    p.latency_tables = std::move(lt);
  }

  try {
    check_problem(p);
  } catch (const std::invalid_argument& e) {
    parse_fail(origin, e.what());
  }
  return p;
}

namespace {

json placements_document(const Solution& solution,
                         const ProblemInstance& problem) {
  json placements = json::array();
  for (std::size_t i = 0; i < solution.placements.size(); ++i) {
    const Placement& p = solution.placements[i];
    json jp;
    jp["buffer_id"] = static_cast<int>(i);
    jp["action"] = std::string(to_string(p.action));
    if (p.in_fast_memory()) {
      jp["offset"] = p.offset;
      jp["interval"] = interval_to_json(p.interval);
    } else {
      jp["offset"] = nullptr;
      jp["interval"] = nullptr;
    }
    placements.push_back(std::move(jp));
  }
  (void)problem;
  return placements;
}

std::vector<Placement> placements_from_json(const json& arr,
                                            const ProblemInstance& problem,
                                            const std::string& origin) {
  if (!arr.is_array()) parse_fail(origin, "placements must be an array");
  if (arr.size() != problem.buffers.size())
    parse_fail(origin, "placement count " + std::to_string(arr.size()) +
                           " does not match " +
                           std::to_string(problem.buffers.size()) +
                           " buffers");
  std::vector<Placement> out(problem.buffers.size());
  std::vector<bool> seen(problem.buffers.size(), false);
  for (const json& jp : arr) {
    const std::string ctx = origin + ": placement";
    const int id = field(jp, "buffer_id", ctx).get<int>();
    if (id < 0 || id >= static_cast<int>(out.size()) || seen[id])
      parse_fail(ctx, "bad or duplicate buffer_id " + std::to_string(id));
    seen[id] = true;
    Placement p;
    const auto action =
        action_from_string(field(jp, "action", ctx).get<std::string>());
    if (!action) parse_fail(ctx, "unknown action");
    p.action = *action;
    const json& offset = field(jp, "offset", ctx);
    const json& interval = field(jp, "interval", ctx);
    if (p.action == ActionKind::Drop) {
      if (!offset.is_null() || !interval.is_null())
        parse_fail(ctx, "drop must have null offset and interval");
    } else {
      if (offset.is_null() || interval.is_null())
        parse_fail(ctx, "placed buffer needs offset and interval");
      p.offset = offset.get<ByteOffset>();
      if (p.offset < 0) parse_fail(ctx, "placed buffer offset is negative");
      p.interval = interval_from_json(interval, ctx);
      if (p.interval.is_empty())
        parse_fail(ctx, "placed buffer interval is empty");
      p.copy_interval = copy_interval_of(problem.buffers[id], p);
    }
    out[id] = p;
  }
  return out;
}

}  // namespace

std::string solution_to_json(const Solution& solution,
                             const ProblemInstance& problem) {
  json doc;
  doc["version"] = kFileFormatVersion;
  doc["problem_digest"] = problem_digest(problem);
  doc["placements"] = placements_document(solution, problem);
  doc["total_benefit"] = solution.total_benefit;
  return doc.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text,
                            const ProblemInstance& problem,
                            const std::string& origin) {
  const json doc = parse_document(text, origin);
  if (field(doc, "version", origin).get<int>() != kFileFormatVersion)
    parse_fail(origin, "unsupported version");
  const std::string digest =
      field(doc, "problem_digest", origin).get<std::string>();
  const std::string expected = problem_digest(problem);
  if (digest != expected)
    throw DigestMismatchError(origin + ": problem digest " + digest +
                              " does not match " + expected);
  Solution s;
  s.placements =
      placements_from_json(field(doc, "placements", origin), problem, origin);
  s.total_benefit = field(doc, "total_benefit", origin).get<double>();
  return s;
}

std::string trajectory_to_json(const Trajectory& trajectory,
                               const ProblemInstance& problem) {
  json doc;
  doc["version"] = kFileFormatVersion;
  doc["problem_digest"] = problem_digest(problem);
  doc["placements"] = placements_document(trajectory.solution, problem);
  doc["total_benefit"] = trajectory.solution.total_benefit;
  doc["status"] = std::string(to_string(trajectory.final_status));
  doc["return"] = trajectory.episode_return;
  doc["budget_exhausted"] = trajectory.budget_exhausted;

  json steps = json::array();
  {
    GameState state(problem);
    for (const TrajectoryStep& s : trajectory.steps) {
      json js;
      js["buffer_id"] = s.buffer_id;
      js["action"] = std::string(to_string(s.action));
      js["reward"] = s.reward;
      js["state_digest"] = hex64(state_digest(state));
      steps.push_back(std::move(js));
      state.step(s.action);
    }
  }
  doc["steps"] = std::move(steps);

  json backups = json::array();
  for (const BackupEvent& e : trajectory.backups) {
    json je;
    je["failed_buffer_id"] = e.failed_buffer_id;
    je["alias_id"] = e.alias_id;
    je["restored_cursor"] = e.restored_cursor;
    je["forfeited_benefit"] = e.forfeited_benefit;
    backups.push_back(std::move(je));
  }
  doc["backup_events"] = std::move(backups);
  doc["backup_resets"] = trajectory.backup_resets();
  return doc.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text,
                                const ProblemInstance& problem,
                                const std::string& origin) {
  const json doc = parse_document(text, origin);
  if (field(doc, "version", origin).get<int>() != kFileFormatVersion)
    parse_fail(origin, "unsupported version");
  const std::string digest =
      field(doc, "problem_digest", origin).get<std::string>();
  if (digest != problem_digest(problem))
    throw DigestMismatchError(origin + ": problem digest mismatch");

  Trajectory t;
  t.solution.placements =
      placements_from_json(field(doc, "placements", origin), problem, origin);
  t.solution.total_benefit =
      field(doc, "total_benefit", origin).get<double>();
  const auto status =
      field(doc, "status", origin).get<std::string>();
  if (status == "complete")
    t.final_status = GameStatus::Complete;
  else if (status == "infeasible")
    t.final_status = GameStatus::Infeasible;
  else if (status == "running")
    t.final_status = GameStatus::Running;
  else
    parse_fail(origin, "unknown status " + status);
  t.episode_return = field(doc, "return", origin).get<double>();
  t.budget_exhausted = field(doc, "budget_exhausted", origin).get<bool>();
  for (const json& js : field(doc, "steps", origin)) {
    TrajectoryStep s;
    s.buffer_id = field(js, "buffer_id", origin).get<int>();
    const auto action =
        action_from_string(field(js, "action", origin).get<std::string>());
    if (!action) parse_fail(origin, "unknown action in step");
    s.action = *action;
    s.reward = field(js, "reward", origin).get<double>();
    t.steps.push_back(s);
  }
  for (const json& je : field(doc, "backup_events", origin)) {
    BackupEvent e;
    e.failed_buffer_id = field(je, "failed_buffer_id", origin).get<int>();
    e.alias_id = field(je, "alias_id", origin).get<AliasId>();
    e.restored_cursor = field(je, "restored_cursor", origin).get<int>();
    e.forfeited_benefit =
        field(je, "forfeited_benefit", origin).get<double>();
    t.backups.push_back(e);
  }
  return t;
}

GenParams gen_params_from_json(const std::string& text,
                               const std::string& origin) {
  const json doc = parse_document(text, origin);
  if (!doc.is_object()) parse_fail(origin, "top level must be an object");
  GenParams p;
  auto load = [&doc](const char* key, auto& into) {
    auto it = doc.find(key);
    if (it != doc.end()) into = it->get<std::decay_t<decltype(into)>>();
  };
  load("T", p.num_instructions);
  load("max_size", p.max_size);
  load("num_tensors", p.num_tensors);
  load("uses_per_tensor_mean", p.uses_per_tensor_mean);
  load("uses_per_tensor_max", p.uses_per_tensor_max);
  load("use_gap_mean", p.use_gap_mean);
  load("size_min", p.size_min);
  load("size_max", p.size_max);
  load("size_quantum", p.size_quantum);
  load("alias_rate", p.alias_rate);
  load("bandwidth_factor", p.bandwidth_factor);
  load("base_latency_min", p.base_latency_min);
  load("base_latency_max", p.base_latency_max);
  load("saving_frac_min", p.saving_frac_min);
  load("saving_frac_max", p.saving_frac_max);
  load("interaction_scale", p.interaction_scale);
  load("interaction_pair_prob", p.interaction_pair_prob);
  load("emit_tables", p.emit_tables);
  load("seed", p.seed);
  return p;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ProblemInstance read_problem(const std::filesystem::path& path) {
  return problem_from_json(read_text_file(path), path.string());
}

void write_problem(const ProblemInstance& problem,
                   const std::filesystem::path& path) {
  write_text_file(path, problem_to_json(problem));
}

Solution read_solution(const std::filesystem::path& path,
                       const ProblemInstance& problem) {
  return solution_from_json(read_text_file(path), problem, path.string());
}

void write_solution(const Solution& solution, const ProblemInstance& problem,
                    const std::filesystem::path& path) {
  write_text_file(path, solution_to_json(solution, problem));
}

Trajectory read_trajectory(const std::filesystem::path& path,
                           const ProblemInstance& problem) {
  return trajectory_from_json(read_text_file(path), problem, path.string());
}

void write_trajectory(const Trajectory& trajectory,
                      const ProblemInstance& problem,
                      const std::filesystem::path& path) {
  write_text_file(path, trajectory_to_json(trajectory, problem));
}

GenParams read_gen_params(const std::filesystem::path& path) {
  return gen_params_from_json(read_text_file(path), path.string());
}

}  // namespace mmapgame
