// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/trace.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <set>

#include "relmachine/error.hpp"

namespace relmachine {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<MicroOp, std::string_view>, 13> kOpNames{{
    {MicroOp::kRead, "read"},
    {MicroOp::kLookup, "lookup"},
    {MicroOp::kWrite, "write"},
    {MicroOp::kCommit, "commit"},
    {MicroOp::kFused, "fused"},
    {MicroOp::kPad, "pad"},
    {MicroOp::kArgRead, "arg-read"},
    {MicroOp::kScrapRead, "scrap-read"},
    {MicroOp::kScrapWrite, "scrap-write"},
    {MicroOp::kCompute, "compute"},
    {MicroOp::kOutput, "output"},
    {MicroOp::kInstall, "install"},
    {MicroOp::kIdle, "idle"},
}};

std::string_view access_name(Access a) {
  switch (a) {
    case Access::kRead: return "read";
    case Access::kWrite: return "write";
    case Access::kNone: break;
  }
  return "none";
}

Access access_from(std::string_view s) {
  if (s == "read") return Access::kRead;
  if (s == "write") return Access::kWrite;
  if (s == "none") return Access::kNone;
  throw MalformedInput("unknown access kind '" + std::string(s) + "'");
}

}  // namespace

std::string_view snapshot_mode_name(SnapshotMode m) noexcept {
  return m == SnapshotMode::kFull ? "full" : "summary";
}

SnapshotMode snapshot_mode_from_name(std::string_view name) {
  if (name == "full") return SnapshotMode::kFull;
  if (name == "summary") return SnapshotMode::kSummary;
  throw MalformedInput("snapshot mode must be full or summary");
}

std::string_view micro_op_name(MicroOp op) noexcept {
  for (const auto& [o, n] : kOpNames)
    if (o == op) return n;
  return "idle";
}

MicroOp micro_op_from_name(std::string_view name) {
  for (const auto& [o, n] : kOpNames)
    if (n == name) return o;
  throw MalformedInput("unknown micro-op '" + std::string(name) + "'");
}

std::int64_t Trace::k(std::int64_t tau) const {
  if (tau == 0) return 0;
  if (tau < 0 || tau > static_cast<std::int64_t>(K.size()))
    throw PreconditionError("tau " + std::to_string(tau) + " outside the recorded K");
  return K[static_cast<std::size_t>(tau - 1)];
}

std::int64_t Trace::g(std::int64_t tau) const {
  if (tau == 0) return 0;
  if (tau < 0 || tau > static_cast<std::int64_t>(updates.size()))
    throw PreconditionError("tau " + std::to_string(tau) + " outside the recorded updates");
  return updates[static_cast<std::size_t>(tau - 1)].g;
}

std::vector<std::int64_t> Trace::completion_times() const {
  std::vector<std::int64_t> out;
  for (const auto& e : K_tilde)
    if (e.completes) out.push_back(e.t);
  return out;
}

TapeState replay_writes_permuted(const Trace& trace, std::int64_t tau,
                                 const std::vector<std::size_t>& permutation) {
  if (tau < 0 || tau >= static_cast<std::int64_t>(trace.write_ops.size()) ||
      tau >= static_cast<std::int64_t>(trace.local_states.size()))
    throw PreconditionError("no recorded update for tau " + std::to_string(tau));
  const auto& writes = trace.write_ops[static_cast<std::size_t>(tau)];
  if (permutation.size() != writes.size()) throw PreconditionError("permutation has the wrong size");
  std::vector<bool> seen(writes.size(), false);
  for (auto p : permutation) {
    if (p >= writes.size() || seen[p]) throw PreconditionError("permutation is not a bijection");
    seen[p] = true;
  }
  Tape tape(Alphabet("01_#"));
  const TapeState& before = trace.local_states[static_cast<std::size_t>(tau)];
  tape.restore(before);
  for (auto p : permutation) tape.apply_write(writes[p]);
  return tape.snapshot(trace.layout.local);
}

bool distinct_write_indices(const Trace& trace, std::int64_t tau) {
  std::set<std::int64_t> cells;
  for (const auto& w : trace.write_ops.at(static_cast<std::size_t>(tau)))
    if (!cells.insert(w.index).second) return false;
  return true;
}

json to_json(const StepRecord& r) {
  json j{{"type", "step"},
         {"t", r.t},
         {"actor", actor_name(r.actor)},
         {"op", micro_op_name(r.op)},
         {"cell", r.cell ? json(*r.cell) : json(nullptr)},
         {"symbol", r.symbol ? json(std::string(1, *r.symbol)) : json(nullptr)},
         {"access", access_name(r.access)},
         {"state", r.state},
         {"tau", r.tau},
         {"tau_tilde", r.tau_tilde}};
  return j;
}

json to_json(const UpdateRecord& r) {
  return {{"type", "update"},
          {"tau", r.tau},
          {"k_tau", r.k},
          {"g_tau", r.g},
          {"scrap_cells", r.scrap_cells},
          {"local_cells_written", r.local_cells_written},
          {"write_count", r.write_count},
          {"output_length", r.output_length},
          {"query", r.query},
          {"spoof", r.spoof}};
}

void write_trace(std::ostream& out, const Trace& trace, const TraceFooter& footer) {
  json header{{"type", "header"},
              {"schema_version", kTraceSchemaVersion},
              {"snapshots", snapshot_mode_name(trace.mode)},
              {"machine", trace.machine},
              {"seed", trace.seed},
              {"layout", to_json(trace.layout)}};
  out << header.dump() << '\n';
  std::size_t next_update = 0;
  auto flush_updates = [&](std::int64_t upto) {
    while (next_update < trace.updates.size() && trace.updates[next_update].k <= upto)
      out << to_json(trace.updates[next_update++]).dump() << '\n';
  };
  for (const auto& s : trace.steps) {
    out << to_json(s).dump() << '\n';
    flush_updates(s.t);
  }
  flush_updates(std::numeric_limits<std::int64_t>::max());
  for (const auto& d : trace.rng_log)
    out << json{{"type", "draw"}, {"t", d.t}, {"tau", d.tau}, {"draw", d.draw}, {"branch", d.branch}}.dump()
        << '\n';
  out << json{{"type", "end"},
              {"t", footer.t},
              {"tau", footer.tau},
              {"tau_tilde", footer.tau_tilde},
              {"outcome", footer.outcome},
              {"final_local", footer.final_local}}
             .dump()
      << '\n';
}

Trace read_trace(std::istream& in, TraceFooter* footer) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedInput("trace line " + std::to_string(line_no) + ", column " +
                           std::to_string(e.byte) + ": invalid JSON");
    }
    try {
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("schema_version").get<int>() != kTraceSchemaVersion)
          throw MalformedInput("unsupported trace schema_version");
        trace.mode = snapshot_mode_from_name(j.at("snapshots").get<std::string>());
        trace.machine = j.value("machine", std::string{});
        trace.seed = j.value("seed", std::uint64_t{0});
        trace.layout = tape_layout_from_json(j.at("layout"));
        have_header = true;
      } else if (type == "step") {
        StepRecord r;
        r.t = j.at("t").get<std::int64_t>();
        r.actor = j.at("actor").get<std::string>() == "local" ? Actor::kLocal : Actor::kGlobal;
        r.op = micro_op_from_name(j.at("op").get<std::string>());
        if (!j.at("cell").is_null()) r.cell = j.at("cell").get<std::int64_t>();
        if (!j.at("symbol").is_null()) {
          const auto s = j.at("symbol").get<std::string>();
          if (s.size() != 1) throw MalformedInput("step symbol must be one character");
          r.symbol = s[0];
        }
        r.access = access_from(j.value("access", std::string("none")));
        r.state = j.at("state").get<std::string>();
        r.tau = j.at("tau").get<std::int64_t>();
        r.tau_tilde = j.at("tau_tilde").get<std::int64_t>();
        trace.steps.push_back(std::move(r));
      } else if (type == "update") {
        UpdateRecord u;
        u.tau = j.at("tau").get<std::int64_t>();
        u.k = j.at("k_tau").get<std::int64_t>();
        u.g = j.at("g_tau").get<std::int64_t>();
        u.scrap_cells = j.value("scrap_cells", std::int64_t{0});
        u.local_cells_written = j.value("local_cells_written", std::int64_t{0});
        u.write_count = j.value("write_count", std::int64_t{0});
        u.output_length = j.value("output_length", std::int64_t{0});
        u.query = j.value("query", false);
        u.spoof = j.value("spoof", false);
        if (!trace.K.empty() && u.k <= trace.K.back())
          throw MalformedInput("trace line " + std::to_string(line_no) + ": K is not strictly increasing");
        trace.K.push_back(u.k);
        trace.updates.push_back(u);
      } else if (type == "draw") {
        trace.rng_log.push_back({j.at("t").get<std::int64_t>(), j.at("tau").get<std::int64_t>(),
                                 j.at("draw").get<double>(), j.at("branch").get<std::size_t>()});
      } else if (type == "end") {
        if (footer) {
          footer->t = j.at("t").get<std::int64_t>();
          footer->tau = j.at("tau").get<std::int64_t>();
          footer->tau_tilde = j.at("tau_tilde").get<std::int64_t>();
          footer->outcome = j.at("outcome").get<std::string>();
          footer->final_local = j.value("final_local", std::string{});
        }
      } else {
        throw MalformedInput("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw MalformedInput("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw MalformedInput("trace has no header record");
  std::int64_t previous = 0;
  for (auto k : trace.K) {
    trace.runtime_set_sizes.push_back(k - previous - 1);
    previous = k;
  }
  return trace;
}

}  // namespace relmachine
