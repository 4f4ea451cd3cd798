// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/scenario.hpp"

#include <chrono>
#include <ctime>
#include <numbers>

#include "relmachine/corpus.hpp"
#include "relmachine/error.hpp"
#include "relmachine/experiments.hpp"
#include "relmachine/machine_io.hpp"
#include "relmachine/quantum_io.hpp"

namespace relmachine {
namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MachineSpec machine_field(const json& v) {
  if (v.is_object()) return machine_from_json(v);
  const auto name = v.get<std::string>();
  if (name == "equality-checker") return corpus::equality_checker();
  if (name == "first-cell-one") return corpus::first_cell_one();
  if (name == "reject-all") return corpus::reject_all();
  if (name == "unary-increment") return corpus::unary_increment();
  throw MalformedInput("unknown corpus machine '" + name + "'");
}

PadPair pads_field(const json& config) {
  const json adversary = config.value("adversary", json::object());
  const json pads = adversary.value("pads", json::array({1, 9}));
  if (!pads.is_array() || pads.size() != 2) throw MalformedInput("adversary.pads must be [a, b]");
  return {pads.at(0).get<std::int64_t>(), pads.at(1).get<std::int64_t>()};
}

std::vector<std::string> detectors_field(const json& config, const std::string& fallback) {
  if (!config.contains("detector")) return {fallback};
  const json& d = config.at("detector");
  if (d.is_array()) return d.get<std::vector<std::string>>();
  return {d.get<std::string>()};
}

json timing_games(const json& config, bool probabilistic) {
  const PadPair pads = pads_field(config);
  const auto trials = config.value("trials", std::int64_t{10000});
  const auto seed = config.at("seed").get<std::uint64_t>();
  const bool keep_log = config.value("trial_log", false);
  json results = json::array();
  for (const auto& name : detectors_field(config, probabilistic ? "fair-coin" : "constant-0")) {
    const Detector d = make_detector(name);
    json r;
    if (probabilistic) {
      const auto rep = run_psimtime_game(d, pads, trials, seed, keep_log);
      r = to_json(rep.stats);
      r["chi_square"] = {{"statistic", rep.independence.statistic},
                         {"dof", rep.independence.dof},
                         {"p_value", rep.independence.p_value}};
    } else {
      r = to_json(run_simtime_game(d, pads, trials, seed, keep_log));
    }
    r["control"] = d.needs_tell_pad;
    r["guard_arm"] = d.guard_arm;
    results.push_back(r);
  }
  return {{"pads", {pads.a, pads.b}}, {"detectors", results}};
}

json measure(const json& config) {
  MeasureConfig mc;
  const json adversary = config.value("adversary", json::object());
  const auto kind = adversary.value("approximation", std::string("midpoint"));
  if (kind == "midpoint") mc.approx = ApproxKind::kMidpoint;
  else if (kind == "offset") mc.approx = ApproxKind::kOffset;
  else if (kind == "exact") mc.approx = ApproxKind::kExact;
  else throw MalformedInput("adversary.approximation must be midpoint, offset or exact");
  mc.offset = adversary.value("offset", 1.0);
  const json f = config.value("f", json::object());
  mc.f = {f.value("a", 2.0), f.value("b", 0.0)};
  mc.k_bits = config.value("k_bits", 8);
  mc.detector = config.value("detector", std::string("interval"));
  const auto rep = run_measure_game(mc, config.value("trials", std::int64_t{10000}),
                                    config.at("seed").get<std::uint64_t>(), config.value("trial_log", false));
  json r = to_json(rep.stats);
  r["approx_trials"] = rep.approx_trials;
  r["approx_accuracy"] = rep.approx_accuracy;
  r["envelope_violations"] = rep.envelope_violations;
  return r;
}

json spoof(const json& config) {
  const MachineSpec spec = machine_field(config.value("machine", json("equality-checker")));
  const auto rep = run_spoof_accept_scenario(spec, config.value("horizon", std::int64_t{16}),
                                             config.value("candidate_bound", std::int64_t{1024}),
                                             config.value("cells", std::int64_t{3}),
                                             config.at("seed").get<std::uint64_t>(),
                                             config.value("local_width", std::int64_t{16}));
  json r = to_json(rep);
  r["machine"] = spec.name;
  return r;
}

json benchmark(const json& config) {
  const auto ids = config.value("oracles", std::vector<std::string>{"parity", "identity"});
  const auto sizes = config.value("sizes", std::vector<std::int64_t>{4, 8, 16, 32});
  json profiles = json::array();
  for (const auto& p : run_oracle_benchmark(ids, sizes, config.at("seed").get<std::uint64_t>())) {
    json j = to_json(p);
    j["local_constant"] = p.local_constant();
    j["global_strictly_increasing"] = p.global_strictly_increasing();
    profiles.push_back(j);
  }
  return {{"profiles", profiles}};
}

json schrodinger(const json& config) {
  const auto seed = config.at("seed").get<std::uint64_t>();
  Rng rng(derive_seed(seed, 11));
  const int n = config.value("n_qubits", 1);
  Hamiltonian h;
  if (config.contains("hamiltonian")) {
    h = hamiltonian_from_json(config.at("hamiltonian"));
  } else if (config.value("random_hamiltonian", false)) {
    h = Hamiltonian::random_hermitian(n, rng);
  } else {
    if (n != 1) throw MalformedInput("give a hamiltonian or set random_hamiltonian for n_qubits > 1");
    h = Hamiltonian::pauli_x();
  }
  const QuantumState psi0 = config.contains("psi0") ? quantum_state_from_json(config.at("psi0"))
                                                    : QuantumState::basis(h.n_qubits(), 0);
  SchrodingerOptions options;
  options.epsilon = config.value("epsilon", 1e-9);
  options.precision = config.value("precision", 32);
  const auto mode = config.value("mode", std::string("restart"));
  if (mode == "restart") options.mode = SchrodingerMode::kRestart;
  else if (mode == "step") options.mode = SchrodingerMode::kStep;
  else throw MalformedInput("mode must be restart or step");

  std::vector<double> times;
  if (config.contains("times")) {
    times = config.at("times").get<std::vector<double>>();
  } else {
    const auto steps = config.value("steps", std::int64_t{4});
    const double horizon = config.value("horizon", std::numbers::pi / 2);
    for (std::int64_t j = 1; j <= steps; ++j)
      times.push_back(horizon * static_cast<double>(j) / static_cast<double>(steps));
  }
  if (options.mode == SchrodingerMode::kStep)
    options.step_tau = times.empty() ? 0.0 : times.front();
  return to_json(run_schrodinger_scenario(h, psi0, times, options, seed));
}

}  // namespace

std::string artifact_version() { return RELMACHINE_VERSION; }

std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

json run_scenario(const json& config) {
  try {
    if (!config.is_object()) throw MalformedInput("scenario config must be a JSON object");
    const auto name = config.at("scenario").get<std::string>();
    if (!config.contains("seed")) throw MalformedInput("scenario config needs a seed");
    json result;
    if (name == "simtime") result = timing_games(config, false);
    else if (name == "psimtime") result = timing_games(config, true);
    else if (name == "measure") result = measure(config);
    else if (name == "spoof-accept") result = spoof(config);
    else if (name == "oracle-benchmark") result = benchmark(config);
    else if (name == "schrodinger") result = schrodinger(config);
    else throw MalformedInput("unknown scenario '" + name + "'");

    json report{{"scenario", name}, {"config", config}, {"result", result}};
    report["environment"] = {{"artifact_version", artifact_version()},
                             {"config_hash", config_hash(config)},
                             {"generated_at", utc_now()}};
    return report;
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("scenario config: ") + e.what());
  }
}

json strip_timestamp(json report) {
  if (report.contains("environment")) report["environment"].erase("generated_at");
  return report;
}

}  // namespace relmachine
