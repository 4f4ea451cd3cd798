// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

// relmachine: simulate | scenario | metrics | quantum-check

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "relmachine/error.hpp"
#include "relmachine/kernels.hpp"
#include "relmachine/machine_io.hpp"
#include "relmachine/metrics.hpp"
#include "relmachine/oracle.hpp"
#include "relmachine/quantum.hpp"
#include "relmachine/quantum_io.hpp"
#include "relmachine/relative_model.hpp"
#include "relmachine/scenario.hpp"
#include "relmachine/schrodinger_oracle.hpp"
#include "relmachine/trace.hpp"

namespace rm = relmachine;
using nlohmann::json;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  double epsilon = 1e-9;
  int precision = 32;
  std::string snapshots = "full";
  std::string out;
  std::string format = "json";
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("relmachine");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RELMACHINE_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

/// Writes to --out, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw rm::MalformedInput("cannot write " + path);
  f << text;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const rm::GuardViolation*>(&e)) return static_cast<int>(rm::ExitCode::kGuard);
  if (dynamic_cast<const rm::MalformedInput*>(&e) || dynamic_cast<const rm::LayoutError*>(&e) ||
      dynamic_cast<const rm::MissingData*>(&e))
    return static_cast<int>(rm::ExitCode::kMalformed);
  return static_cast<int>(rm::ExitCode::kRuntime);
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string machine;
  std::string input;
  std::int64_t max_steps = 100;
  std::int64_t local_width = 64;
  std::int64_t head = 0;
  std::string schedule = "micro";
  std::string padding = "const:0";
};

int cmd_simulate(const SimulateArgs& a, const Common& c) {
  const rm::MachineSpec spec = rm::load_machine_file(a.machine);
  if (spec.is_probabilistic() && !c.seed)
    throw rm::MalformedInput("machine has probabilistic rows: pass --seed");
  rm::GlobalConfig config;
  config.schedule = rm::schedule_from_name(a.schedule);
  config.padding = rm::Padding::parse(a.padding);
  config.snapshots = rm::snapshot_mode_from_name(c.snapshots);
  const std::int64_t width = std::max<std::int64_t>(a.local_width, static_cast<std::int64_t>(a.input.size()));
  rm::RelativeModel model(spec, a.input, rm::RelativeModel::auto_layout(spec, width),
                          {rm::oracles::parity(), rm::oracles::identity()}, c.seed.value_or(0), config, a.head);

  int code = 0;
  std::string outcome;
  try {
    outcome = std::string(rm::outcome_name(model.run(a.max_steps)));
  } catch (const rm::Error& e) {
    spdlog::error("{}", e.what());
    std::cerr << "relmachine: " << e.what() << '\n';
    code = exit_code_for(e);
    outcome = "error";
  }
  rm::TraceFooter footer{model.t(), model.tau(), model.tau_tilde(), outcome, model.local_string()};
  std::ostringstream trace;
  rm::write_trace(trace, model.trace(), footer);
  emit(c.out, trace.str());
  if (!c.out.empty() && c.out != "-") {
    json summary{{"outcome", outcome},
                 {"t", model.t()},
                 {"tau", model.tau()},
                 {"tau_tilde", model.tau_tilde()},
                 {"K", model.trace().K},
                 {"final_local", model.local_string()}};
    std::cout << summary.dump() << '\n';
  }
  return code;
}

// --- scenario -------------------------------------------------------------

int cmd_scenario(const std::string& file, const Common& c) {
  json config = rm::load_json_file(file);
  if (!config.is_object()) throw rm::MalformedInput("scenario config must be a JSON object");
  if (c.seed) config["seed"] = *c.seed;
  if (c.trials) config["trials"] = *c.trials;
  std::string out = c.out;
  if (out.empty() && config.contains("output")) {
    out = config.at("output").get<std::string>();
    config.erase("output");
  } else {
    config.erase("output");
  }
  const json report = rm::run_scenario(config);
  emit(out, report.dump(2) + "\n");
  return 0;
}

// --- metrics --------------------------------------------------------------

int cmd_metrics(const std::string& file, bool time_only, const Common& c) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw rm::MalformedInput("cannot open " + file);
  const rm::Trace trace = rm::read_trace(in);
  if (trace.K.empty()) throw rm::MalformedInput("trace holds no completed local updates");
  if (!time_only && trace.mode != rm::SnapshotMode::kFull)
    throw rm::MalformedInput(
        "space metrics need a full-mode trace; rerun simulate with --snapshots full or pass --time-only");
  const rm::MetricsReport report = rm::metrics_report(trace, time_only);
  if (c.format == "csv") emit(c.out, rm::to_csv(report));
  else if (c.format == "json") emit(c.out, rm::to_json(report).dump(2) + "\n");
  else throw rm::MalformedInput("--format must be json or csv");
  return 0;
}

// --- quantum-check --------------------------------------------------------

int cmd_quantum_check(const std::string& hamiltonian, double tau, const std::string& kernels, const Common& c) {
  const rm::Hamiltonian h =
      hamiltonian.empty() ? rm::Hamiltonian::pauli_x() : rm::hamiltonian_from_json(rm::load_json_file(hamiltonian));
  const auto herm = rm::check_hermitian(h);
  if (!herm.ok) throw rm::MalformedInput("hamiltonian is not Hermitian");
  const rm::QuantumState psi0 = rm::QuantumState::basis(h.n_qubits(), 0);
  const rm::KernelTable& table = rm::select_kernels(kernels);
  const int order = rm::taylor_order_for(h, tau, c.epsilon);
  const rm::QuantumState approx = rm::evolve(psi0, h, {tau, c.epsilon, std::nullopt}, table);
  const rm::QuantumState exact = rm::evolve_exact(psi0, h, tau);
  const double deviation = rm::distance(approx, exact);
  const double drift = std::abs(rm::norm(approx) - 1.0);
  const rm::QuantumState decoded = rm::decode_state(rm::encode_state(approx, c.precision), 0, h.n_qubits(), c.precision);
  double codec_error = 0.0;
  for (std::size_t i = 0; i < approx.dim(); ++i)
    codec_error = std::max({codec_error, std::abs(approx[i].real() - decoded[i].real()),
                            std::abs(approx[i].imag() - decoded[i].imag())});
  json report{{"n_qubits", h.n_qubits()},
              {"dimension", h.dim()},
              {"matrix_entries", h.dim() * h.dim()},
              {"tau", tau},
              {"epsilon", c.epsilon},
              {"truncation_order", order},
              {"kernels", table.name},
              {"evolved", rm::to_json(approx)},
              {"exact", rm::to_json(exact)},
              {"deviation", deviation},
              {"unitarity_drift", drift},
              {"precision", c.precision},
              {"codec_max_error", codec_error},
              {"within_epsilon", deviation <= c.epsilon}};
  emit(c.out, report.dump(2) + "\n");
  return deviation <= c.epsilon ? 0 : static_cast<int>(rm::ExitCode::kRuntime);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"relmachine: nested simulation of an encoded local machine"};
  app.set_version_flag("--version", rm::artifact_version());
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "random seed (u64)");
    sub->add_option("--trials", common.trials, "number of trials");
    sub->add_option("--epsilon", common.epsilon, "evolution error bound");
    sub->add_option("--precision", common.precision, "fixed-point bits per amplitude component");
    sub->add_option("--snapshots", common.snapshots, "full|summary")->check(CLI::IsMember({"full", "summary"}));
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_option("--format", common.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a local machine inside the relative model");
  simulate->add_option("machine", sim.machine, "machine definition JSON")->required();
  simulate->add_option("--input", sim.input, "initial S' contents over {0,1,_}");
  simulate->add_option("--max-steps", sim.max_steps, "local step budget");
  simulate->add_option("--local-width", sim.local_width, "cells in S'");
  simulate->add_option("--head", sim.head, "initial head (local coordinates)");
  simulate->add_option("--schedule", sim.schedule, "micro|fused")->check(CLI::IsMember({"micro", "fused"}));
  simulate->add_option("--padding", sim.padding, "const:N | uniform:A:B | choice:A:B | seq:A,B,...");
  add_common(simulate);

  std::string scenario_file;
  auto* scenario = app.add_subcommand("scenario", "run a scenario config");
  scenario->add_option("config", scenario_file, "scenario JSON")->required();
  add_common(scenario);

  std::string trace_file;
  bool time_only = false;
  auto* metrics = app.add_subcommand("metrics", "Lorentz factors from a trace");
  metrics->add_option("trace", trace_file, "trace JSON-lines file")->required();
  metrics->add_flag("--time-only", time_only, "skip space metrics (summary traces)");
  add_common(metrics);

  std::string hamiltonian;
  double tau = std::numbers::pi / 2;
  std::string kernels = "auto";
  auto* quantum = app.add_subcommand("quantum-check", "truncated vs exact evolution");
  quantum->add_option("--hamiltonian", hamiltonian, "hamiltonian JSON (default Pauli-X)");
  quantum->add_option("--tau", tau, "evolution time");
  quantum->add_option("--kernels", kernels, "scalar|avx2|auto")->check(CLI::IsMember({"scalar", "avx2", "auto"}));
  add_common(quantum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(rm::ExitCode::kMalformed);
  }

  try {
    if (*simulate) return cmd_simulate(sim, common);
    if (*scenario) return cmd_scenario(scenario_file, common);
    if (*metrics) return cmd_metrics(trace_file, time_only, common);
    if (*quantum) return cmd_quantum_check(hamiltonian, tau, kernels, common);
  } catch (const std::exception& e) {
    std::cerr << "relmachine: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
