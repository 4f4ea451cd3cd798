// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "relmachine/corpus.hpp"
#include "relmachine/error.hpp"
#include "relmachine/experiments.hpp"
#include "relmachine/machine_io.hpp"
#include "relmachine/metrics.hpp"
#include "relmachine/quantum.hpp"
#include "relmachine/relative_model.hpp"
#include "relmachine/scenario.hpp"

using namespace relmachine;
namespace fs = std::filesystem;

namespace {

struct Outcome_ {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome_()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome_ o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
  if (!in_time) o.detail += " (over time limit)";
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[64];
  if (limit_seconds > 0) std::snprintf(timing, sizeof timing, "[%.2f s / %.0f s]", secs, limit_seconds);
  else std::snprintf(timing, sizeof timing, "[%.2f s]", secs);
  std::printf("%s %2d %s: %s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), timing);
  std::fflush(stdout);
}

RelativeModel model(const MachineSpec& spec, const std::string& input, GlobalConfig config, std::uint64_t seed,
                    std::int64_t width, std::vector<OracleBinding> bound = {oracles::parity(), oracles::identity()}) {
  return RelativeModel(spec, input, RelativeModel::auto_layout(spec, width), std::move(bound), seed, std::move(config));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- 1 --------------------------------------------------------------------

Outcome_ worked_example() {
  GlobalConfig config{Schedule::kFused, Padding::sequence({0, 8}), SnapshotMode::kFull};
  auto m = model(corpus::unary_increment(), "111", config, 1, 16);
  std::int64_t tau_at_9 = -1, tau_at_10 = -1;
  while (m.t() < 10) {
    m.global_step();
    if (m.t() == 9) tau_at_9 = m.tau();
    if (m.t() == 10) tau_at_10 = m.tau();
  }
  const auto& K = m.trace().K;
  const bool ok = K.size() >= 2 && K[0] == 1 && K[1] == 10 && lorentz_time(m.trace(), 1) == 9 && tau_at_9 == 1 &&
                  tau_at_10 == 2;
  std::ostringstream d;
  d << "K=[" << (K.size() > 0 ? K[0] : -1) << "," << (K.size() > 1 ? K[1] : -1) << "] gamma_k1="
    << (K.size() > 1 ? lorentz_time(m.trace(), 1) : -1) << " tau(t=9)=" << tau_at_9 << " tau(t=10)=" << tau_at_10;
  return {ok, d.str()};
}

// --- 2 --------------------------------------------------------------------

Outcome_ clock_invariants() {
  const Padding pads[] = {Padding::constant(0), Padding::constant(9), Padding::uniform(0, 20),
                          Padding::choice(1, 9), Padding::sequence({0, 8, 3})};
  std::int64_t machines = 0, updates = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    corpus::RandomMachineOptions opt;
    opt.random_row_probability = seed % 3 == 0 ? 0.3 : 0.0;
    opt.query_probability = seed % 4 == 1 ? 0.2 : 0.0;
    opt.local_width = 64;
    const MachineSpec spec = corpus::random_machine(rng, opt);
    const GlobalConfig config{seed % 2 ? Schedule::kFused : Schedule::kMicro, pads[seed % 5], SnapshotMode::kSummary};
    auto m = model(spec, "", config, seed, 256);
    try {
      m.run(100);
    } catch (const Error&) {
      // guard stops still leave a valid clock record up to the stop
    }
    ++machines;
    const Trace& tr = m.trace();
    if (static_cast<std::int64_t>(tr.K.size()) != m.tau()) ++violations;
    for (std::size_t i = 0; i < tr.K.size(); ++i) {
      ++updates;
      const auto tau = static_cast<std::int64_t>(i);
      if (i > 0 && tr.K[i] <= tr.K[i - 1]) ++violations;
      if (tr.k(tau + 1) - tr.k(tau) != tr.runtime_set_sizes[i] + 1) ++violations;
    }
  }
  return {violations == 0 && machines >= 50,
          std::to_string(machines) + " machines, " + std::to_string(updates) + " updates, " +
              std::to_string(violations) + " violations"};
}

// --- 3 --------------------------------------------------------------------

Outcome_ relative_oracle() {
  const std::vector<std::int64_t> sizes{1, 2, 3, 4};
  const auto profiles = run_oracle_benchmark({"parity", "identity", "schrodinger"}, sizes, 1);
  bool ok = profiles.size() == 3;
  std::ostringstream d;
  for (const auto& p : profiles) {
    bool exact_output = true;
    for (const auto& row : p.rows) {
      std::int64_t expected = 0;
      if (p.oracle == "parity") expected = 1;
      else if (p.oracle == "identity") expected = row.n;
      else expected = 2 * (std::int64_t{1} << row.n) * 16;
      exact_output = exact_output && row.output_cells == expected;
    }
    const bool row_ok = p.rows.size() == sizes.size() && p.local_constant() && p.global_strictly_increasing() && exact_output;
    ok = ok && row_ok;
    d << p.oracle << " global=[";
    for (std::size_t i = 0; i < p.rows.size(); ++i) d << (i ? "," : "") << p.rows[i].global_steps;
    d << "] ";
  }
  d << "local=1 per query";
  return {ok, d.str()};
}

// --- 4, 5 -----------------------------------------------------------------

struct Triple {
  Hamiltonian h;
  QuantumState psi;
  double tau;
};

std::vector<Triple> triples() {
  std::vector<Triple> out;
  Rng rng(2026);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    Hamiltonian h = Hamiltonian::random_hermitian(n, rng);
    QuantumState psi = QuantumState::random(n, rng);
    out.push_back({std::move(h), std::move(psi), rng.uniform01()});
  }
  return out;
}

Outcome_ quantum_accuracy() {
  const double eps = 1e-9;
  double worst = 0.0, drift = 0.0;
  for (const auto& t : triples()) {
    const QuantumState a = evolve(t.psi, t.h, {t.tau, eps, std::nullopt});
    worst = std::max(worst, distance(a, evolve_exact(t.psi, t.h, t.tau)));
    drift = std::max(drift, std::abs(norm(a) - 1.0));
  }
  const QuantumState x = evolve(QuantumState::basis(1, 0), Hamiltonian::pauli_x(), {std::numbers::pi / 2, eps, std::nullopt});
  const double pauli = distance(x, QuantumState(1, {0.0, Complex(0, -1)}));
  const bool ok = worst <= eps && drift <= eps + 1e-12 && pauli <= eps;
  return {ok, "max deviation " + fmt(worst) + ", max drift " + fmt(drift) + ", pauli-x error " + fmt(pauli) +
                  ", kernels " + active_kernels().name};
}

Outcome_ quantum_algebra() {
  const double eps = 1e-9;
  const double bound = 2 * eps + 1e-10;
  double semigroup = 0.0, linearity = 0.0;
  Rng rng(99);
  for (const auto& t : triples()) {
    const double t1 = t.tau * rng.uniform01();
    const double t2 = t.tau - t1;
    const QuantumState whole = evolve(t.psi, t.h, {t.tau, eps, std::nullopt});
    const QuantumState split = evolve(evolve(t.psi, t.h, {t1, eps, std::nullopt}), t.h, {t2, eps, std::nullopt});
    semigroup = std::max(semigroup, distance(whole, split));

    const QuantumState phi = QuantumState::random(t.psi.n_qubits(), rng);
    const double theta = 2 * std::numbers::pi * rng.uniform01();
    const Complex a = std::polar(std::cos(theta), rng.uniform01());
    const Complex b = std::polar(std::sin(theta), rng.uniform01());
    std::vector<Complex> mix(t.psi.dim());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * t.psi[i] + b * phi[i];
    const QuantumState em = evolve(QuantumState(t.psi.n_qubits(), mix), t.h, {t.tau, eps, std::nullopt});
    const QuantumState ea = evolve(t.psi, t.h, {t.tau, eps, std::nullopt});
    const QuantumState eb = evolve(phi, t.h, {t.tau, eps, std::nullopt});
    double diff = 0.0;
    for (std::size_t i = 0; i < mix.size(); ++i) diff += std::norm(em[i] - (a * ea[i] + b * eb[i]));
    linearity = std::max(linearity, std::sqrt(diff));
  }
  return {semigroup <= bound && linearity <= bound,
          "semigroup " + fmt(semigroup) + ", linearity " + fmt(linearity) + ", bound " + fmt(bound)};
}

// --- 6 --------------------------------------------------------------------

Outcome_ timing_games() {
  const std::int64_t trials = 10000;
  bool ok = true;
  std::ostringstream d;
  for (const auto& name : chance_detector_names()) {
    const auto r = run_simtime_game(make_detector(name), {1, 9}, trials, 42);
    const bool pass = r.contains_chance() && r.guard_aborts == 0 && r.runtime_errors == 0;
    ok = ok && pass;
    d << name << "=" << fmt(r.accuracy) << (pass ? "" : "!") << " ";
  }
  const auto coin = run_psimtime_game(make_detector("fair-coin"), {1, 9}, trials, 42);
  ok = ok && coin.stats.contains_chance();
  d << "psimtime(fair-coin)=" << fmt(coin.stats.accuracy) << " p=" << fmt(coin.independence.p_value) << " ";
  const auto peek = run_simtime_game(make_detector("scrap-peek"), {1, 9}, trials, 42);
  ok = ok && peek.guard_aborts == trials;
  d << "scrap-peek guard aborts=" << peek.guard_aborts << " ";
  const auto tell = run_simtime_game(make_detector("tell-k"), {1, 9}, trials, 42);
  ok = ok && tell.accuracy == 1.0;
  d << "control=" << fmt(tell.accuracy);
  return {ok, d.str()};
}

// --- 7 --------------------------------------------------------------------

Outcome_ measure_game() {
  MeasureConfig inside;
  const auto in = run_measure_game(inside, 10000, 42);
  MeasureConfig outside;
  outside.approx = ApproxKind::kOffset;
  outside.offset = 1.0;
  const auto out = run_measure_game(outside, 10000, 42);
  const bool ok = in.stats.contains_chance() && in.envelope_violations == 0 && out.approx_accuracy >= 0.99;
  return {ok, "envelope: accuracy " + fmt(in.stats.accuracy) + " CI [" + fmt(in.stats.interval.low) + ", " +
                  fmt(in.stats.interval.high) + "]; out of envelope: accuracy on approximated trials " +
                  fmt(out.approx_accuracy)};
}

// --- 8 --------------------------------------------------------------------

Outcome_ spoof() {
  const std::int64_t horizon = 16;
  const auto r = run_spoof_accept_scenario(corpus::equality_checker(), horizon, 8, 3, 1);
  const bool confirmed =
      std::find(r.accepting_candidates.begin(), r.accepting_candidates.end(), r.candidate) != r.accepting_candidates.end();
  const bool ok = r.found && confirmed && r.install_local_steps == 1 && r.accepted && r.local_steps_to_accept <= horizon;
  std::ostringstream d;
  d << "candidate " << r.candidate << " after " << r.candidates_tried << " tried, " << r.accepting_candidates.size()
    << "/8 accepting by enumeration, install " << r.install_local_steps << " local step, accepted after "
    << r.local_steps_to_accept << " local steps";
  return {ok, d.str()};
}

// --- 9 --------------------------------------------------------------------

Outcome_ write_order() {
  Rng rng(31);
  std::int64_t updates = 0, permutations = 0, mismatches = 0;
  for (std::int64_t n = 4; updates < 20; ++n) {
    MachineBuilder b("copy");
    b.query("START", "identity", {{0, n}}, {n, 2 * n}, "ACCEPT", Move::kRight);
    std::string input;
    for (std::int64_t i = 0; i < n; ++i) input.push_back(rng.coin() ? '1' : '0');
    auto m = model(b.build(), input, {}, 1, 2 * n + 1);
    m.run(1);
    const Trace& tr = m.trace();
    if (tr.K.size() != 1 || !distinct_write_indices(tr, 0)) continue;
    ++updates;
    std::vector<std::size_t> perm(tr.write_ops[0].size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 100; ++k) {
      for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      ++permutations;
      if (!(replay_writes_permuted(tr, 0, perm) == tr.local_states[1])) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(updates) + " updates, " + std::to_string(permutations) +
                               " permutations, " + std::to_string(mismatches) + " mismatches"};
}

// --- 10 -------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs the CLI with stdout captured; returns {exit code, stdout}.
std::pair<int, std::string> cli(const std::string& args, const fs::path& capture) {
  const std::string cmd = std::string("\"") + RELMACHINE_CLI + "\" " + args + " >\"" + capture.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(capture)};
}

std::string without_timestamp(const std::string& text) {
  try {
    return strip_timestamp(nlohmann::json::parse(text)).dump();
  } catch (const nlohmann::json::exception&) {
    return text;
  }
}

Outcome_ determinism() {
  const fs::path dir = fs::temp_directory_path() / ("relmachine-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path examples = RELMACHINE_EXAMPLES;
  {
    std::ofstream(dir / "coin.json") << to_json(corpus::fair_coin()).dump(2);
    std::ofstream(dir / "unary.json") << to_json(corpus::unary_increment()).dump(2);
  }
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  const std::vector<std::string> commands{
      "simulate " + q(dir / "coin.json") + " --seed 5 --padding uniform:0:50",
      "simulate " + q(dir / "unary.json") + " --input 1111 --schedule fused --padding choice:1:9 --seed 3",
      "scenario " + q(examples / "simtime.json") + " --trials 2000",
      "scenario " + q(examples / "psimtime.json") + " --trials 2000",
      "scenario " + q(examples / "measure.json") + " --trials 2000",
      "scenario " + q(examples / "measure_offset.json") + " --trials 2000",
      "scenario " + q(examples / "spoof_accept.json"),
      "scenario " + q(examples / "oracle_benchmark.json"),
      "scenario " + q(examples / "schrodinger.json"),
      "quantum-check --hamiltonian " + q(examples / "pauli_x.json"),
  };
  std::int64_t diffs = 0, failed = 0;
  for (const auto& c : commands) {
    const auto a = cli(c, dir / "a.out");
    const auto b = cli(c, dir / "b.out");
    if (a.first != 0 || b.first != 0 || a.second.empty()) ++failed;
    if (without_timestamp(a.second) != without_timestamp(b.second)) ++diffs;
  }
  // metrics over a recorded trace
  cli("simulate " + q(dir / "unary.json") + " --input 111 --padding uniform:0:9 --seed 8 --out " + q(dir / "t.jsonl"),
      dir / "summary.out");
  for (const std::string fmt_flag : {"json", "csv"}) {
    const auto a = cli("metrics " + q(dir / "t.jsonl") + " --format " + fmt_flag, dir / "a.out");
    const auto b = cli("metrics " + q(dir / "t.jsonl") + " --format " + fmt_flag, dir / "b.out");
    if (a.first != 0 || b.first != 0) ++failed;
    if (a.second != b.second) ++diffs;
  }
  fs::remove_all(dir);
  return {diffs == 0 && failed == 0, std::to_string(commands.size() + 2) + " commands run twice, " +
                                         std::to_string(diffs) + " diffs, " + std::to_string(failed) + " failed runs"};
}

}  // namespace

int main() {
  criterion(1, "worked example", 1, worked_example);
  criterion(2, "clock and trace invariants", 60, clock_invariants);
  criterion(3, "relative oracle cost", 60, relative_oracle);
  criterion(4, "quantum oracle accuracy", 30, quantum_accuracy);
  criterion(5, "semigroup and linearity", 30, quantum_algebra);
  criterion(6, "SIMTIME/pSIMTIME games", 300, timing_games);
  criterion(7, "MEASURE game", 300, measure_game);
  criterion(8, "spoof-accept", 1, spoof);
  criterion(9, "write-order invariance", 60, write_order);
  criterion(10, "determinism", 0, determinism);
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
