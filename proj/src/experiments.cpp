// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/experiments.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <spdlog/spdlog.h>

#include "relmachine/corpus.hpp"
#include "relmachine/error.hpp"

namespace relmachine {
namespace {

using nlohmann::json;

constexpr std::int64_t kMicroBaseCost = 4;

std::string random_bits(Rng& rng, std::int64_t n) {
  std::string s;
  for (std::int64_t i = 0; i < n; ++i) s.push_back(rng.coin() ? '1' : '0');
  return s;
}

MachineSpec majority_machine(int w) {
  MachineBuilder b("majority-history");
  auto name = [](int ones, int zeros) {
    return ones + zeros == 0 ? std::string("START") : "C" + std::to_string(ones) + "_" + std::to_string(zeros);
  };
  for (int seen = 0; seen <= w; ++seen) {
    for (int ones = 0; ones <= seen; ++ones) {
      const int zeros = seen - ones;
      if (seen < w) {
        b.on(name(ones, zeros), '1', '1', name(ones + 1, zeros), Move::kRight);
        b.on(name(ones, zeros), '0', '0', name(ones, zeros + 1), Move::kRight);
      } else {
        b.on(name(ones, zeros), kBlank, ones > zeros ? '1' : '0', "ACCEPT", Move::kRight);
      }
    }
  }
  return b.build();
}

MachineSpec timing_probe_machine(int ticks) {
  MachineBuilder b("timing-probe");
  auto name = [](int i) { return i == 0 ? std::string("START") : "P" + std::to_string(i); };
  for (int i = 0; i < ticks; ++i)
    for (char c : std::string("01_")) b.on(name(i), c, '1', name(i + 1), Move::kRight);
  for (char c : std::string("01_")) b.on(name(ticks), c, '0', "ACCEPT", Move::kRight);
  return b.build();
}

MachineSpec constant_machine(char bit) {
  MachineBuilder b(std::string("constant-") + bit);
  for (char c : std::string("01_")) b.on("START", c, bit, "ACCEPT", Move::kRight);
  return b.build();
}

MachineSpec scrap_peek_machine() {
  MachineBuilder b("scrap-peek");
  for (char c : std::string("01_")) b.on("START", c, c, "START", Move::kRight);
  return b.build();
}

MachineSpec tell_k_machine() {
  MachineBuilder b("tell-k");
  for (char c : std::string("01_")) b.on("START", c, '0', "ASK", Move::kRight);
  b.query("ASK", "tell-pad", {}, {0, 1}, "ACCEPT", Move::kRight);
  return b.build();
}

std::string digest(const std::vector<TrialRecord>& log) {
  std::string s;
  s.reserve(log.size() * 4);
  for (const auto& r : log) {
    s.push_back(static_cast<char>('0' + r.hidden));
    s.push_back(static_cast<char>('0' + r.guess));
    s.push_back(r.guard_abort ? 'g' : (r.runtime_error ? 'e' : '.'));
    s.push_back(';');
  }
  return hex64(fnv1a(s));
}

void finish(StatReport& report, std::vector<TrialRecord>& log, bool keep_log) {
  report.trials = static_cast<std::int64_t>(log.size());
  report.successes = 0;
  for (const auto& r : log) {
    report.successes += r.correct;
    report.guard_aborts += r.guard_abort;
    report.runtime_errors += r.runtime_error;
  }
  report.accuracy = report.trials ? static_cast<double>(report.successes) / static_cast<double>(report.trials) : 0.0;
  report.interval = wilson_interval(report.successes, report.trials);
  report.trial_log_digest = digest(log);
  if (keep_log) report.log = std::move(log);
}

struct TimingTrial {
  TrialRecord record;
  std::string final_local;
};

TimingTrial timing_trial(const Detector& detector, PadPair pads, std::uint64_t seed, std::int64_t trial) {
  const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
  Rng rng(trial_seed);
  TimingTrial out;
  out.record.trial = trial;
  out.record.hidden = rng.coin() ? 1 : 0;
  const std::int64_t pad = out.record.hidden ? pads.b : pads.a;
  const std::string input = detector.input ? detector.input(rng) : std::string{};

  GlobalConfig config;
  config.schedule = Schedule::kMicro;
  config.padding = Padding::constant(pad);
  config.snapshots = SnapshotMode::kSummary;
  std::vector<OracleBinding> oracles;
  if (detector.needs_tell_pad) oracles.push_back(oracles::tell_pad(kMicroBaseCost + (pads.a + pads.b) / 2));

  const TapeLayout layout = RelativeModel::auto_layout(detector.machine, detector.local_width);
  RelativeModel model(detector.machine, input, layout, std::move(oracles), derive_seed(trial_seed, 7), config);
  try {
    model.run(detector.max_local_steps);
    out.record.guess = model.tape().read(layout.local.begin + detector.guess_cell) == '1' ? 1 : 0;
    out.record.correct = out.record.guess == out.record.hidden;
  } catch (const GuardViolation&) {
    out.record.guard_abort = true;
  } catch (const Error& e) {
    spdlog::debug("trial {} of {}: {}", trial, detector.name, e.what());
    out.record.runtime_error = true;
  }
  out.final_local = model.local_string();
  return out;
}

void check_pads(PadPair pads, std::int64_t trials) {
  if (pads.a == pads.b) throw PreconditionError("degenerate pad pair: both alternatives are identical");
  if (pads.a < 0 || pads.b < 0) throw PreconditionError("pads must be non-negative");
  if (trials < 1) throw PreconditionError("trials must be >= 1");
}

double approx_value(const MeasureConfig& c, double x, const Measurement& m) {
  switch (c.approx) {
    case ApproxKind::kMidpoint: return c.f(0.5 * (m.lower + m.upper));
    case ApproxKind::kOffset: return c.f(x) + c.offset;
    case ApproxKind::kExact: return c.f(x);
  }
  return c.f(x);
}

bool in_image(const AffineMap& f, const Measurement& m, double y) {
  if (f.a == 0.0) return y == f.b;
  const double lo = f.a > 0 ? f(m.lower) : f(m.upper);
  const double hi = f.a > 0 ? f(m.upper) : f(m.lower);
  return f.a > 0 ? (y >= lo && y < hi) : (y > lo && y <= hi);
}

QuantumState decode_output(const Trace& trace, std::size_t index, const Interval& out, int n_qubits,
                           int precision) {
  const TapeState& s = trace.local_states.at(index);
  Bits bits;
  for (std::int64_t i = out.begin; i < out.end; ++i) bits.push_back(s.at(trace.layout.local.begin + i) == '1');
  return decode_state(bits, 0, n_qubits, precision);
}

}  // namespace

// --- detectors ----------------------------------------------------------

std::vector<std::string> detector_names() {
  return {"constant-0", "constant-1", "majority-history", "timing-probe", "scrap-peek", "tell-k", "fair-coin"};
}

std::vector<std::string> chance_detector_names() {
  return {"constant-0", "constant-1", "majority-history", "timing-probe", "fair-coin"};
}

Detector make_detector(const std::string& name) {
  Detector d;
  d.name = name;
  if (name == "constant-0" || name == "constant-1") {
    d.machine = constant_machine(name.back());
  } else if (name == "majority-history") {
    constexpr int kWidth = 5;
    d.machine = majority_machine(kWidth);
    d.guess_cell = kWidth;
    d.input = [](Rng& rng) { return random_bits(rng, kWidth); };
  } else if (name == "timing-probe") {
    constexpr int kTicks = 8;
    d.machine = timing_probe_machine(kTicks);
    d.guess_cell = kTicks;
  } else if (name == "scrap-peek") {
    d.machine = scrap_peek_machine();
    d.local_width = 16;
    d.guard_arm = true;
  } else if (name == "tell-k") {
    d.machine = tell_k_machine();
    d.needs_tell_pad = true;
  } else if (name == "fair-coin") {
    d.machine = corpus::fair_coin();
  } else {
    throw MalformedInput("unknown detector '" + name + "'");
  }
  return d;
}

// --- timing games -------------------------------------------------------

StatReport run_simtime_game(const Detector& detector, PadPair pads, std::int64_t trials,
                            std::uint64_t seed, bool keep_log) {
  check_pads(pads, trials);
  StatReport report;
  report.name = detector.name;
  std::vector<TrialRecord> log;
  log.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t i = 0; i < trials; ++i) log.push_back(timing_trial(detector, pads, seed, i).record);
  finish(report, log, keep_log);
  return report;
}

PSimtimeReport run_psimtime_game(const Detector& detector, PadPair pads, std::int64_t trials,
                                 std::uint64_t seed, bool keep_log) {
  check_pads(pads, trials);
  PSimtimeReport out;
  out.stats.name = detector.name;
  std::vector<TrialRecord> log;
  std::map<std::string, std::array<std::int64_t, 2>> counts;
  for (std::int64_t i = 0; i < trials; ++i) {
    auto t = timing_trial(detector, pads, seed, i);
    counts[t.final_local][static_cast<std::size_t>(t.record.hidden)] += 1;
    log.push_back(t.record);
  }
  std::vector<std::vector<std::int64_t>> table(2);
  for (const auto& [state, c] : counts) {
    table[0].push_back(c[0]);
    table[1].push_back(c[1]);
  }
  out.independence = chi_square_independence(table);
  finish(out.stats, log, keep_log);
  return out;
}

// --- MEASURE ------------------------------------------------------------

MeasureReport run_measure_game(const MeasureConfig& config, std::int64_t trials, std::uint64_t seed,
                               bool keep_log) {
  if (trials < 1) throw PreconditionError("trials must be >= 1");
  if (config.k_bits < 1 || config.k_bits > kMeasureGridBits)
    throw PreconditionError("k_bits must be in [1, 24]");
  if (config.detector != "interval" && config.detector != "point" && config.detector != "constant")
    throw MalformedInput("unknown MEASURE detector '" + config.detector + "'");

  const int k = config.k_bits;
  const std::int64_t width = k + kTauBits;
  MachineBuilder b("measure-reader");
  b.query("START", "delivery", {}, {0, width}, "ACCEPT", Move::kRight);
  const MachineSpec reader = b.build();
  const TapeLayout layout = RelativeModel::auto_layout(reader, width + 1);

  MeasureReport report;
  report.stats.name = "measure-" + config.detector;
  std::vector<TrialRecord> log;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
    Rng rng(trial_seed);
    const double x = std::ldexp(static_cast<double>(rng.below(std::uint64_t{1} << kMeasureGridBits)),
                                -kMeasureGridBits);
    const int hidden = rng.coin() ? 1 : 0;
    const Measurement m = measure_with_uncertainty(x, k);
    const double fx = config.f(x);
    const double ft = approx_value(config, x, m);
    if (!in_image(config.f, m, ft)) ++report.envelope_violations;
    const double y = hidden ? ft : fx;

    Bits delivery;
    const auto xm_int = static_cast<std::uint64_t>(std::ldexp(m.measured, k));
    for (int i = k - 1; i >= 0; --i) delivery.push_back(((xm_int >> i) & 1U) != 0);
    const Bits y_bits = encode_tau(y);
    delivery.insert(delivery.end(), y_bits.begin(), y_bits.end());

    GlobalConfig gc;
    gc.snapshots = SnapshotMode::kSummary;
    RelativeModel model(reader, "", layout, {oracles::constant("delivery", delivery)},
                        derive_seed(trial_seed, 7), gc);
    model.run(1);

    // Detector side: only the final S' is visible.
    const TapeState local = model.local_tape();
    std::uint64_t seen_xm = 0;
    Bits seen_y;
    for (int i = 0; i < k; ++i) seen_xm = (seen_xm << 1) | (local.at(layout.local.begin + i) == '1' ? 1U : 0U);
    for (std::int64_t i = k; i < width; ++i) seen_y.push_back(local.at(layout.local.begin + i) == '1');
    const double x_measured = std::ldexp(static_cast<double>(seen_xm), -k);
    const double y_seen = decode_tau(seen_y, 0);
    const Measurement seen{x_measured, x_measured, x_measured + std::ldexp(1.0, -k)};

    int guess = 0;
    if (config.detector == "interval") guess = in_image(config.f, seen, y_seen) ? 0 : 1;
    else if (config.detector == "point") guess = y_seen == config.f(x_measured) ? 0 : 1;

    TrialRecord r;
    r.trial = trial;
    r.hidden = hidden;
    r.guess = guess;
    r.correct = guess == hidden;
    if (hidden) {
      ++report.approx_trials;
      report.approx_correct += r.correct;
    }
    log.push_back(r);
  }
  finish(report.stats, log, keep_log);
  report.approx_accuracy = report.approx_trials
                               ? static_cast<double>(report.approx_correct) / static_cast<double>(report.approx_trials)
                               : 0.0;
  return report;
}

// --- spoof-accept -------------------------------------------------------

SpoofReport run_spoof_accept_scenario(const MachineSpec& local_spec, std::int64_t horizon,
                                      std::int64_t candidate_bound, std::int64_t cells,
                                      std::uint64_t seed, std::int64_t local_width) {
  SpoofReport report;

  // Independent brute force with the plain TM semantics.
  for (std::int64_t index = 0; index < (std::int64_t{1} << cells); ++index) {
    std::string candidate(static_cast<std::size_t>(cells), '0');
    for (std::int64_t i = 0; i < cells; ++i)
      if ((index >> (cells - 1 - i)) & 1) candidate[static_cast<std::size_t>(i)] = '1';
    Tape tape;
    for (std::int64_t i = 0; i < cells; ++i) tape.apply_write({candidate[static_cast<std::size_t>(i)], i, 0});
    MachineConfig c{0, local_spec.start};
    try {
      const RunResult r = run(local_spec, c, tape, horizon);
      if (r.outcome == Outcome::kAccept) report.accepting_candidates.push_back(candidate);
      if (r.outcome == Outcome::kTimeout) report.all_candidates_halt = false;
    } catch (const UndefinedTransition&) {
    }
  }

  GlobalConfig gc;
  gc.snapshots = SnapshotMode::kSummary;
  RelativeModel model(local_spec, "", RelativeModel::auto_layout(local_spec, local_width), {}, seed, gc);
  const SpoofResult s = model.spoof_accept(horizon, candidate_bound, cells);
  report.found = s.found;
  report.candidate = s.candidate;
  report.candidates_tried = s.candidates_tried;
  report.search_steps = s.search_steps;
  report.install_local_steps = s.local_steps;
  if (s.found) {
    const std::int64_t before = model.tau();
    const Outcome o = model.run(horizon);
    report.accepted = o == Outcome::kAccept;
    report.local_steps_to_accept = model.tau() - before;
  }
  report.global_steps_total = model.t();
  report.global_per_local =
      model.tau() ? static_cast<double>(model.t()) / static_cast<double>(model.tau()) : 0.0;
  return report;
}

// --- oracle benchmark -----------------------------------------------------

std::vector<ComplexityProfile> run_oracle_benchmark(const std::vector<std::string>& oracle_ids,
                                                    const std::vector<std::int64_t>& sizes,
                                                    std::uint64_t seed) {
  std::vector<ComplexityProfile> out;
  for (const auto& id : oracle_ids) {
    std::vector<Trace> traces;
    traces.reserve(sizes.size());
    for (auto n : sizes) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n)));
      GlobalConfig gc;
      gc.snapshots = SnapshotMode::kSummary;
      if (id == "parity" || id == "identity") {
        if (n < 1) throw PreconditionError("benchmark sizes must be >= 1");
        OracleBinding binding = id == "parity" ? oracles::parity() : oracles::identity();
        const std::int64_t len = binding.output_length(n);
        MachineBuilder b(id + "-query");
        b.query("START", id, {{0, n}}, {n, n + len}, "ACCEPT", Move::kRight);
        const MachineSpec spec = b.build();
        RelativeModel model(spec, random_bits(rng, n), RelativeModel::auto_layout(spec, n + len + 1),
                            {std::move(binding)}, seed, gc);
        model.run(1);
        traces.push_back(model.trace());
      } else if (id == "schrodinger") {
        if (n < 1 || n > kMaxQubits) throw PreconditionError("schrodinger sizes are qubit counts in [1, 10]");
        const int q = static_cast<int>(n);
        const Hamiltonian h = Hamiltonian::random_hermitian(q, rng);
        const QuantumState psi = QuantumState::random(q, rng);
        SchrodingerOptions options;
        options.precision = 16;
        const SchrodingerProgram program = schrodinger_program(psi, {0.5}, options);
        RelativeModel model(program.machine, program.input,
                            RelativeModel::auto_layout(program.machine, program.local_width),
                            {schrodinger_oracle_binding(h, options)}, seed, gc);
        model.run(1);
        traces.push_back(model.trace());
      } else {
        throw MalformedInput("unknown oracle '" + id + "'");
      }
    }
    std::vector<SizedTrace> runs;
    for (std::size_t i = 0; i < sizes.size(); ++i) runs.push_back({sizes[i], &traces[i]});
    out.push_back(complexity_profile(id, runs));
  }
  return out;
}

// --- Schrodinger --------------------------------------------------------

SchrodingerReport run_schrodinger_scenario(const Hamiltonian& h, const QuantumState& psi0,
                                           const std::vector<double>& times,
                                           const SchrodingerOptions& options, std::uint64_t seed) {
  if (psi0.dim() != h.dim()) throw PreconditionError("state and hamiltonian dimensions differ");
  const bool restart = options.mode == SchrodingerMode::kRestart;
  const SchrodingerProgram program = schrodinger_program(psi0, times, options);
  GlobalConfig gc;
  gc.snapshots = SnapshotMode::kSummary;
  RelativeModel model(program.machine, program.input,
                      RelativeModel::auto_layout(program.machine, program.local_width),
                      {schrodinger_oracle_binding(h, options)}, seed, gc);
  const auto s = static_cast<std::int64_t>(times.size());
  model.run(s);

  SchrodingerReport report;
  report.local_steps = model.tau();
  const double quantization =
      2.0 * std::sqrt(2.0 * static_cast<double>(h.dim())) * std::ldexp(1.0, -options.precision);
  report.tolerance = restart ? options.epsilon + quantization
                             : static_cast<double>(s) * (options.epsilon + quantization);
  const Trace& trace = model.trace();
  const std::int64_t len = 2 * static_cast<std::int64_t>(h.dim()) * options.precision;
  for (std::int64_t j = 1; j <= report.local_steps; ++j) {
    SchrodingerStep step;
    step.tau = j;
    step.time = restart ? times[static_cast<std::size_t>(j - 1)] : static_cast<double>(j) * options.step_tau;
    step.gamma_t = lorentz_time(trace, j - 1);
    step.gamma_g = lorentz_space(trace, j - 1, len);
    const QuantumState got =
        decode_output(trace, static_cast<std::size_t>(j), program.output, h.n_qubits(), options.precision);
    const QuantumState want = evolve_exact(psi0, h, step.time);
    step.deviation = distance(got, want);
    step.drift = std::abs(norm(got) - 1.0);
    report.max_deviation = std::max(report.max_deviation, step.deviation);
    report.max_drift = std::max(report.max_drift, step.drift);
    report.steps.push_back(step);
    if (j == report.local_steps) report.final_state = got;
  }
  return report;
}

// --- JSON ---------------------------------------------------------------

json to_json(const StatReport& r) {
  json j{{"name", r.name},
         {"trials", r.trials},
         {"successes", r.successes},
         {"accuracy", r.accuracy},
         {"confidence_interval", {r.interval.low, r.interval.high}},
         {"contains_chance", r.contains_chance()},
         {"guard_aborts", r.guard_aborts},
         {"runtime_errors", r.runtime_errors},
         {"trial_log_digest", r.trial_log_digest}};
  if (!r.log.empty()) {
    json log = json::array();
    for (const auto& t : r.log)
      log.push_back({{"trial", t.trial},
                     {"hidden", t.hidden},
                     {"guess", t.guess},
                     {"correct", t.correct},
                     {"guard_abort", t.guard_abort},
                     {"runtime_error", t.runtime_error}});
    j["trial_log"] = log;
  }
  return j;
}

json to_json(const SpoofReport& r) {
  return {{"found", r.found},
          {"candidate", r.candidate},
          {"candidates_tried", r.candidates_tried},
          {"search_global_steps", r.search_steps},
          {"install_local_steps", r.install_local_steps},
          {"accepted", r.accepted},
          {"local_steps_to_accept", r.local_steps_to_accept},
          {"global_steps_total", r.global_steps_total},
          {"global_per_local", r.global_per_local},
          {"accepting_candidates", r.accepting_candidates},
          {"all_candidates_halt", r.all_candidates_halt}};
}

json to_json(const SchrodingerReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"tau", s.tau},
                     {"time", s.time},
                     {"gamma_t", s.gamma_t},
                     {"gamma_g", s.gamma_g.value()},
                     {"deviation", s.deviation},
                     {"drift", s.drift}});
  json final_state = json::array();
  for (const auto& c : r.final_state.amplitudes()) final_state.push_back({c.real(), c.imag()});
  return {{"per_step", steps},
          {"local_steps", r.local_steps},
          {"max_deviation", r.max_deviation},
          {"max_drift", r.max_drift},
          {"tolerance", r.tolerance},
          {"within_tolerance", r.max_deviation <= r.tolerance},
          {"final_state", final_state}};
}

}  // namespace relmachine
