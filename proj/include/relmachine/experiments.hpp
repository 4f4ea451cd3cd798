// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relmachine/machine.hpp"
#include "relmachine/metrics.hpp"
#include "relmachine/quantum.hpp"
#include "relmachine/relative_model.hpp"
#include "relmachine/schrodinger_oracle.hpp"
#include "relmachine/stats.hpp"

namespace relmachine {

struct TrialRecord {
  std::int64_t trial = 0;
  int hidden = 0;  ///< the adversary's secret bit
  int guess = 0;
  bool correct = false;
  bool guard_abort = false;
  bool runtime_error = false;
};

struct StatReport {
  std::string name;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double accuracy = 0.0;
  WilsonInterval interval;
  std::int64_t guard_aborts = 0;
  std::int64_t runtime_errors = 0;
  /// FNV-1a over the per-trial records; the log itself is kept in `log`.
  std::string trial_log_digest;
  std::vector<TrialRecord> log;

  bool contains_chance() const noexcept { return interval.contains(0.5); }
};

/// A local machine trying to compute something it cannot see. Its guess is
/// the symbol left in guess_cell ('1' = the adversary's second alternative).
struct Detector {
  std::string name;
  MachineSpec machine;
  std::int64_t guess_cell = 0;
  std::function<std::string(Rng&)> input;
  std::int64_t max_local_steps = 64;
  std::int64_t local_width = 64;
  bool needs_tell_pad = false;  ///< control arm: asks the global machine
  bool guard_arm = false;       ///< expected to trip the access guard
};

/// constant-0, constant-1, majority-history, timing-probe, scrap-peek,
/// tell-k (control), fair-coin.
Detector make_detector(const std::string& name);
std::vector<std::string> detector_names();
/// Detectors whose score must be at chance in the timing games.
std::vector<std::string> chance_detector_names();

struct PadPair {
  std::int64_t a = 1;
  std::int64_t b = 9;
};

/// Binary pad game on the micro schedule. PreconditionError for a == b.
StatReport run_simtime_game(const Detector& detector, PadPair pads, std::int64_t trials,
                            std::uint64_t seed, bool keep_log = false);

struct PSimtimeReport {
  StatReport stats;
  ChiSquare independence;
};

/// Same protocol; the detector machine may have probabilistic rows. Adds a
/// chi-square test between the pad choice and the final S'.
PSimtimeReport run_psimtime_game(const Detector& detector, PadPair pads, std::int64_t trials,
                                 std::uint64_t seed, bool keep_log = false);

// --- MEASURE --------------------------------------------------------------

struct AffineMap {
  double a = 2.0;
  double b = 0.0;

  double operator()(double x) const noexcept { return a * x + b; }
};

enum class ApproxKind {
  kMidpoint,  ///< f(midpoint of the uncertainty set)
  kOffset,    ///< f(x) + offset
  kExact,     ///< f(x) itself (no approximation)
};

struct MeasureConfig {
  AffineMap f;
  ApproxKind approx = ApproxKind::kMidpoint;
  double offset = 1.0;
  int k_bits = 8;
  std::string detector = "interval";  ///< interval | point | constant
};

struct MeasureReport {
  StatReport stats;
  std::int64_t approx_trials = 0;
  std::int64_t approx_correct = 0;
  double approx_accuracy = 0.0;
  std::int64_t envelope_violations = 0;
};

inline constexpr int kMeasureGridBits = 24;

MeasureReport run_measure_game(const MeasureConfig& config, std::int64_t trials, std::uint64_t seed,
                               bool keep_log = false);

// --- spoof-accept -----------------------------------------------------------

struct SpoofReport {
  bool found = false;
  std::string candidate;
  std::int64_t candidates_tried = 0;
  std::int64_t search_steps = 0;
  std::int64_t install_local_steps = 0;
  bool accepted = false;
  std::int64_t local_steps_to_accept = 0;
  std::int64_t global_steps_total = 0;
  double global_per_local = 0.0;
  /// Brute force over every candidate with a plain TM run.
  std::vector<std::string> accepting_candidates;
  bool all_candidates_halt = true;
};

SpoofReport run_spoof_accept_scenario(const MachineSpec& local_spec, std::int64_t horizon,
                                      std::int64_t candidate_bound, std::int64_t cells,
                                      std::uint64_t seed, std::int64_t local_width = 16);

// --- oracle benchmark -------------------------------------------------------

/// One query per size; sizes are argument bits for parity/identity and qubits
/// for schrodinger.
std::vector<ComplexityProfile> run_oracle_benchmark(const std::vector<std::string>& oracle_ids,
                                                    const std::vector<std::int64_t>& sizes,
                                                    std::uint64_t seed);

// --- Schrodinger scenario ---------------------------------------------------

struct SchrodingerStep {
  std::int64_t tau = 0;        ///< local step index (1-based)
  double time = 0.0;           ///< evolution time reached
  std::int64_t gamma_t = 0;
  Rational gamma_g;
  double deviation = 0.0;      ///< vs evolve_exact
  double drift = 0.0;          ///< | ||psi|| - 1 |
};

struct SchrodingerReport {
  std::vector<SchrodingerStep> steps;
  std::int64_t local_steps = 0;
  double max_deviation = 0.0;
  double max_drift = 0.0;
  double tolerance = 0.0;
  QuantumState final_state;
};

SchrodingerReport run_schrodinger_scenario(const Hamiltonian& h, const QuantumState& psi0,
                                           const std::vector<double>& times,
                                           const SchrodingerOptions& options, std::uint64_t seed);

nlohmann::json to_json(const StatReport& r);
nlohmann::json to_json(const SpoofReport& r);
nlohmann::json to_json(const SchrodingerReport& r);

}  // namespace relmachine
