// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relmachine/trace.hpp"

namespace relmachine {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// k_{tau+1} - k_tau, for 0 <= tau < |K| (k_0 = 0).
std::int64_t lorentz_time(const Trace& trace, std::int64_t tau);

/// (g_{tau+1} - g_tau) / output_length, g_0 = 0. PreconditionError for a
/// zero output length or tau outside the recorded updates.
Rational lorentz_space(const Trace& trace, std::int64_t tau, std::int64_t output_length);

/// g_tau recounted from the step records of (k_{tau-1}, k_tau]: distinct
/// scrap cells read or written plus distinct local cells written. Throws
/// MissingData for summary-mode traces.
std::int64_t space_used(const Trace& trace, std::int64_t tau);

struct ProfileRow {
  std::int64_t n = 0;
  std::int64_t local_steps = 0;
  std::int64_t global_steps = 0;
  std::int64_t scrap_cells = 0;
  std::int64_t output_cells = 0;
};

struct ComplexityProfile {
  std::string oracle;
  std::vector<ProfileRow> rows;
  /// Least-squares slope of log(global_steps) against log(n); empty below two sizes.
  std::optional<double> slope_estimate;

  bool local_constant() const noexcept;
  bool global_strictly_increasing() const noexcept;
};

struct SizedTrace {
  std::int64_t n = 0;
  const Trace* trace = nullptr;
};

/// One row per run; each run is expected to hold exactly the queries of interest.
ComplexityProfile complexity_profile(const std::string& oracle, const std::vector<SizedTrace>& runs);

std::optional<double> log_log_slope(const std::vector<std::pair<double, double>>& points);

struct MetricsRow {
  std::int64_t tau = 0;
  std::int64_t k_tau = 0;
  std::int64_t gamma_t = 0;
  std::optional<std::int64_t> g_tau;
  std::optional<Rational> gamma_g;
};

struct MetricsReport {
  std::vector<MetricsRow> per_tau;
  std::optional<ComplexityProfile> profile;
};

/// Rows for tau = 1 .. |K|-1. Space columns need a full-mode trace unless
/// time_only is set (MissingData otherwise).
MetricsReport metrics_report(const Trace& trace, bool time_only);

nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const ComplexityProfile& profile);
std::string to_csv(const MetricsReport& report);
std::string to_csv(const ComplexityProfile& profile);

}  // namespace relmachine
