// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/metrics.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "relmachine/error.hpp"

namespace relmachine {

using nlohmann::json;

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw PreconditionError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / (g == 0 ? 1 : g), den / (g == 0 ? 1 : g)};
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::int64_t lorentz_time(const Trace& trace, std::int64_t tau) {
  if (tau < 0 || tau >= static_cast<std::int64_t>(trace.K.size()))
    throw PreconditionError("lorentz_time: tau " + std::to_string(tau) + " needs k_(tau+1)");
  return trace.k(tau + 1) - trace.k(tau);
}

Rational lorentz_space(const Trace& trace, std::int64_t tau, std::int64_t output_length) {
  if (output_length <= 0) throw PreconditionError("lorentz_space: output length must be >= 1");
  if (tau < 0 || tau >= static_cast<std::int64_t>(trace.updates.size()))
    throw PreconditionError("lorentz_space: tau " + std::to_string(tau) + " needs g_(tau+1)");
  return Rational::make(trace.g(tau + 1) - trace.g(tau), output_length);
}

std::int64_t space_used(const Trace& trace, std::int64_t tau) {
  if (trace.mode != SnapshotMode::kFull || (trace.steps.empty() && !trace.K.empty()))
    throw MissingData("space_used needs a full-mode trace (rerun with --snapshots full)");
  if (tau < 1 || tau > static_cast<std::int64_t>(trace.K.size()))
    throw PreconditionError("space_used: tau " + std::to_string(tau) + " not recorded");
  const std::int64_t lo = trace.k(tau - 1);
  const std::int64_t hi = trace.k(tau);
  std::set<std::int64_t> scrap;
  std::set<std::int64_t> local;
  for (const auto& s : trace.steps) {
    if (s.t <= lo || s.t > hi || !s.cell) continue;
    const Region r = trace.layout.classify(*s.cell);
    if (r == Region::kScrap && s.access != Access::kNone) scrap.insert(*s.cell);
    if (r == Region::kLocal && s.access == Access::kWrite) local.insert(*s.cell);
  }
  return static_cast<std::int64_t>(scrap.size() + local.size());
}

bool ComplexityProfile::local_constant() const noexcept {
  for (const auto& r : rows)
    if (r.local_steps != 1) return false;
  return true;
}

bool ComplexityProfile::global_strictly_increasing() const noexcept {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].global_steps <= rows[i - 1].global_steps) return false;
  return true;
}

std::optional<double> log_log_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : points)
    if (x > 0 && y > 0) logs.emplace_back(std::log(x), std::log(y));
  if (logs.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(logs.size());
  my /= static_cast<double>(logs.size());
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : logs) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ComplexityProfile complexity_profile(const std::string& oracle, const std::vector<SizedTrace>& runs) {
  ComplexityProfile p;
  p.oracle = oracle;
  std::vector<std::pair<double, double>> points;
  for (const auto& run : runs) {
    ProfileRow row;
    row.n = run.n;
    row.local_steps = static_cast<std::int64_t>(run.trace->K.size());
    row.global_steps = run.trace->K.empty() ? 0 : run.trace->K.back();
    for (const auto& u : run.trace->updates) {
      row.scrap_cells += u.scrap_cells;
      row.output_cells += u.local_cells_written;
    }
    points.emplace_back(static_cast<double>(row.n), static_cast<double>(row.global_steps));
    p.rows.push_back(row);
  }
  p.slope_estimate = log_log_slope(points);
  return p;
}

MetricsReport metrics_report(const Trace& trace, bool time_only) {
  if (trace.K.empty()) throw MalformedInput("trace holds no completed local updates");
  MetricsReport report;
  for (std::int64_t tau = 1; tau < static_cast<std::int64_t>(trace.K.size()); ++tau) {
    MetricsRow row;
    row.tau = tau;
    row.k_tau = trace.k(tau);
    row.gamma_t = lorentz_time(trace, tau);
    if (!time_only) {
      row.g_tau = space_used(trace, tau);
      const std::int64_t next = space_used(trace, tau + 1);
      const std::int64_t len = std::max<std::int64_t>(1, trace.updates[static_cast<std::size_t>(tau)].output_length);
      row.gamma_g = Rational::make(next - *row.g_tau, len);
    }
    report.per_tau.push_back(row);
  }
  return report;
}

json to_json(const ComplexityProfile& profile) {
  json rows = json::array();
  for (const auto& r : profile.rows)
    rows.push_back({{"n", r.n},
                    {"local", r.local_steps},
                    {"global", r.global_steps},
                    {"scrap", r.scrap_cells},
                    {"output", r.output_cells}});
  return {{"oracle", profile.oracle},
          {"rows", rows},
          {"slope_estimate", profile.slope_estimate ? json(*profile.slope_estimate) : json(nullptr)}};
}

json to_json(const MetricsReport& report) {
  json rows = json::array();
  for (const auto& r : report.per_tau)
    rows.push_back({{"tau", r.tau},
                    {"k_tau", r.k_tau},
                    {"gamma_t", r.gamma_t},
                    {"g_tau", r.g_tau ? json(*r.g_tau) : json(nullptr)},
                    {"gamma_g", r.gamma_g ? json(r.gamma_g->value()) : json(nullptr)}});
  json out{{"per_tau", rows}};
  if (report.profile) {
    out["profile"] = to_json(*report.profile)["rows"];
    out["slope_estimate"] = report.profile->slope_estimate ? json(*report.profile->slope_estimate) : json(nullptr);
  } else {
    out["profile"] = json::array();
    out["slope_estimate"] = nullptr;
  }
  return out;
}

std::string to_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "tau,k_tau,gamma_t,g_tau,gamma_g\n";
  for (const auto& r : report.per_tau) {
    os << r.tau << ',' << r.k_tau << ',' << r.gamma_t << ',';
    if (r.g_tau) os << *r.g_tau;
    os << ',';
    if (r.gamma_g) os << json(r.gamma_g->value()).dump();
    os << '\n';
  }
  return os.str();
}

std::string to_csv(const ComplexityProfile& profile) {
  std::ostringstream os;
  os << "n,local,global,scrap,output\n";
  for (const auto& r : profile.rows)
    os << r.n << ',' << r.local_steps << ',' << r.global_steps << ',' << r.scrap_cells << ','
       << r.output_cells << '\n';
  return os.str();
}

}  // namespace relmachine
