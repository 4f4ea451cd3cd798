// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/stats.hpp"

#include <cmath>
#include <cstdio>

#include <boost/math/distributions/chi_squared.hpp>

#include "relmachine/error.hpp"

namespace relmachine {

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw PreconditionError("wilson_interval needs 0 <= successes <= trials, trials >= 1");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ChiSquare chi_square_independence(const std::vector<std::vector<std::int64_t>>& table) {
  std::vector<double> rows;
  std::vector<double> cols;
  const std::size_t c = table.empty() ? 0 : table.front().size();
  for (const auto& row : table) {
    if (row.size() != c) throw PreconditionError("ragged contingency table");
    double s = 0;
    for (auto v : row) s += static_cast<double>(v);
    rows.push_back(s);
  }
  for (std::size_t j = 0; j < c; ++j) {
    double s = 0;
    for (const auto& row : table) s += static_cast<double>(row[j]);
    cols.push_back(s);
  }
  double total = 0;
  for (double r : rows) total += r;
  ChiSquare out;
  if (total == 0) return out;
  std::int64_t live_rows = 0;
  std::int64_t live_cols = 0;
  for (double r : rows) live_rows += r > 0;
  for (double k : cols) live_cols += k > 0;
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double expected = rows[i] * cols[j] / total;
      if (expected > 0) {
        const double d = static_cast<double>(table[i][j]) - expected;
        out.statistic += d * d / expected;
      }
    }
  out.dof = (live_rows - 1) * (live_cols - 1);
  if (out.dof > 0) {
    const boost::math::chi_squared dist(static_cast<double>(out.dof));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace relmachine
