// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relmachine {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;

  bool contains(double p) const noexcept { return p >= low && p <= high; }
};

/// Wilson score interval for a binomial proportion. PreconditionError when
/// trials == 0 or successes > trials.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ95);

struct ChiSquare {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
};

/// Pearson independence test on an r x c table of counts. Empty rows and
/// columns are dropped; dof 0 reports p = 1.
ChiSquare chi_square_independence(const std::vector<std::vector<std::int64_t>>& table);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

}  // namespace relmachine
