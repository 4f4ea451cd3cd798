// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "relmachine/machine.hpp"

namespace relmachine {

/// What an oracle evaluator may do while the global machine computes f(x).
/// Every call is one global step. Offsets are relative to the query's
/// workspace in the scrap region; the argument copy occupies [0, |x|).
class OracleContext {
 public:
  virtual ~OracleContext() = default;

  virtual bool scrap_read(std::int64_t offset) = 0;
  virtual void scrap_write(std::int64_t offset, bool bit) = 0;
  /// n internal global steps with no tape access (arithmetic the cost model charges for).
  virtual void tick(std::int64_t n) = 0;
  /// Global steps spent by the last completed local update.
  virtual std::int64_t last_update_interval() const = 0;
  /// Width of the argument copy in scrap.
  virtual std::int64_t argument_length() const = 0;
};

enum class CostModel { kExact, kApproximate };

struct OracleBinding {
  std::string id;
  std::function<Bits(const Bits& x, OracleContext& ctx)> evaluator;
  /// ||f(x)|| as a function of |x|.
  std::function<std::int64_t(std::int64_t arg_length)> output_length;
  CostModel cost_model = CostModel::kExact;
  double epsilon = 0.0;
  /// When false the argument is passed to the evaluator without a scrap copy.
  bool copy_argument = true;
};

namespace oracles {

/// XOR of the argument bits, one scrap accumulator cell.
OracleBinding parity();
/// f(x) = x.
OracleBinding identity();
/// One bit: did the last completed update take more than `threshold` global steps.
OracleBinding tell_pad(std::int64_t threshold);
/// Writes a fixed bit string regardless of input (used for MEASURE deliveries).
OracleBinding constant(std::string id, Bits value);

}  // namespace oracles

}  // namespace relmachine
