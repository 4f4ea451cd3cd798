// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/oracle.hpp"

namespace relmachine::oracles {

OracleBinding parity() {
  OracleBinding b;
  b.id = "parity";
  b.output_length = [](std::int64_t) { return std::int64_t{1}; };
  b.evaluator = [](const Bits& x, OracleContext& ctx) {
    const auto n = static_cast<std::int64_t>(x.size());
    bool acc = false;
    ctx.scrap_write(n, acc);
    for (std::int64_t i = 0; i < n; ++i) {
      acc ^= ctx.scrap_read(i);
      ctx.scrap_write(n, acc);
    }
    return Bits{acc};
  };
  return b;
}

OracleBinding identity() {
  OracleBinding b;
  b.id = "identity";
  b.output_length = [](std::int64_t n) { return n; };
  b.evaluator = [](const Bits& x, OracleContext&) { return x; };
  return b;
}

OracleBinding tell_pad(std::int64_t threshold) {
  OracleBinding b;
  b.id = "tell-pad";
  b.copy_argument = false;
  b.output_length = [](std::int64_t) { return std::int64_t{1}; };
  b.evaluator = [threshold](const Bits&, OracleContext& ctx) {
    return Bits{ctx.last_update_interval() > threshold};
  };
  return b;
}

OracleBinding constant(std::string id, Bits value) {
  OracleBinding b;
  b.id = std::move(id);
  b.copy_argument = false;
  const auto n = static_cast<std::int64_t>(value.size());
  b.output_length = [n](std::int64_t) { return n; };
  b.evaluator = [value = std::move(value)](const Bits&, OracleContext&) { return value; };
  return b;
}

}  // namespace relmachine::oracles
