// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "relmachine/corpus.hpp"
#include "relmachine/oracle.hpp"
#include "relmachine/relative_model.hpp"

namespace relmachine::test {

inline std::vector<OracleBinding> default_oracles() {
  return {oracles::parity(), oracles::identity()};
}

inline RelativeModel make_model(const MachineSpec& spec, const std::string& input,
                                GlobalConfig config = {}, std::uint64_t seed = 1,
                                std::int64_t local_width = 64,
                                std::vector<OracleBinding> bound = default_oracles()) {
  return RelativeModel(spec, input, RelativeModel::auto_layout(spec, local_width), std::move(bound),
                       seed, std::move(config));
}

/// START queries `oracle` on S'[0, n) and writes the answer to S'[n, n + out).
inline MachineSpec query_machine(const std::string& oracle, std::int64_t n, std::int64_t out) {
  MachineBuilder b("query-" + oracle);
  b.query("START", oracle, {{0, n}}, {n, n + out}, "ACCEPT", Move::kRight);
  return b.build();
}

inline std::string ones_and_zeros(std::int64_t n) {
  std::string s;
  for (std::int64_t i = 0; i < n; ++i) s.push_back(i % 3 == 0 ? '1' : '0');
  return s;
}

}  // namespace relmachine::test
