// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/quantum_io.hpp"

#include <bit>

#include "relmachine/error.hpp"

namespace relmachine {

using nlohmann::json;

Hamiltonian hamiltonian_from_json(const json& j) {
  try {
    const int n = j.at("n_qubits").get<int>();
    if (n < 0 || n > kMaxQubits) throw MalformedInput("n_qubits must be in [0, 10]");
    const std::size_t d = std::size_t{1} << n;
    std::vector<Complex> v(d * d);
    std::vector<bool> seen(d * d, false);
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4) throw MalformedInput("entry must be [row, col, re, im]");
      const auto r = e.at(0).get<std::int64_t>();
      const auto c = e.at(1).get<std::int64_t>();
      if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= d || static_cast<std::size_t>(c) >= d)
        throw MalformedInput("entry index out of range");
      const Complex value{e.at(2).get<double>(), e.at(3).get<double>()};
      const std::size_t at = static_cast<std::size_t>(r) * d + static_cast<std::size_t>(c);
      v[at] = value;
      seen[at] = true;
    }
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r + 1; c < d; ++c)
        if (seen[r * d + c] && !seen[c * d + r]) v[c * d + r] = std::conj(v[r * d + c]);
    return {d, std::move(v)};
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("hamiltonian document: ") + e.what());
  }
}

json to_json(const Hamiltonian& h) {
  json entries = json::array();
  for (std::size_t r = 0; r < h.dim(); ++r)
    for (std::size_t c = r; c < h.dim(); ++c)
      if (h.at(r, c) != Complex{}) entries.push_back({r, c, h.at(r, c).real(), h.at(r, c).imag()});
  return {{"n_qubits", h.n_qubits()}, {"entries", entries}};
}

json to_json(const QuantumState& psi) {
  json out = json::array();
  for (const auto& c : psi.amplitudes()) out.push_back({c.real(), c.imag()});
  return out;
}

QuantumState quantum_state_from_json(const json& j) {
  try {
    std::vector<Complex> a;
    for (const auto& p : j) a.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (a.empty() || !std::has_single_bit(a.size()))
      throw MalformedInput("state length must be a power of two");
    return {std::countr_zero(a.size()), std::move(a)};
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("state document: ") + e.what());
  }
}

}  // namespace relmachine
