// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "relmachine/quantum.hpp"

namespace relmachine {

/// {n_qubits, entries: [[row, col, re, im], ...]}; missing lower-triangle
/// entries are filled in as conjugates of the upper triangle.
Hamiltonian hamiltonian_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Hamiltonian& h);

/// JSON array of [re, im] pairs.
nlohmann::json to_json(const QuantumState& psi);
QuantumState quantum_state_from_json(const nlohmann::json& j);

}  // namespace relmachine
