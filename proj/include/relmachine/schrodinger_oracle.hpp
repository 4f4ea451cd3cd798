// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "relmachine/oracle.hpp"
#include "relmachine/quantum.hpp"

namespace relmachine {

// --- fixed-point codecs -----------------------------------------------------

/// p-bit two's complement, k = clamp(floor(v * 2^(p-1))), big-endian. Values
/// in [-1, 1] decode to (k + 1/2) / 2^(p-1), within 2^-p of the input.
Bits encode_amplitude(double v, int precision);
double decode_amplitude(const Bits& bits, std::size_t offset, int precision);

/// Real and imaginary part of every amplitude in order: 2 * 2^n * p bits.
Bits encode_state(const QuantumState& psi, int precision);
QuantumState decode_state(const Bits& bits, std::size_t offset, int n_qubits, int precision);

inline constexpr int kTauBits = 64;
inline constexpr int kTauFractionBits = 48;
/// 64-bit two's complement with 48 fraction bits.
Bits encode_tau(double tau);
double decode_tau(const Bits& bits, std::size_t offset);

// --- oracle -----------------------------------------------------------------

enum class SchrodingerMode {
  kRestart,  ///< argument = psi(0) || tau, evolves from psi(0) every query
  kStep,     ///< argument = output = psi, advances by a fixed step
};

struct SchrodingerOptions {
  double epsilon = 1e-9;
  int precision = 32;
  SchrodingerMode mode = SchrodingerMode::kRestart;
  double step_tau = 0.0;  ///< step mode only
  std::string id = "schrodinger";
};

/// Declared output length 2 * 2^n * precision. Throws PreconditionError for
/// a non-Hermitian H or precision < 2. Charges J * (dim^2 + dim) internal
/// global steps per evaluation (dense mat-vec cost model).
OracleBinding schrodinger_oracle_binding(const Hamiltonian& h, const SchrodingerOptions& options);

/// A local machine that issues one Schrodinger query per local step.
struct SchrodingerProgram {
  MachineSpec machine;
  std::string input;           ///< initial S'
  std::int64_t local_width = 0;
  Interval output;             ///< where each query's result lands
};

/// Restart mode: S' = [psi0][tau_1]...[tau_s][out]; query j reads psi0 and
/// tau_j. Step mode: S' = [psi], each query evolves it in place.
SchrodingerProgram schrodinger_program(const QuantumState& psi0, const std::vector<double>& taus,
                                       const SchrodingerOptions& options);

}  // namespace relmachine
