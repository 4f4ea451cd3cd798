// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relmachine/kernels.hpp"
#include "relmachine/rng.hpp"

namespace relmachine {

inline constexpr int kMaxQubits = 10;

/// Complex vector in C^(2^n).
class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(int n_qubits, std::vector<Complex> amplitudes);

  /// |index> on n qubits.
  static QuantumState basis(int n_qubits, std::size_t index);
  /// Haar-ish random unit vector (normal components, normalized).
  static QuantumState random(int n_qubits, Rng& rng);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  std::vector<Complex>& amplitudes() noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_.at(i); }

 private:
  int n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

/// Dense 2^n x 2^n matrix, row-major. Hermiticity is checked by the
/// operations that need it, not by construction.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  /// Throws PreconditionError unless values has dim*dim entries and dim is a power of two.
  Hamiltonian(std::size_t dim, std::vector<Complex> values);

  static Hamiltonian zero(int n_qubits);
  static Hamiltonian pauli_x();
  static Hamiltonian diagonal(const std::vector<double>& entries);
  /// (A + A^dagger)/2 with standard normal entries in A.
  static Hamiltonian random_hermitian(int n_qubits, Rng& rng);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return dim_; }
  Complex at(std::size_t row, std::size_t col) const { return values_.at(row * dim_ + col); }
  const std::vector<Complex>& values() const noexcept { return values_; }
  double frobenius_norm() const noexcept;

 private:
  int n_qubits_ = 0;
  std::size_t dim_ = 0;
  std::vector<Complex> values_;
};

struct HermitianCheck {
  bool ok = true;
  double max_entry_error = 0.0;
};

/// ok iff max |H_ab - conj(H_ba)| <= tol.
HermitianCheck check_hermitian(const Hamiltonian& h, double tol = 1e-12);

struct EvolutionParams {
  double tau = 0.0;
  double epsilon = 1e-9;
  /// Overrides the order derived from epsilon.
  std::optional<int> truncation_order;
};

/// Smallest J with B^(J+1)/(J+1)! * e^B <= epsilon for the given bound B.
int taylor_order_for_bound(double bound, double epsilon);
/// B = ||H||_F * |tau|.
int taylor_order_for(const Hamiltonian& h, double tau, double epsilon);

/// Truncated Taylor series of exp(-i H tau) applied to psi0 by Horner
/// accumulation of mat-vec products. Throws PreconditionError on dimension
/// mismatch or non-Hermitian H.
QuantumState evolve(const QuantumState& psi0, const Hamiltonian& h, const EvolutionParams& params,
                    const KernelTable& kernels = active_kernels());

/// U diag(exp(-i lambda tau)) U^dagger psi0 via a Hermitian eigensolver.
QuantumState evolve_exact(const QuantumState& psi0, const Hamiltonian& h, double tau);

double norm(const QuantumState& psi);
/// Throws PreconditionError for the zero vector.
QuantumState renormalize(const QuantumState& psi);
/// ||a - b||_2
double distance(const QuantumState& a, const QuantumState& b);

/// Binary truncation of x to k fractional bits and the half-open interval of
/// reals sharing it.
struct Measurement {
  double measured = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const noexcept { return x >= lower && x < upper; }
};

Measurement measure_with_uncertainty(double x, int k_bits);

}  // namespace relmachine
