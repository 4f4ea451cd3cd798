// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/quantum.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "relmachine/error.hpp"

namespace relmachine {
namespace {

int qubits_for(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim))
    throw PreconditionError("dimension " + std::to_string(dim) + " is not a power of two");
  const int n = std::countr_zero(dim);
  if (n > kMaxQubits) throw PreconditionError("more than 10 qubits");
  return n;
}

void require_match(const QuantumState& psi, const Hamiltonian& h) {
  if (psi.dim() != h.dim())
    throw PreconditionError("dimension mismatch: state " + std::to_string(psi.dim()) +
                            ", hamiltonian " + std::to_string(h.dim()));
}

}  // namespace

QuantumState::QuantumState(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw PreconditionError("n_qubits out of range");
  if (amplitudes_.size() != (std::size_t{1} << n_qubits))
    throw PreconditionError("state needs 2^n amplitudes");
}

QuantumState QuantumState::basis(int n_qubits, std::size_t index) {
  std::vector<Complex> a(std::size_t{1} << n_qubits);
  a.at(index) = 1.0;
  return {n_qubits, std::move(a)};
}

QuantumState QuantumState::random(int n_qubits, Rng& rng) {
  std::vector<Complex> a(std::size_t{1} << n_qubits);
  for (auto& c : a) c = {rng.normal(), rng.normal()};
  return renormalize(QuantumState(n_qubits, std::move(a)));
}

Hamiltonian::Hamiltonian(std::size_t dim, std::vector<Complex> values)
    : n_qubits_(qubits_for(dim)), dim_(dim), values_(std::move(values)) {
  if (values_.size() != dim * dim) throw PreconditionError("hamiltonian is not square");
}

Hamiltonian Hamiltonian::zero(int n_qubits) {
  const std::size_t d = std::size_t{1} << n_qubits;
  return {d, std::vector<Complex>(d * d)};
}

Hamiltonian Hamiltonian::pauli_x() { return {2, {0.0, 1.0, 1.0, 0.0}}; }

Hamiltonian Hamiltonian::diagonal(const std::vector<double>& entries) {
  const std::size_t d = entries.size();
  std::vector<Complex> v(d * d);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = entries[i];
  return {d, std::move(v)};
}

Hamiltonian Hamiltonian::random_hermitian(int n_qubits, Rng& rng) {
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<Complex> a(d * d);
  for (auto& c : a) c = {rng.normal(), rng.normal()};
  std::vector<Complex> h(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) h[r * d + c] = 0.5 * (a[r * d + c] + std::conj(a[c * d + r]));
  return {d, std::move(h)};
}

double Hamiltonian::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& c : values_) s += std::norm(c);
  return std::sqrt(s);
}

HermitianCheck check_hermitian(const Hamiltonian& h, double tol) {
  HermitianCheck out;
  for (std::size_t r = 0; r < h.dim(); ++r)
    for (std::size_t c = r; c < h.dim(); ++c)
      out.max_entry_error = std::max(out.max_entry_error, std::abs(h.at(r, c) - std::conj(h.at(c, r))));
  out.ok = out.max_entry_error <= tol;
  return out;
}

int taylor_order_for_bound(double bound, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (bound <= 0.0) return 0;
  // log of B^(J+1)/(J+1)! * e^B, advanced term by term.
  const double target = std::log(epsilon);
  double log_term = std::log(bound) + bound;  // J = 0
  int j = 0;
  while (log_term > target) {
    ++j;
    log_term += std::log(bound) - std::log(static_cast<double>(j + 1));
    if (j > 100000) throw PreconditionError("taylor order diverges");
  }
  return j;
}

int taylor_order_for(const Hamiltonian& h, double tau, double epsilon) {
  return taylor_order_for_bound(h.frobenius_norm() * std::abs(tau), epsilon);
}

QuantumState evolve(const QuantumState& psi0, const Hamiltonian& h, const EvolutionParams& params,
                    const KernelTable& kernels) {
  require_match(psi0, h);
  if (const auto check = check_hermitian(h); !check.ok)
    throw PreconditionError("hamiltonian is not Hermitian (max error " +
                            std::to_string(check.max_entry_error) + ")");
  const int order =
      params.truncation_order ? *params.truncation_order : taylor_order_for(h, params.tau, params.epsilon);
  if (order < 0) throw PreconditionError("truncation order must be non-negative");

  // sum_{j<=J} (-i tau)^j/j! H^j psi0 = psi0 + (-i tau/1) H (psi0 + (-i tau/2) H (...))
  const std::size_t n = psi0.dim();
  const Complex* base = psi0.amplitudes().data();
  std::vector<Complex> v(psi0.amplitudes());
  std::vector<Complex> next(n);
  for (int j = order; j >= 1; --j) {
    const Complex s{0.0, -params.tau / j};
    kernels.horner_step(h.values().data(), base, v.data(), next.data(), n, s);
    v.swap(next);
  }
  return {psi0.n_qubits(), std::move(v)};
}

QuantumState evolve_exact(const QuantumState& psi0, const Hamiltonian& h, double tau) {
  require_match(psi0, h);
  const auto d = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = h.at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw PreconditionError("eigensolver did not converge");
  Eigen::VectorXcd psi(d);
  for (Eigen::Index i = 0; i < d; ++i) psi(i) = psi0[static_cast<std::size_t>(i)];
  Eigen::VectorXcd coeff = solver.eigenvectors().adjoint() * psi;
  for (Eigen::Index i = 0; i < d; ++i)
    coeff(i) *= std::exp(Complex{0.0, -solver.eigenvalues()(i) * tau});
  const Eigen::VectorXcd out = solver.eigenvectors() * coeff;
  std::vector<Complex> a(out.data(), out.data() + d);
  return {psi0.n_qubits(), std::move(a)};
}

double norm(const QuantumState& psi) {
  return std::sqrt(scalar_kernels().norm_sq(psi.amplitudes().data(), psi.dim()));
}

QuantumState renormalize(const QuantumState& psi) {
  const double n = norm(psi);
  if (n == 0.0) throw PreconditionError("cannot renormalize the zero vector");
  std::vector<Complex> a(psi.amplitudes());
  for (auto& c : a) c /= n;
  return {psi.n_qubits(), std::move(a)};
}

double distance(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw PreconditionError("dimension mismatch");
  return std::sqrt(scalar_kernels().diff_norm_sq(a.amplitudes().data(), b.amplitudes().data(), a.dim()));
}

Measurement measure_with_uncertainty(double x, int k_bits) {
  if (k_bits < 1) throw PreconditionError("k_bits must be >= 1");
  const double scale = std::ldexp(1.0, k_bits);
  const double m = std::floor(x * scale) / scale;
  return {m, m, m + 1.0 / scale};
}

}  // namespace relmachine
