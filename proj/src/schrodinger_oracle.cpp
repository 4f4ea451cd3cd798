// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/schrodinger_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "relmachine/error.hpp"

namespace relmachine {
namespace {

void require_precision(int precision) {
  if (precision < 2) throw PreconditionError("precision must be at least 2 bits");
  if (precision > 62) throw PreconditionError("precision must be at most 62 bits");
}

void push_bits(Bits& out, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(((value >> i) & 1U) != 0);
}

std::int64_t read_signed(const Bits& bits, std::size_t offset, int width) {
  if (offset + static_cast<std::size_t>(width) > bits.size())
    throw OracleFailure("fixed-point field runs past the argument");
  std::uint64_t u = 0;
  for (int i = 0; i < width; ++i) u = (u << 1) | (bits[offset + i] ? 1U : 0U);
  if (width < 64 && (u >> (width - 1)) != 0) u |= ~std::uint64_t{0} << width;
  return static_cast<std::int64_t>(u);
}

}  // namespace

Bits encode_amplitude(double v, int precision) {
  require_precision(precision);
  const std::int64_t hi = (std::int64_t{1} << (precision - 1)) - 1;
  const std::int64_t lo = -hi - 1;
  // Clamp before converting: for p > 53 the bounds are not doubles.
  std::int64_t k = 0;
  if (v >= 1.0) k = hi;
  else if (v < -1.0) k = lo;
  else k = std::clamp(static_cast<std::int64_t>(std::floor(std::ldexp(v, precision - 1))), lo, hi);
  Bits out;
  push_bits(out, static_cast<std::uint64_t>(k), precision);
  return out;
}

double decode_amplitude(const Bits& bits, std::size_t offset, int precision) {
  require_precision(precision);
  const auto k = read_signed(bits, offset, precision);
  return (static_cast<double>(k) + 0.5) / std::ldexp(1.0, precision - 1);
}

Bits encode_state(const QuantumState& psi, int precision) {
  Bits out;
  out.reserve(2 * psi.dim() * static_cast<std::size_t>(precision));
  for (const auto& c : psi.amplitudes()) {
    const Bits re = encode_amplitude(c.real(), precision);
    const Bits im = encode_amplitude(c.imag(), precision);
    out.insert(out.end(), re.begin(), re.end());
    out.insert(out.end(), im.begin(), im.end());
  }
  return out;
}

QuantumState decode_state(const Bits& bits, std::size_t offset, int n_qubits, int precision) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const auto p = static_cast<std::size_t>(precision);
  std::vector<Complex> a(dim);
  for (std::size_t i = 0; i < dim; ++i)
    a[i] = {decode_amplitude(bits, offset + 2 * i * p, precision),
            decode_amplitude(bits, offset + (2 * i + 1) * p, precision)};
  return {n_qubits, std::move(a)};
}

Bits encode_tau(double tau) {
  const double scaled = std::round(std::ldexp(tau, kTauFractionBits));
  if (!(std::abs(scaled) < std::ldexp(1.0, 63))) throw PreconditionError("tau out of codec range");
  Bits out;
  push_bits(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(scaled)), kTauBits);
  return out;
}

double decode_tau(const Bits& bits, std::size_t offset) {
  return std::ldexp(static_cast<double>(read_signed(bits, offset, kTauBits)), -kTauFractionBits);
}

OracleBinding schrodinger_oracle_binding(const Hamiltonian& h, const SchrodingerOptions& options) {
  require_precision(options.precision);
  if (const auto check = check_hermitian(h); !check.ok)
    throw PreconditionError("schrodinger oracle needs a Hermitian hamiltonian");
  if (!(options.epsilon > 0.0)) throw PreconditionError("epsilon must be positive");

  const std::int64_t state_bits =
      2 * static_cast<std::int64_t>(h.dim()) * static_cast<std::int64_t>(options.precision);
  OracleBinding b;
  b.id = options.id;
  b.cost_model = CostModel::kApproximate;
  b.epsilon = options.epsilon;
  b.output_length = [state_bits](std::int64_t) { return state_bits; };
  b.evaluator = [h, options, state_bits](const Bits& x, OracleContext& ctx) {
    const bool restart = options.mode == SchrodingerMode::kRestart;
    const std::int64_t expected = restart ? state_bits + kTauBits : state_bits;
    if (static_cast<std::int64_t>(x.size()) != expected)
      throw OracleFailure("schrodinger argument has " + std::to_string(x.size()) + " bits, expected " +
                          std::to_string(expected));
    const QuantumState psi = decode_state(x, 0, h.n_qubits(), options.precision);
    const double tau = restart ? decode_tau(x, static_cast<std::size_t>(state_bits)) : options.step_tau;
    EvolutionParams params{tau, options.epsilon, std::nullopt};
    const int order = taylor_order_for(h, tau, options.epsilon);
    params.truncation_order = order;
    const auto dim = static_cast<std::int64_t>(h.dim());
    ctx.tick(static_cast<std::int64_t>(order) * (dim * dim + dim));
    return encode_state(evolve(psi, h, params), options.precision);
  };
  return b;
}

SchrodingerProgram schrodinger_program(const QuantumState& psi0, const std::vector<double>& taus,
                                       const SchrodingerOptions& options) {
  require_precision(options.precision);
  const std::int64_t s = static_cast<std::int64_t>(taus.size());
  const std::int64_t state_bits =
      2 * static_cast<std::int64_t>(psi0.dim()) * static_cast<std::int64_t>(options.precision);
  const Bits psi_bits = encode_state(psi0, options.precision);

  SchrodingerProgram program;
  MachineBuilder b("schrodinger-" + std::string(options.mode == SchrodingerMode::kRestart ? "restart" : "step"));
  auto query_name = [](std::int64_t j) { return j == 0 ? std::string("START") : "Q" + std::to_string(j); };

  std::string input = to_string(psi_bits);
  if (options.mode == SchrodingerMode::kRestart) {
    for (double tau : taus) input += to_string(encode_tau(tau));
    const Interval out{state_bits + kTauBits * s, 2 * state_bits + kTauBits * s};
    for (std::int64_t j = 0; j < s; ++j) {
      const Interval tau_field{state_bits + kTauBits * j, state_bits + kTauBits * (j + 1)};
      b.query(query_name(j), options.id, {{0, state_bits}, tau_field}, out,
              j + 1 == s ? "ACCEPT" : query_name(j + 1), Move::kRight);
    }
    program.output = out;
    program.local_width = out.end + 1;
  } else {
    const Interval psi{0, state_bits};
    for (std::int64_t j = 0; j < s; ++j)
      b.query(query_name(j), options.id, {psi}, psi, j + 1 == s ? "ACCEPT" : query_name(j + 1),
              Move::kRight);
    program.output = psi;
    program.local_width = state_bits + 1;
  }
  if (s == 0)
    for (char c : std::string("01_")) b.on("START", c, c, "ACCEPT", Move::kRight);
  program.machine = b.build();
  program.input = std::move(input);
  return program;
}

}  // namespace relmachine
