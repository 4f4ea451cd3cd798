// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

// Binary layout (all integers big-endian, unsigned unless noted):
//
//   name        : len u8, len * u8
//   alphabet    : count u8, count * u8 (ascending)
//   states      : count u16, count * (len u8, len * u8)
//   start/accept/reject : wq bits each, wq = bit_width(|Q| - 1) (min 1)
//   transitions : count u16, rows of (read ws, state wq, write ws, next wq, move 1)
//   random rows : count u16, rows of (read ws, state wq, n u8,
//                                      n * (write ws, next wq, move 1, p f64))
//   queries     : count u16, rows of (state wq, oracle string, nargs u8,
//                                      nargs * (begin i32, end i32),
//                                      out begin i32, out end i32, next wq, move 1)
//
// ws = bit_width(|Gamma| - 1) (min 1) indexes the sorted alphabet.

#include <bit>
#include <cstdint>
#include <cstring>

#include "relmachine/error.hpp"
#include "relmachine/machine.hpp"

namespace relmachine {
namespace {

unsigned field_width(std::size_t count) {
  return count <= 1 ? 1u : static_cast<unsigned>(std::bit_width(count - 1));
}

class BitWriter {
 public:
  void put(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) bits_.push_back(((value >> i) & 1u) != 0);
  }
  void put_signed(std::int64_t value, unsigned width) {
    if (value < -(std::int64_t{1} << (width - 1)) || value >= (std::int64_t{1} << (width - 1)))
      throw MalformedInput("value does not fit the encoding field");
    put(static_cast<std::uint64_t>(value), width);
  }
  void put_string(const std::string& s) {
    if (s.size() > 255) throw MalformedInput("name longer than 255 bytes: " + s);
    put(s.size(), 8);
    for (unsigned char c : s) put(c, 8);
  }
  Bits take() { return std::move(bits_); }

 private:
  Bits bits_;
};

class BitReader {
 public:
  explicit BitReader(const Bits& bits) : bits_(bits) {}

  std::uint64_t get(unsigned width) {
    need(width);
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (bits_[pos_++] ? 1u : 0u);
    return v;
  }
  std::int64_t get_signed(unsigned width) {
    std::uint64_t v = get(width);
    if (width < 64 && (v >> (width - 1)) != 0) v |= ~std::uint64_t{0} << width;
    return static_cast<std::int64_t>(v);
  }
  std::string get_string() {
    const auto len = get(8);
    need(len * 8);
    std::string s;
    for (std::uint64_t i = 0; i < len; ++i) s.push_back(static_cast<char>(get(8)));
    return s;
  }
  /// Count field whose rows each take at least `min_row_bits`; rejects
  /// counts the remaining input cannot possibly hold.
  std::size_t get_count(unsigned width, std::size_t min_row_bits) {
    const auto n = get(width);
    if (n * min_row_bits > remaining()) throw MalformedInput("malformed: count exceeds input");
    return static_cast<std::size_t>(n);
  }
  std::size_t remaining() const { return bits_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > remaining()) throw MalformedInput("malformed: encoding truncated");
  }
  const Bits& bits_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits bits_from_string(std::string_view s) {
  Bits bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw MalformedInput("bitstring may only contain 0 and 1");
    bits.push_back(c == '1');
  }
  return bits;
}

Bits encode_machine(const MachineSpec& spec) {
  spec.validate();
  const std::string& gamma = spec.alphabet.symbols();
  const unsigned ws = field_width(gamma.size());
  const unsigned wq = field_width(spec.states.size());
  auto sym_index = [&](Symbol s) { return static_cast<std::uint64_t>(gamma.find(s)); };

  BitWriter w;
  w.put_string(spec.name);
  w.put(gamma.size(), 8);
  for (unsigned char c : gamma) w.put(c, 8);
  if (spec.states.size() > 0xffff) throw MalformedInput("too many states to encode");
  w.put(spec.states.size(), 16);
  for (const auto& s : spec.states) w.put_string(s);
  w.put(spec.start, wq);
  w.put(spec.accept, wq);
  w.put(spec.reject, wq);

  w.put(spec.transitions.size(), 16);
  for (const auto& [key, a] : spec.transitions) {
    w.put(sym_index(key.first), ws);
    w.put(key.second, wq);
    w.put(sym_index(a.write), ws);
    w.put(a.next, wq);
    w.put(a.move == Move::kRight ? 1 : 0, 1);
  }

  w.put(spec.probabilistic.size(), 16);
  for (const auto& [key, succ] : spec.probabilistic) {
    w.put(sym_index(key.first), ws);
    w.put(key.second, wq);
    if (succ.size() > 255) throw MalformedInput("too many successors to encode");
    w.put(succ.size(), 8);
    for (const auto& s : succ) {
      w.put(sym_index(s.action.write), ws);
      w.put(s.action.next, wq);
      w.put(s.action.move == Move::kRight ? 1 : 0, 1);
      w.put(std::bit_cast<std::uint64_t>(s.probability), 64);
    }
  }

  w.put(spec.queries.size(), 16);
  for (const auto& q : spec.queries) {
    w.put(q.state, wq);
    w.put_string(q.oracle);
    if (q.arg_regions.size() > 255) throw MalformedInput("too many argument regions");
    w.put(q.arg_regions.size(), 8);
    for (const auto& r : q.arg_regions) {
      w.put_signed(r.begin, 32);
      w.put_signed(r.end, 32);
    }
    w.put_signed(q.out_region.begin, 32);
    w.put_signed(q.out_region.end, 32);
    w.put(q.next, wq);
    w.put(q.move == Move::kRight ? 1 : 0, 1);
  }
  return w.take();
}

MachineSpec decode_machine_prefix(const Bits& bits, std::size_t& consumed) {
  if (bits.empty()) throw MalformedInput("malformed: empty encoding");
  BitReader r(bits);
  MachineSpec spec;
  spec.name = r.get_string();

  const std::size_t n_symbols = r.get_count(8, 8);
  std::string gamma;
  for (std::size_t i = 0; i < n_symbols; ++i) {
    const char c = static_cast<char>(r.get(8));
    if (!gamma.empty() && static_cast<unsigned char>(c) <= static_cast<unsigned char>(gamma.back()))
      throw MalformedInput("malformed: alphabet not strictly ascending");
    gamma.push_back(c);
  }
  spec.alphabet = Alphabet(gamma);
  if (spec.alphabet.symbols() != gamma) throw MalformedInput("malformed: alphabet lacks blank");

  const std::size_t n_states = r.get_count(16, 8);
  spec.states.clear();
  for (std::size_t i = 0; i < n_states; ++i) spec.states.push_back(r.get_string());

  const unsigned ws = field_width(gamma.size());
  const unsigned wq = field_width(spec.states.size());
  auto state = [&]() {
    const auto v = r.get(wq);
    if (v >= n_states) throw MalformedInput("malformed: state index out of range");
    return static_cast<StateId>(v);
  };
  auto symbol = [&]() {
    const auto v = r.get(ws);
    if (v >= gamma.size()) throw MalformedInput("malformed: symbol index out of range");
    return gamma[static_cast<std::size_t>(v)];
  };
  auto move = [&]() { return r.get(1) ? Move::kRight : Move::kLeft; };

  spec.start = state();
  spec.accept = state();
  spec.reject = state();

  const std::size_t n_rows = r.get_count(16, 2 * ws + 2 * wq + 1);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const Symbol read = symbol();
    const StateId from = state();
    Action a;
    a.write = symbol();
    a.next = state();
    a.move = move();
    if (!spec.transitions.emplace(TransitionKey{read, from}, a).second)
      throw MalformedInput("malformed: duplicate transition row");
  }

  const std::size_t n_random = r.get_count(16, ws + wq + 8);
  for (std::size_t i = 0; i < n_random; ++i) {
    const Symbol read = symbol();
    const StateId from = state();
    const std::size_t n_succ = r.get_count(8, ws + wq + 1 + 64);
    std::vector<Successor> succ;
    for (std::size_t k = 0; k < n_succ; ++k) {
      Successor s;
      s.action.write = symbol();
      s.action.next = state();
      s.action.move = move();
      s.probability = std::bit_cast<double>(r.get(64));
      succ.push_back(s);
    }
    if (!spec.probabilistic.emplace(TransitionKey{read, from}, std::move(succ)).second)
      throw MalformedInput("malformed: duplicate probabilistic row");
  }

  const std::size_t n_queries = r.get_count(16, wq + 8 + 8 + 64 + wq + 1);
  for (std::size_t i = 0; i < n_queries; ++i) {
    QueryState q;
    q.state = state();
    q.oracle = r.get_string();
    const std::size_t n_args = r.get_count(8, 64);
    for (std::size_t k = 0; k < n_args; ++k) {
      const auto b = r.get_signed(32);
      const auto e = r.get_signed(32);
      q.arg_regions.push_back({b, e});
    }
    const auto ob = r.get_signed(32);
    const auto oe = r.get_signed(32);
    q.out_region = {ob, oe};
    q.next = state();
    q.move = move();
    spec.queries.push_back(std::move(q));
  }

  try {
    spec.validate();
  } catch (const MalformedInput& e) {
    throw MalformedInput(std::string("malformed: ") + e.what());
  }
  consumed = r.position();
  return spec;
}

MachineSpec decode_machine(const Bits& bits) {
  std::size_t consumed = 0;
  MachineSpec spec = decode_machine_prefix(bits, consumed);
  if (consumed != bits.size()) throw MalformedInput("malformed: trailing bits after encoding");
  return spec;
}

}  // namespace relmachine
