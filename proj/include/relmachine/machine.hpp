// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relmachine/rng.hpp"
#include "relmachine/tape.hpp"

namespace relmachine {

using StateId = std::uint32_t;
enum class Move : std::uint8_t { kLeft, kRight };

inline constexpr std::int64_t delta(Move m) noexcept { return m == Move::kLeft ? -1 : 1; }

struct Action {
  Symbol write = kBlank;
  StateId next = 0;
  Move move = Move::kRight;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Successor {
  Action action;
  double probability = 0.0;

  friend bool operator==(const Successor&, const Successor&) = default;
};

/// A state in which the local machine asks the global machine for f(x).
/// Regions are in local-cell coordinates (0 = first cell of S').
struct QueryState {
  StateId state = 0;
  std::string oracle;
  std::vector<Interval> arg_regions;  ///< concatenated to form x
  Interval out_region;                ///< receives exactly ||f(x)|| symbols
  StateId next = 0;
  Move move = Move::kRight;

  std::int64_t arg_length() const noexcept;
  friend bool operator==(const QueryState&, const QueryState&) = default;
};

using TransitionKey = std::pair<Symbol, StateId>;

/// TM(delta, Q, Gamma) with ACCEPT/REJECT, optional probabilistic rows and
/// optional oracle query states. Immutable once validated.
struct MachineSpec {
  std::string name;
  std::vector<std::string> states;
  Alphabet alphabet = Alphabet::binary();
  StateId start = 0;
  StateId accept = 1;
  StateId reject = 2;
  std::map<TransitionKey, Action> transitions;
  std::map<TransitionKey, std::vector<Successor>> probabilistic;
  std::vector<QueryState> queries;

  /// Throws MalformedInput describing the first broken invariant.
  void validate() const;

  StateId state_id(std::string_view state_name) const;
  const std::string& state_name(StateId id) const { return states.at(id); }
  bool is_halting(StateId s) const noexcept { return s == accept || s == reject; }
  bool is_probabilistic() const noexcept { return !probabilistic.empty(); }
  const QueryState* query(StateId s) const noexcept;
  const Action* transition(Symbol read, StateId s) const noexcept;
  const std::vector<Successor>* successors(Symbol read, StateId s) const noexcept;

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;
};

/// Small builder used by the corpus and tests; states are created on first
/// mention, START/ACCEPT/REJECT are always ids 0/1/2.
class MachineBuilder {
 public:
  explicit MachineBuilder(std::string name, std::string_view alphabet = "01_");

  StateId state(std::string_view name);
  MachineBuilder& on(std::string_view state, Symbol read, Symbol write,
                     std::string_view next, Move move);
  MachineBuilder& on_random(std::string_view state, Symbol read,
                            std::vector<std::pair<Action, double>> successors);
  MachineBuilder& query(std::string_view state, std::string oracle,
                        std::vector<Interval> args, Interval out,
                        std::string_view next, Move move);
  MachineSpec build() const;

 private:
  MachineSpec spec_;
};

struct MachineConfig {
  std::int64_t head = 0;
  StateId state = 0;

  friend bool operator==(const MachineConfig&, const MachineConfig&) = default;
};

enum class Outcome { kRunning, kAccept, kReject, kTimeout };
std::string_view outcome_name(Outcome o) noexcept;

/// The action delta picks for (read, state). Probabilistic rows draw one
/// uniform from rng; the draw is reported for logging.
struct ResolvedAction {
  Action action;
  std::optional<double> draw;
  std::optional<std::size_t> branch;
};

/// Throws UndefinedTransition when delta has no row (query states included:
/// they are only serviceable inside a relative model), PreconditionError when
/// the state halts or a probabilistic row is hit without an rng.
ResolvedAction resolve(const MachineSpec& spec, Symbol read, StateId state, Rng* rng);

/// One TM step: rewrite the cell under the head, change state, move.
Outcome step(const MachineSpec& spec, MachineConfig& config, Tape& tape, Rng* rng = nullptr);

struct RunResult {
  Outcome outcome = Outcome::kRunning;
  std::int64_t steps = 0;
};

RunResult run(const MachineSpec& spec, MachineConfig& config, Tape& tape,
              std::int64_t max_steps, Rng* rng = nullptr);

// --- encoding of a local machine onto a binary tape -----------------------

using Bits = std::vector<bool>;

std::string to_string(const Bits& bits);
Bits bits_from_string(std::string_view s);

/// Self-delimiting binary encoding: length-prefixed header, state names,
/// fixed-width transition rows, probabilistic rows, query bindings.
Bits encode_machine(const MachineSpec& spec);

/// Inverse of encode_machine. Throws MalformedInput on any bitstring outside
/// its image, including trailing bits.
MachineSpec decode_machine(const Bits& bits);

/// Decodes the machine at the front of `bits` and reports how many bits it
/// used; trailing content is left alone.
MachineSpec decode_machine_prefix(const Bits& bits, std::size_t& consumed);

}  // namespace relmachine
