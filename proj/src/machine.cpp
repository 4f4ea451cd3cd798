// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/machine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "relmachine/error.hpp"

namespace relmachine {

std::int64_t QueryState::arg_length() const noexcept {
  std::int64_t n = 0;
  for (const auto& r : arg_regions) n += r.width();
  return n;
}

std::string_view outcome_name(Outcome o) noexcept {
  switch (o) {
    case Outcome::kRunning: return "running";
    case Outcome::kAccept: return "accept";
    case Outcome::kReject: return "reject";
    case Outcome::kTimeout: return "timeout";
  }
  return "running";
}

void MachineSpec::validate() const {
  const auto n = states.size();
  if (n < 3) throw MalformedInput("machine needs at least START, ACCEPT and REJECT states");
  if (start >= n || accept >= n || reject >= n)
    throw MalformedInput("start/accept/reject refer to unknown states");
  if (accept == reject) throw MalformedInput("ACCEPT and REJECT must differ");
  std::set<std::string> names(states.begin(), states.end());
  if (names.size() != n) throw MalformedInput("duplicate state names");
  if (!alphabet.contains(kBlank)) throw MalformedInput("alphabet must contain the blank");

  auto check_action = [&](const Action& a, const char* what) {
    if (!alphabet.contains(a.write))
      throw MalformedInput(std::string(what) + ": write symbol outside the alphabet");
    if (a.next >= n) throw MalformedInput(std::string(what) + ": unknown next state");
  };
  auto check_key = [&](const TransitionKey& k, const char* what) {
    if (!alphabet.contains(k.first))
      throw MalformedInput(std::string(what) + ": read symbol outside the alphabet");
    if (k.second >= n) throw MalformedInput(std::string(what) + ": unknown state");
    if (is_halting(k.second))
      throw MalformedInput(std::string(what) + ": transitions are undefined on ACCEPT/REJECT");
  };

  for (const auto& [key, action] : transitions) {
    check_key(key, "transition");
    check_action(action, "transition");
  }
  for (const auto& [key, succ] : probabilistic) {
    check_key(key, "probabilistic transition");
    if (transitions.contains(key))
      throw MalformedInput("a (symbol, state) pair has both a plain and a probabilistic row");
    if (succ.empty()) throw MalformedInput("probabilistic transition without successors");
    double total = 0.0;
    for (const auto& s : succ) {
      check_action(s.action, "probabilistic transition");
      if (!(s.probability >= 0.0) || !std::isfinite(s.probability))
        throw MalformedInput("probabilities must be finite and non-negative");
      total += s.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) throw MalformedInput("probabilities must sum to 1");
  }
  std::set<StateId> query_ids;
  for (const auto& q : queries) {
    if (q.state >= n || q.next >= n) throw MalformedInput("query state refers to unknown states");
    if (is_halting(q.state)) throw MalformedInput("ACCEPT/REJECT cannot be query states");
    if (!query_ids.insert(q.state).second) throw MalformedInput("state bound to two oracles");
    if (q.oracle.empty()) throw MalformedInput("query state without oracle identifier");
    for (const auto& r : q.arg_regions)
      if (r.begin < 0 || r.end < r.begin) throw MalformedInput("bad query argument region");
    if (q.out_region.begin < 0 || q.out_region.end < q.out_region.begin)
      throw MalformedInput("bad query output region");
    for (const auto& [key, _] : transitions)
      if (key.second == q.state) throw MalformedInput("query state also has delta rows");
    for (const auto& [key, _] : probabilistic)
      if (key.second == q.state) throw MalformedInput("query state also has delta rows");
  }
}

StateId MachineSpec::state_id(std::string_view state_name) const {
  auto it = std::find(states.begin(), states.end(), state_name);
  if (it == states.end()) throw MalformedInput("unknown state '" + std::string(state_name) + "'");
  return static_cast<StateId>(it - states.begin());
}

const QueryState* MachineSpec::query(StateId s) const noexcept {
  for (const auto& q : queries)
    if (q.state == s) return &q;
  return nullptr;
}

const Action* MachineSpec::transition(Symbol read, StateId s) const noexcept {
  auto it = transitions.find({read, s});
  return it == transitions.end() ? nullptr : &it->second;
}

const std::vector<Successor>* MachineSpec::successors(Symbol read, StateId s) const noexcept {
  auto it = probabilistic.find({read, s});
  return it == probabilistic.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

MachineBuilder::MachineBuilder(std::string name, std::string_view alphabet) {
  spec_.name = std::move(name);
  spec_.alphabet = Alphabet(alphabet);
  spec_.states = {"START", "ACCEPT", "REJECT"};
}

StateId MachineBuilder::state(std::string_view name) {
  auto it = std::find(spec_.states.begin(), spec_.states.end(), name);
  if (it != spec_.states.end()) return static_cast<StateId>(it - spec_.states.begin());
  spec_.states.emplace_back(name);
  return static_cast<StateId>(spec_.states.size() - 1);
}

MachineBuilder& MachineBuilder::on(std::string_view st, Symbol read, Symbol write,
                                   std::string_view next, Move move) {
  const StateId from = state(st);
  const StateId to = state(next);
  spec_.transitions[{read, from}] = Action{write, to, move};
  return *this;
}

MachineBuilder& MachineBuilder::on_random(std::string_view st, Symbol read,
                                          std::vector<std::pair<Action, double>> successors) {
  const StateId from = state(st);
  auto& row = spec_.probabilistic[{read, from}];
  row.clear();
  for (auto& [action, p] : successors) row.push_back({action, p});
  return *this;
}

MachineBuilder& MachineBuilder::query(std::string_view st, std::string oracle,
                                      std::vector<Interval> args, Interval out,
                                      std::string_view next, Move move) {
  const StateId from = state(st);
  const StateId to = state(next);
  spec_.queries.push_back({from, std::move(oracle), std::move(args), out, to, move});
  return *this;
}

MachineSpec MachineBuilder::build() const {
  spec_.validate();
  return spec_;
}

// ---------------------------------------------------------------------------

ResolvedAction resolve(const MachineSpec& spec, Symbol read, StateId state, Rng* rng) {
  if (spec.is_halting(state))
    throw PreconditionError("machine is halted in " + spec.state_name(state));
  if (const Action* a = spec.transition(read, state)) return {*a, std::nullopt, std::nullopt};
  if (const auto* succ = spec.successors(read, state)) {
    if (rng == nullptr)
      throw PreconditionError("probabilistic transition needs a seeded random source");
    const double u = rng->uniform01();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < succ->size(); ++i) {
      cumulative += (*succ)[i].probability;
      if (u < cumulative) return {(*succ)[i].action, u, i};
    }
    // Rounding left u above the last cumulative sum; take the last branch
    // with non-zero mass.
    std::size_t i = succ->size() - 1;
    while (i > 0 && (*succ)[i].probability == 0.0) --i;
    return {(*succ)[i].action, u, i};
  }
  throw UndefinedTransition(read, spec.state_name(state));
}

Outcome step(const MachineSpec& spec, MachineConfig& config, Tape& tape, Rng* rng) {
  const Symbol read = tape.read(config.head);
  const ResolvedAction r = resolve(spec, read, config.state, rng);
  tape.apply_write({r.action.write, config.head, 0});
  config.state = r.action.next;
  config.head += delta(r.action.move);
  if (config.state == spec.accept) return Outcome::kAccept;
  if (config.state == spec.reject) return Outcome::kReject;
  return Outcome::kRunning;
}

RunResult run(const MachineSpec& spec, MachineConfig& config, Tape& tape,
              std::int64_t max_steps, Rng* rng) {
  if (max_steps < 0) throw PreconditionError("max_steps must be non-negative");
  RunResult result;
  while (result.steps < max_steps) {
    const Outcome o = step(spec, config, tape, rng);
    ++result.steps;
    if (o != Outcome::kRunning) {
      result.outcome = o;
      return result;
    }
  }
  result.outcome = Outcome::kTimeout;
  return result;
}

}  // namespace relmachine
