// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "relmachine/machine.hpp"
#include "relmachine/rng.hpp"

// Reference machines shared by the tests, the scenario harness and the CLI.
namespace relmachine::corpus {

/// Walks right over 1s and turns the first blank into a 1 (3 states).
MachineSpec unary_increment();
/// delta(_, START) = (_, ACCEPT, R).
MachineSpec accept_on_blank();
/// Bounces between two cells forever.
MachineSpec oscillator();
/// Accepts iff cell 0 equals cell 2 (binary tapes).
MachineSpec equality_checker();
/// Accepts iff cell 0 is 1.
MachineSpec first_cell_one();
/// Rejects every tape after reading cell 0.
MachineSpec reject_all();
/// Writes a fair coin flip into cell 0 and accepts.
MachineSpec fair_coin();

struct RandomMachineOptions {
  int working_states = 4;
  /// Chance a row jumps to ACCEPT/REJECT.
  double halt_probability = 0.02;
  /// Chance a row is probabilistic with two successors.
  double random_row_probability = 0.0;
  /// Chance a working state becomes an oracle query state instead.
  double query_probability = 0.0;
  std::string oracle = "parity";
  std::int64_t local_width = 256;
};

/// Total (on {0,1,_}) random machine; reproducible from the rng state.
MachineSpec random_machine(Rng& rng, const RandomMachineOptions& options = {});

}  // namespace relmachine::corpus
