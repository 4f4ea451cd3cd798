// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/corpus.hpp"

#include <string>

namespace relmachine::corpus {

MachineSpec unary_increment() {
  return MachineBuilder("unary-increment")
      .on("START", '1', '1', "START", Move::kRight)
      .on("START", '_', '1', "ACCEPT", Move::kRight)
      .build();
}

MachineSpec accept_on_blank() {
  return MachineBuilder("accept-on-blank").on("START", '_', '_', "ACCEPT", Move::kRight).build();
}

MachineSpec oscillator() {
  MachineBuilder b("oscillator");
  for (char c : std::string("01_")) {
    b.on("START", c, c, "BACK", Move::kRight);
    b.on("BACK", c, c, "START", Move::kLeft);
  }
  return b.build();
}

MachineSpec equality_checker() {
  MachineBuilder b("equality-checker");
  b.on("START", '0', '0', "SAW0", Move::kRight);
  b.on("START", '1', '1', "SAW1", Move::kRight);
  for (char c : std::string("01")) {
    b.on("SAW0", c, c, "CMP0", Move::kRight);
    b.on("SAW1", c, c, "CMP1", Move::kRight);
  }
  b.on("CMP0", '0', '0', "ACCEPT", Move::kRight);
  b.on("CMP0", '1', '1', "REJECT", Move::kRight);
  b.on("CMP1", '1', '1', "ACCEPT", Move::kRight);
  b.on("CMP1", '0', '0', "REJECT", Move::kRight);
  return b.build();
}

MachineSpec first_cell_one() {
  return MachineBuilder("first-cell-one")
      .on("START", '1', '1', "ACCEPT", Move::kRight)
      .on("START", '0', '0', "REJECT", Move::kRight)
      .on("START", '_', '_', "REJECT", Move::kRight)
      .build();
}

MachineSpec reject_all() {
  MachineBuilder b("reject-all");
  for (char c : std::string("01_")) b.on("START", c, c, "REJECT", Move::kRight);
  return b.build();
}

MachineSpec fair_coin() {
  MachineBuilder b("fair-coin");
  const StateId accept = 1;
  for (char c : std::string("01_"))
    b.on_random("START", c,
                {{Action{'0', accept, Move::kRight}, 0.5}, {Action{'1', accept, Move::kRight}, 0.5}});
  return b.build();
}

MachineSpec random_machine(Rng& rng, const RandomMachineOptions& options) {
  MachineBuilder b("random-" + std::to_string(rng.next_u64() % 1000000));
  const int n = std::max(1, options.working_states);
  std::vector<std::string> names{"START"};
  for (int i = 1; i < n; ++i) names.push_back("W" + std::to_string(i));
  for (const auto& s : names) b.state(s);

  const std::string symbols = "01_";
  auto pick_symbol = [&] { return symbols[rng.below(symbols.size())]; };
  auto pick_move = [&] { return rng.coin() ? Move::kRight : Move::kLeft; };
  auto pick_next = [&]() -> std::string {
    if (rng.uniform01() < options.halt_probability) return rng.coin() ? "ACCEPT" : "REJECT";
    return names[rng.below(names.size())];
  };

  for (std::size_t si = 0; si < names.size(); ++si) {
    const auto& s = names[si];
    // START stays an ordinary state so every run begins with a delta step.
    if (si > 0 && rng.uniform01() < options.query_probability) {
      const std::int64_t w = std::min<std::int64_t>(8, options.local_width / 4);
      b.query(s, options.oracle, {{0, w}}, {w, w + 1}, pick_next(), pick_move());
      continue;
    }
    for (char c : symbols) {
      if (rng.uniform01() < options.random_row_probability) {
        const double p = 0.1 + 0.8 * rng.uniform01();
        const StateId a = b.state(pick_next());
        const StateId c2 = b.state(pick_next());
        b.on_random(s, c, {{Action{pick_symbol(), a, pick_move()}, p},
                           {Action{pick_symbol(), c2, pick_move()}, 1.0 - p}});
      } else {
        b.on(s, c, pick_symbol(), pick_next(), pick_move());
      }
    }
  }
  return b.build();
}

}  // namespace relmachine::corpus
