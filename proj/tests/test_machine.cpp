// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "relmachine/corpus.hpp"
#include "relmachine/error.hpp"
#include "relmachine/machine.hpp"

using namespace relmachine;

namespace {

Tape tape_from(const std::string& s) {
  Tape t;
  for (std::size_t i = 0; i < s.size(); ++i) t.apply_write({s[i], static_cast<std::int64_t>(i), 0});
  return t;
}

}  // namespace

TEST_SUITE("machine") {
  TEST_CASE("unary increment appends a 1") {
    const MachineSpec m = corpus::unary_increment();
    CHECK(m.states.size() == 3);
    for (const std::string input : {"111", "11", ""}) {
      Tape tape = tape_from(input);
      MachineConfig c{0, m.start};
      const RunResult r = run(m, c, tape, 100);
      CHECK(r.outcome == Outcome::kAccept);
      // hand trace: one step per existing 1, one for the blank
      CHECK(r.steps == static_cast<std::int64_t>(input.size()) + 1);
      CHECK(tape.snapshot().render() == input + "1");
    }
  }

  TEST_CASE("stepping a halted machine is a precondition violation") {
    const MachineSpec m = corpus::unary_increment();
    Tape tape;
    MachineConfig c{0, m.accept};
    CHECK_THROWS_AS(step(m, c, tape), PreconditionError);
  }

  TEST_CASE("degenerate probabilistic row behaves like a plain row") {
    MachineBuilder plain("plain");
    plain.on("START", '_', '0', "A", Move::kLeft);
    plain.on("A", '_', '1', "ACCEPT", Move::kRight);
    MachineBuilder prob("prob");
    prob.on_random("START", '_', {{Action{'0', prob.state("A"), Move::kLeft}, 1.0}});
    prob.on("A", '_', '1', "ACCEPT", Move::kRight);
    const MachineSpec a = plain.build();
    const MachineSpec b = prob.build();

    Tape ta;
    Tape tb;
    MachineConfig ca{0, a.start};
    MachineConfig cb{0, b.start};
    Rng rng(1);
    const auto ra = run(a, ca, ta, 10);
    const auto rb = run(b, cb, tb, 10, &rng);
    CHECK(ra.outcome == rb.outcome);
    CHECK(ra.steps == rb.steps);
    CHECK(ca == cb);
    CHECK(ta.snapshot() == tb.snapshot());
  }

  TEST_CASE("probabilistic rows need a random source") {
    const MachineSpec m = corpus::fair_coin();
    Tape tape;
    MachineConfig c{0, m.start};
    CHECK_THROWS_AS(step(m, c, tape), PreconditionError);
  }

  TEST_CASE("accept on blank halts in one step") {
    const MachineSpec m = corpus::accept_on_blank();
    Tape tape;
    MachineConfig c{0, m.start};
    const auto r = run(m, c, tape, 5);
    CHECK(r.outcome == Outcome::kAccept);
    CHECK(r.steps == 1);
  }

  TEST_CASE("oscillator times out") {
    const MachineSpec m = corpus::oscillator();
    Tape tape;
    MachineConfig c{0, m.start};
    const auto r = run(m, c, tape, 10);
    CHECK(r.outcome == Outcome::kTimeout);
    CHECK(r.steps == 10);
  }

  TEST_CASE("unmapped pairs surface as undefined transitions") {
    MachineBuilder b("partial");
    b.on("START", '1', '1', "START", Move::kRight);
    const MachineSpec m = b.build();
    Tape tape = tape_from("11");
    MachineConfig c{0, m.start};
    CHECK_THROWS_AS(run(m, c, tape, 10), UndefinedTransition);
    try {
      MachineConfig again{2, m.start};
      step(m, again, tape);
    } catch (const UndefinedTransition& e) {
      CHECK(e.symbol() == kBlank);
      CHECK(e.state() == "START");
    }
  }

  TEST_CASE("validation rejects broken specs") {
    MachineSpec m = corpus::unary_increment();
    m.transitions[{'1', m.accept}] = Action{'1', m.start, Move::kRight};
    CHECK_THROWS_AS(m.validate(), MalformedInput);

    MachineSpec p = corpus::fair_coin();
    p.probabilistic.begin()->second[0].probability = 0.7;
    CHECK_THROWS_AS(p.validate(), MalformedInput);

    MachineBuilder q("q");
    CHECK_THROWS_AS(q.query("ACCEPT", "parity", {}, {0, 1}, "START", Move::kRight).build(), MalformedInput);
  }

  TEST_CASE("seeded runs are reproducible") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng gen(seed);
      corpus::RandomMachineOptions opt;
      opt.random_row_probability = 0.4;
      const MachineSpec m = corpus::random_machine(gen, opt);
      auto once = [&] {
        Tape tape;
        MachineConfig c{0, m.start};
        Rng rng(seed * 31 + 1);
        run(m, c, tape, 200, &rng);
        return std::make_pair(c, tape.snapshot());
      };
      CHECK(once() == once());
    }
  }

  TEST_CASE("each step changes at most the cell under the head") {
    Rng gen(99);
    corpus::RandomMachineOptions opt;
    opt.random_row_probability = 0.3;
    for (int k = 0; k < 100; ++k) {
      const MachineSpec m = corpus::random_machine(gen, opt);
      Tape tape;
      MachineConfig c{0, m.start};
      Rng rng(static_cast<std::uint64_t>(k));
      for (int s = 0; s < 100 && !m.is_halting(c.state); ++s) {
        const TapeState before = tape.snapshot({-200, 200});
        const std::int64_t head = c.head;
        step(m, c, tape, &rng);
        const TapeState after = tape.snapshot({-200, 200});
        int changed = 0;
        for (std::int64_t i = -200; i < 200; ++i)
          if (before.at(i) != after.at(i)) {
            ++changed;
            CHECK(i == head);
          }
        CHECK(changed <= 1);
        CHECK(std::abs(c.head - head) == 1);
      }
    }
  }
}
