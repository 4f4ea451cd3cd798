// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "relmachine/error.hpp"
#include "relmachine/rng.hpp"
#include "relmachine/tape.hpp"

using namespace relmachine;

TEST_SUITE("tape") {
  TEST_CASE("unwritten cells read as blank") {
    Tape tape;
    CHECK(tape.read(5) == kBlank);
    tape.apply_write({'1', 3, 1});
    CHECK(tape.read(3) == '1');
    CHECK(tape.read(4) == kBlank);
    CHECK(tape.read(-1000) == kBlank);
  }

  TEST_CASE("apply_write overwrites and last write wins") {
    Tape a;
    a.apply_write({'1', 3, 1});
    a.apply_write({'0', 3, 2});
    CHECK(a.read(3) == '0');

    Tape b;
    b.apply_writes({{'1', 0, 1}, {'0', 0, 2}});
    Tape c;
    c.apply_write({'0', 0, 1});
    CHECK(b.snapshot() == c.snapshot());
  }

  TEST_CASE("writes outside the alphabet are rejected") {
    Tape tape;
    CHECK_THROWS_AS(tape.apply_write({'x', 0, 1}), MalformedInput);
    CHECK(tape.read(0) == kBlank);
  }

  TEST_CASE("check_layout") {
    TapeLayout ok{{0, 10}, {10, 50}, {50, 200}, std::nullopt};
    CHECK_FALSE(check_layout(ok).has_value());

    TapeLayout overlap{{0, 10}, {5, 50}, {50, 200}, std::nullopt};
    const auto issue = check_layout(overlap);
    REQUIRE(issue.has_value());
    CHECK(issue->kind == LayoutIssue::Kind::kOverlap);
    CHECK(issue->first == Region::kEncoding);
    CHECK(issue->second == Region::kLocal);

    TapeLayout measure{{0, 10}, {10, 50}, {50, 200}, Interval{40, 60}};
    const auto m = check_layout(measure);
    REQUIRE(m.has_value());
    CHECK(m->kind == LayoutIssue::Kind::kMeasurementOutsideLocal);

    TapeLayout inside{{0, 10}, {10, 50}, {50, 200}, Interval{20, 30}};
    CHECK_FALSE(check_layout(inside).has_value());
  }

  TEST_CASE("snapshots are immutable and compare by support") {
    Tape tape;
    tape.apply_write({'1', 2, 1});
    const TapeState before = tape.snapshot();
    tape.apply_write({'0', 2, 2});
    CHECK(before.at(2) == '1');
    CHECK_FALSE(before == tape.snapshot());

    CHECK(Tape().snapshot() == Tape().snapshot());

    Tape far;
    far.apply_write({'1', 5, 1});
    CHECK(far.snapshot({0, 4}) == Tape().snapshot({0, 4}));
    CHECK_FALSE(far.snapshot({0, 6}) == Tape().snapshot({0, 6}));
  }

  TEST_CASE("blank writes do not count as support") {
    Tape a;
    a.apply_write({'1', 1, 1});
    a.apply_write({kBlank, 1, 2});
    CHECK(a.snapshot() == Tape().snapshot());
    CHECK(a.snapshot().non_blank_count() == 0);
  }

  TEST_CASE("replaying a recorded write sequence reproduces the tape") {
    Rng rng(7);
    for (int round = 0; round < 50; ++round) {
      Tape live;
      std::vector<WriteOp> log;
      for (int i = 0; i < 40; ++i) {
        const WriteOp op{"01_"[rng.below(3)], rng.between(-10, 10), i + 1};
        live.apply_write(op);
        log.push_back(op);
      }
      Tape replay;
      replay.apply_writes(log);
      CHECK(replay.snapshot() == live.snapshot());
    }
  }

  TEST_CASE("snapshot and restore round trip") {
    Rng rng(11);
    for (int round = 0; round < 50; ++round) {
      Tape tape;
      for (int i = 0; i < 30; ++i) tape.apply_write({"01_"[rng.below(3)], rng.between(0, 40), i});
      const TapeState s = tape.snapshot({0, 40});
      Tape other;
      for (int i = 0; i < 30; ++i) other.apply_write({"01"[rng.below(2)], rng.between(0, 40), i});
      other.restore(s);
      CHECK(other.snapshot({0, 40}) == s);
    }
  }

  TEST_CASE("TapeState JSON round trip is bit exact") {
    Rng rng(3);
    for (int round = 0; round < 50; ++round) {
      Tape tape;
      for (int i = 0; i < 25; ++i) tape.apply_write({"01_"[rng.below(3)], rng.between(-5, 30), i});
      for (const TapeState& s : {tape.snapshot(), tape.snapshot({-3, 17})}) {
        const auto j = to_json(s);
        const TapeState back = tape_state_from_json(j);
        CHECK(back == s);
        CHECK(back.region() == s.region());
        CHECK(to_json(back).dump() == j.dump());
      }
    }
  }

  TEST_CASE("run-length codec") {
    const std::vector<Symbol> cells{'1', '1', '0', '_', '_', '_', '1'};
    CHECK(run_length_encode(cells) == "2:1,1:0,3:_,1:1");
    CHECK(run_length_decode("2:1,1:0,3:_,1:1") == cells);
    CHECK_THROWS_AS(run_length_decode("2:1,"), MalformedInput);
    CHECK_THROWS_AS(run_length_decode("0:1"), MalformedInput);
  }

  TEST_CASE("access guard") {
    const TapeLayout layout{{0, 10}, {10, 20}, {20, 30}, std::nullopt};
    const AccessGuard guard(&layout);
    CHECK_NOTHROW(guard.check_read(Actor::kLocal, 10));
    CHECK_NOTHROW(guard.check_write(Actor::kLocal, 19));
    CHECK_THROWS_AS(guard.check_read(Actor::kLocal, 20), GuardViolation);
    CHECK_THROWS_AS(guard.check_read(Actor::kLocal, 25), GuardViolation);
    CHECK_THROWS_AS(guard.check_read(Actor::kLocal, 3), GuardViolation);
    CHECK_NOTHROW(guard.check_read(Actor::kGlobal, 3));
    CHECK_THROWS_AS(guard.check_write(Actor::kGlobal, 3), GuardViolation);
    CHECK_NOTHROW(guard.check_write(Actor::kGlobal, 500));
    CHECK_NOTHROW(guard.check_write(Actor::kGlobal, 15));
    try {
      guard.check_read(Actor::kLocal, 22);
    } catch (const GuardViolation& e) {
      CHECK(e.actor() == "local");
      CHECK(e.region() == "scrap");
      CHECK(e.cell() == 22);
    }
  }
}
