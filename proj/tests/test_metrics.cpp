// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "relmachine/error.hpp"
#include "relmachine/metrics.hpp"
#include "test_support.hpp"

using namespace relmachine;
using relmachine::test::make_model;
using relmachine::test::query_machine;

namespace {

Trace clock_only(std::vector<std::int64_t> K) {
  Trace t;
  t.mode = SnapshotMode::kSummary;
  t.K = std::move(K);
  for (std::size_t i = 0; i < t.K.size(); ++i) {
    UpdateRecord u;
    u.tau = static_cast<std::int64_t>(i) + 1;
    u.k = t.K[i];
    u.output_length = 1;
    t.updates.push_back(u);
    t.runtime_set_sizes.push_back(t.K[i] - (i == 0 ? 0 : t.K[i - 1]) - 1);
  }
  return t;
}

OracleBinding scribbler(std::int64_t scrap_cells, std::int64_t out) {
  OracleBinding b;
  b.id = "scribbler";
  b.copy_argument = false;
  b.output_length = [out](std::int64_t) { return out; };
  b.evaluator = [scrap_cells, out](const Bits&, OracleContext& ctx) {
    for (std::int64_t i = 0; i < scrap_cells; ++i) ctx.scrap_write(i, true);
    return Bits(static_cast<std::size_t>(out), true);
  };
  return b;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("time dilation from K") {
    const Trace t = clock_only({1, 10});
    CHECK(lorentz_time(t, 0) == 1);
    CHECK(lorentz_time(t, 1) == 9);
    CHECK_THROWS_AS(lorentz_time(t, 2), PreconditionError);
    CHECK_THROWS_AS(lorentz_time(t, -1), PreconditionError);
  }

  TEST_CASE("time-only report from a clock-only trace") {
    const Trace t = clock_only({1, 10, 19});
    const auto report = metrics_report(t, true);
    REQUIRE(report.per_tau.size() == 2);
    CHECK(report.per_tau[0].tau == 1);
    CHECK(report.per_tau[0].k_tau == 1);
    CHECK(report.per_tau[0].gamma_t == 9);
    CHECK(report.per_tau[1].gamma_t == 9);
    CHECK_FALSE(report.per_tau[0].g_tau.has_value());
    CHECK_THROWS_AS(metrics_report(t, false), MissingData);
    CHECK_THROWS_AS(metrics_report(clock_only({}), true), MalformedInput);
  }

  TEST_CASE("one global step per local step gives unit dilation") {
    auto m = make_model(corpus::unary_increment(), "1111", {Schedule::kFused, {}, SnapshotMode::kFull});
    m.run(10);
    for (std::int64_t tau = 0; tau < m.tau(); ++tau) CHECK(lorentz_time(m.trace(), tau) == 1);
    auto p = make_model(corpus::unary_increment(), "1111", {Schedule::kFused, Padding::constant(4), SnapshotMode::kFull});
    p.run(10);
    for (std::int64_t tau = 0; tau < p.tau(); ++tau) CHECK(lorentz_time(p.trace(), tau) == 5);
  }

  TEST_CASE("space dilation of a scrap-heavy query") {
    // 160 scrap cells plus 16 output cells over 16 output symbols.
    auto m = make_model(query_machine("scribbler", 0, 16), "", {}, 1, 64, {scribbler(160, 16)});
    m.advance_local();
    CHECK(m.trace().g(1) == 176);
    CHECK(space_used(m.trace(), 1) == 176);
    CHECK(lorentz_space(m.trace(), 0, 16) == Rational{11, 1});
  }

  TEST_CASE("space dilation of a plain write query") {
    auto m = make_model(query_machine("delivery", 0, 16), "", {}, 1, 64,
                        {oracles::constant("delivery", Bits(16, true))});
    m.advance_local();
    CHECK(m.trace().updates[0].scrap_cells == 0);
    CHECK(lorentz_space(m.trace(), 0, 16) == Rational{1, 1});
  }

  TEST_CASE("identical footprints give zero space dilation") {
    auto m = make_model(corpus::unary_increment(), "111", {Schedule::kFused, {}, SnapshotMode::kFull});
    m.run(10);
    REQUIRE(m.tau() >= 3);
    CHECK(lorentz_space(m.trace(), 1, 1) == Rational{0, 1});
    CHECK_THROWS_AS(lorentz_space(m.trace(), 1, 0), PreconditionError);
    CHECK_THROWS_AS(lorentz_space(m.trace(), 99, 1), PreconditionError);
  }

  TEST_CASE("space recount agrees with the recorded footprint") {
    auto parity = make_model(query_machine("parity", 8, 1), test::ones_and_zeros(8));
    parity.advance_local();
    CHECK(space_used(parity.trace(), 1) == 10);

    auto padded = make_model(corpus::unary_increment(), "11",
                             {Schedule::kFused, Padding::constant(5), SnapshotMode::kFull});
    padded.run(10);
    for (std::int64_t tau = 1; tau <= padded.tau(); ++tau) CHECK(space_used(padded.trace(), tau) == 2);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      corpus::RandomMachineOptions opt;
      opt.query_probability = 0.3;
      opt.local_width = 32;
      auto m = make_model(corpus::random_machine(rng, opt), test::ones_and_zeros(32),
                          {Schedule::kMicro, Padding::uniform(0, 3), SnapshotMode::kFull}, seed, 64);
      try {
        m.run(40);
      } catch (const Error&) {
      }
      for (std::int64_t tau = 1; tau <= m.tau(); ++tau) CHECK(space_used(m.trace(), tau) == m.trace().g(tau));
    }
  }

  TEST_CASE("space recount needs full snapshots") {
    auto m = make_model(corpus::unary_increment(), "1", {Schedule::kMicro, {}, SnapshotMode::kSummary});
    m.run(5);
    CHECK_THROWS_AS(space_used(m.trace(), 1), MissingData);
  }

  TEST_CASE("parity complexity profile") {
    std::vector<RelativeModel> models;
    std::vector<std::int64_t> sizes{4, 8, 16, 32};
    for (auto n : sizes) {
      models.push_back(make_model(query_machine("parity", n, 1), test::ones_and_zeros(n)));
      models.back().run(1);
    }
    std::vector<SizedTrace> runs;
    for (std::size_t i = 0; i < sizes.size(); ++i) runs.push_back({sizes[i], &models[i].trace()});
    const auto profile = complexity_profile("parity", runs);
    CHECK(profile.local_constant());
    CHECK(profile.global_strictly_increasing());
    REQUIRE(profile.slope_estimate.has_value());
    CHECK(*profile.slope_estimate > 0.8);
    CHECK(*profile.slope_estimate < 1.2);
    CHECK(to_csv(profile).rfind("n,local,global,scrap,output\n", 0) == 0);
    CHECK(complexity_profile("parity", {}).rows.empty());
  }

  TEST_CASE("log-log slope") {
    CHECK(log_log_slope({{1, 1}, {2, 4}, {4, 16}}).value() == doctest::Approx(2.0));
    CHECK_FALSE(log_log_slope({{2, 4}}).has_value());
    CHECK_FALSE(log_log_slope({{2, 4}, {2, 8}}).has_value());
  }

  TEST_CASE("rationals are normalized") {
    CHECK(Rational::make(6, -4) == Rational{-3, 2});
    CHECK(Rational::make(0, 5) == Rational{0, 1});
    CHECK(Rational::make(176, 16).str() == "11");
    CHECK_THROWS_AS(Rational::make(1, 0), PreconditionError);
  }

  TEST_CASE("csv and json carry the same values") {
    auto m = make_model(corpus::unary_increment(), "111", {Schedule::kMicro, Padding::sequence({0, 3, 7}), SnapshotMode::kFull});
    m.run(10);
    const auto report = metrics_report(m.trace(), false);
    const auto j = to_json(report);
    std::istringstream csv(to_csv(report));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "tau,k_tau,gamma_t,g_tau,gamma_g");
    for (const auto& row : j.at("per_tau")) {
      REQUIRE(std::getline(csv, line));
      std::ostringstream expect;
      expect << row.at("tau").get<std::int64_t>() << ',' << row.at("k_tau").get<std::int64_t>() << ','
             << row.at("gamma_t").get<std::int64_t>() << ',' << row.at("g_tau").get<std::int64_t>() << ','
             << row.at("gamma_g").dump();
      CHECK(line == expect.str());
    }
    CHECK_FALSE(std::getline(csv, line));
  }
}
