// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "relmachine/corpus.hpp"
#include "relmachine/error.hpp"
#include "relmachine/experiments.hpp"
#include "relmachine/scenario.hpp"
#include "relmachine/stats.hpp"

using namespace relmachine;

TEST_SUITE("experiments") {
  TEST_CASE("wilson interval reference values") {
    // Frozen from an independent implementation of the score interval.
    const auto w = wilson_interval(50, 100);
    CHECK(w.low == doctest::Approx(0.4038315303659956).epsilon(1e-12));
    CHECK(w.high == doctest::Approx(0.5961684696340044).epsilon(1e-12));
    CHECK(wilson_interval(0, 10).low == doctest::Approx(0.0));
    CHECK(wilson_interval(0, 10).high == doctest::Approx(0.2775327998628892).epsilon(1e-12));
    CHECK(wilson_interval(10, 10).low == doctest::Approx(0.7224672001371107).epsilon(1e-12));
  }

  TEST_CASE("chi-square reference values") {
    const auto c = chi_square_independence({{10, 20}, {20, 10}});
    CHECK(c.statistic == doctest::Approx(6.666666666666667).epsilon(1e-12));
    CHECK(c.dof == 1);
    CHECK(c.p_value == doctest::Approx(0.009823274507519235).epsilon(1e-9));
  }

  TEST_CASE("chance detectors stay at chance") {
    for (const auto& name : chance_detector_names()) {
      CAPTURE(name);
      const auto r = run_simtime_game(make_detector(name), {1, 9}, 2000, 42);
      CHECK(r.trials == 2000);
      CHECK(r.guard_aborts == 0);
      CHECK(r.runtime_errors == 0);
      CHECK(r.contains_chance());
    }
  }

  TEST_CASE("control arm and guard arm") {
    const auto tell = run_simtime_game(make_detector("tell-k"), {1, 9}, 500, 42);
    CHECK(tell.accuracy == 1.0);
    const auto peek = run_simtime_game(make_detector("scrap-peek"), {1, 9}, 200, 42);
    CHECK(peek.guard_aborts == 200);
  }

  TEST_CASE("degenerate pad pairs are rejected") {
    CHECK_THROWS_AS(run_simtime_game(make_detector("constant-0"), {5, 5}, 10, 1), PreconditionError);
    CHECK_THROWS_AS(make_detector("no-such-detector"), MalformedInput);
  }

  TEST_CASE("seeded reruns are identical") {
    const auto d = make_detector("majority-history");
    const auto a = run_simtime_game(d, {1, 9}, 300, 7, true);
    const auto b = run_simtime_game(d, {1, 9}, 300, 7, true);
    CHECK(a.trial_log_digest == b.trial_log_digest);
    CHECK(a.successes == b.successes);
    REQUIRE(a.log.size() == 300);
    const auto c = run_simtime_game(d, {1, 9}, 300, 8, true);
    CHECK(a.trial_log_digest != c.trial_log_digest);
  }

  TEST_CASE("probabilistic game") {
    const auto r = run_psimtime_game(make_detector("fair-coin"), {1, 9}, 4000, 42);
    CHECK(r.stats.contains_chance());
    CHECK(r.independence.p_value > 0.01);
    // a deterministic detector plays the same game either way
    const auto d = make_detector("constant-1");
    CHECK(run_psimtime_game(d, {1, 9}, 500, 3, true).stats.trial_log_digest ==
          run_simtime_game(d, {1, 9}, 500, 3, true).trial_log_digest);
  }

  TEST_CASE("measure game") {
    MeasureConfig mid;
    const auto m = run_measure_game(mid, 4000, 42);
    CHECK(m.stats.contains_chance());
    CHECK(m.envelope_violations == 0);

    MeasureConfig off;
    off.approx = ApproxKind::kOffset;
    const auto o = run_measure_game(off, 1000, 42);
    CHECK(o.approx_accuracy > 0.99);
    CHECK(o.envelope_violations > 0);

    // At the grid resolution the midpoint is a different point; f tells them apart.
    MeasureConfig fine;
    fine.detector = "point";
    fine.k_bits = 24;
    CHECK(run_measure_game(fine, 500, 42).stats.accuracy > 0.99);

    // No approximation: both alternatives deliver the same y.
    MeasureConfig exact;
    exact.approx = ApproxKind::kExact;
    exact.detector = "point";
    const auto e = run_measure_game(exact, 2000, 42);
    CHECK(e.stats.contains_chance());
    CHECK(e.envelope_violations == 0);

    MeasureConfig bad;
    bad.k_bits = 0;
    CHECK_THROWS_AS(run_measure_game(bad, 10, 1), PreconditionError);
  }

  TEST_CASE("spoof-accept scenario") {
    const auto r = run_spoof_accept_scenario(corpus::equality_checker(), 10, 8, 3, 1);
    CHECK(r.found);
    CHECK(r.candidate == "000");
    CHECK(r.install_local_steps == 1);
    CHECK(r.accepted);
    CHECK(r.global_per_local > 1.0);
    CHECK(r.accepting_candidates == std::vector<std::string>{"000", "010", "101", "111"});

    const auto none = run_spoof_accept_scenario(corpus::reject_all(), 10, 8, 3, 1);
    CHECK_FALSE(none.found);
    CHECK(none.accepting_candidates.empty());
    CHECK_FALSE(none.accepted);
  }

  TEST_CASE("oracle benchmark") {
    const auto profiles = run_oracle_benchmark({"parity", "identity"}, {1, 2, 4, 8}, 1);
    REQUIRE(profiles.size() == 2);
    for (const auto& p : profiles) {
      CHECK(p.local_constant());
      CHECK(p.global_strictly_increasing());
    }
    for (const auto& row : profiles[1].rows) CHECK(row.output_cells == row.n);
    const auto empty = run_oracle_benchmark({"parity"}, {}, 1);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].rows.empty());
    CHECK_THROWS_AS(run_oracle_benchmark({"nope"}, {1}, 1), MalformedInput);
  }

  TEST_CASE("schrodinger scenario") {
    SchrodingerOptions o;
    const auto r = run_schrodinger_scenario(Hamiltonian::pauli_x(), QuantumState::basis(1, 0),
                                            {std::numbers::pi / 8, std::numbers::pi / 4,
                                             3 * std::numbers::pi / 8, std::numbers::pi / 2},
                                            o, 1);
    CHECK(r.local_steps == 4);
    CHECK(r.max_deviation <= r.tolerance);
    CHECK(std::abs(r.final_state[0]) <= r.tolerance);
    CHECK(std::abs(r.final_state[1] - Complex(0, -1)) <= r.tolerance);

    Rng rng(11);
    const Hamiltonian h = Hamiltonian::random_hermitian(2, rng);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(i * std::numbers::pi / 20);
    SchrodingerOptions fine;
    fine.precision = 48;
    const auto q = run_schrodinger_scenario(h, QuantumState::random(2, rng), times, fine, 2);
    CHECK(q.local_steps == 10);
    CHECK(q.max_deviation <= 1e-9);
    CHECK(q.max_drift <= 1e-9);
  }

  TEST_CASE("scenario reports are reproducible") {
    const nlohmann::json config = {{"scenario", "simtime"}, {"seed", 5}, {"trials", 200}, {"detector", "constant-0"}};
    const auto a = run_scenario(config);
    const auto b = run_scenario(config);
    CHECK(strip_timestamp(a).dump() == strip_timestamp(b).dump());
    CHECK(a.at("environment").at("artifact_version") == artifact_version());
    CHECK(a.at("environment").at("config_hash") == config_hash(config));
    CHECK_THROWS_AS(run_scenario({{"scenario", "simtime"}, {"trials", 10}}), MalformedInput);
    CHECK_THROWS_AS(run_scenario({{"scenario", "warp"}, {"seed", 1}}), MalformedInput);
  }
}
