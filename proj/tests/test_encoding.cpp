// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "relmachine/corpus.hpp"
#include "relmachine/error.hpp"
#include "relmachine/machine.hpp"

using namespace relmachine;

namespace {

std::vector<MachineSpec> corpus_machines() {
  return {corpus::unary_increment(), corpus::accept_on_blank(), corpus::oscillator(),
          corpus::equality_checker(), corpus::first_cell_one(),  corpus::reject_all(),
          corpus::fair_coin()};
}

MachineSpec random_spec(Rng& rng) {
  corpus::RandomMachineOptions opt;
  opt.working_states = static_cast<int>(rng.between(1, 9));
  opt.random_row_probability = rng.coin() ? 0.3 : 0.0;
  opt.query_probability = rng.coin() ? 0.3 : 0.0;
  opt.local_width = rng.between(8, 512);
  return corpus::random_machine(rng, opt);
}

}  // namespace

TEST_SUITE("encoding") {
  TEST_CASE("corpus machines round trip") {
    for (const auto& m : corpus_machines()) {
      CAPTURE(m.name);
      CHECK(decode_machine(encode_machine(m)) == m);
    }
  }

  TEST_CASE("random machines round trip") {
    Rng rng(2026);
    for (int i = 0; i < 1000; ++i) {
      const MachineSpec m = random_spec(rng);
      const Bits bits = encode_machine(m);
      REQUIRE(decode_machine(bits) == m);
      std::size_t used = 0;
      Bits padded = bits;
      padded.push_back(true);
      padded.push_back(false);
      CHECK(decode_machine_prefix(padded, used) == m);
      CHECK(used == bits.size());
    }
  }

  TEST_CASE("distinct machines get distinct encodings") {
    std::set<std::string> seen;
    const auto machines = corpus_machines();
    for (const auto& m : machines) seen.insert(to_string(encode_machine(m)));
    CHECK(seen.size() == machines.size());

    Rng rng(5);
    std::set<std::string> random_seen;
    std::vector<MachineSpec> specs;
    for (int i = 0; i < 200; ++i) {
      specs.push_back(random_spec(rng));
      random_seen.insert(to_string(encode_machine(specs.back())));
    }
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      bool dup = false;
      for (std::size_t j = 0; j < i; ++j) dup = dup || specs[i] == specs[j];
      distinct += dup ? 0 : 1;
    }
    CHECK(random_seen.size() == distinct);
  }

  TEST_CASE("unary increment encoding length is pinned") {
    // Regression constant for the current layout.
    CHECK(encode_machine(corpus::unary_increment()).size() == 408);
  }

  TEST_CASE("empty and trailing input is malformed") {
    CHECK_THROWS_AS(decode_machine(Bits{}), MalformedInput);
    Bits bits = encode_machine(corpus::unary_increment());
    bits.push_back(false);
    CHECK_THROWS_AS(decode_machine(bits), MalformedInput);
  }

  TEST_CASE("every strict prefix is malformed") {
    const Bits bits = encode_machine(corpus::equality_checker());
    for (std::size_t n = 0; n < bits.size(); ++n) {
      const Bits prefix(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(n));
      CHECK_THROWS_AS(decode_machine(prefix), MalformedInput);
    }
  }

  TEST_CASE("single bit flips never crash the decoder") {
    std::vector<MachineSpec> machines = corpus_machines();
    Rng rng(17);
    for (int i = 0; i < 10; ++i) machines.push_back(random_spec(rng));
    for (const auto& m : machines) {
      const Bits bits = encode_machine(m);
      for (std::size_t i = 0; i < bits.size(); ++i) {
        Bits flipped = bits;
        flipped[i] = !flipped[i];
        try {
          const MachineSpec d = decode_machine(flipped);
          CHECK_FALSE(d == m);
          CHECK_NOTHROW(d.validate());
        } catch (const MalformedInput&) {
        }
      }
    }
  }

  TEST_CASE("bit string helpers") {
    CHECK(to_string(bits_from_string("1011")) == "1011");
    CHECK_THROWS_AS(bits_from_string("10x"), MalformedInput);
  }
}
