// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/error.hpp"

#include <utility>

namespace relmachine {

GuardViolation::GuardViolation(std::string actor, long long cell, std::string region)
    : Error("access guard: " + actor + "-tagged access to cell " + std::to_string(cell) +
            " in " + region + " region"),
      actor_(std::move(actor)),
      cell_(cell),
      region_(std::move(region)) {}

UndefinedTransition::UndefinedTransition(char symbol, std::string state)
    : Error(std::string("undefined transition for symbol '") + symbol + "' in state " + state),
      symbol_(symbol),
      state_(std::move(state)) {}

}  // namespace relmachine
