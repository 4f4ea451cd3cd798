// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace relmachine {

/// Root of every error the library throws on purpose. The CLI maps the
/// subclasses onto exit codes (see ExitCode).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that cannot be parsed or violates a schema/spec invariant.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// A region layout that overlaps or cannot hold the requested contents.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// An actor touched a tape region it has no access to.
class GuardViolation : public Error {
 public:
  GuardViolation(std::string actor, long long cell, std::string region);

  const std::string& actor() const noexcept { return actor_; }
  long long cell() const noexcept { return cell_; }
  const std::string& region() const noexcept { return region_; }

 private:
  std::string actor_;
  long long cell_;
  std::string region_;
};

/// delta is partial; reaching an unmapped (symbol, state) pair is an error,
/// not an implicit REJECT.
class UndefinedTransition : public Error {
 public:
  UndefinedTransition(char symbol, std::string state);

  char symbol() const noexcept { return symbol_; }
  const std::string& state() const noexcept { return state_; }

 private:
  char symbol_;
  std::string state_;
};

/// Operation called outside its precondition (e.g. stepping a halted machine).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// Trace lacks the data a metric needs (e.g. summary-mode snapshots).
class MissingData : public Error {
 public:
  using Error::Error;
};

enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kMalformed = 2,
  kGuard = 3,
  kRuntime = 4,
};

}  // namespace relmachine
