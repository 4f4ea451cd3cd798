// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "relmachine/machine.hpp"
#include "relmachine/tape.hpp"

namespace relmachine {

enum class SnapshotMode { kFull, kSummary };
std::string_view snapshot_mode_name(SnapshotMode m) noexcept;
SnapshotMode snapshot_mode_from_name(std::string_view name);

/// Global-machine micro-operations. Each executed op is one global step.
enum class MicroOp {
  kRead,        ///< read the cell under the local head
  kLookup,      ///< read delta' out of the encoding
  kWrite,       ///< write delta's symbol under the local head
  kCommit,      ///< move the local head and change q'; completes the update
  kFused,       ///< read + lookup + write + commit in one step
  kPad,         ///< adversarial busywork in scrap
  kArgRead,     ///< read an S' cell on behalf of the global machine
  kScrapRead,
  kScrapWrite,
  kCompute,     ///< internal step with no tape access
  kOutput,      ///< oracle output bit into S'
  kInstall,     ///< spoofed tape cell into S'
  kIdle,        ///< local machine halted; nothing to do
};
std::string_view micro_op_name(MicroOp op) noexcept;
MicroOp micro_op_from_name(std::string_view name);

enum class Access { kNone, kRead, kWrite };

struct StepRecord {
  std::int64_t t = 0;
  Actor actor = Actor::kGlobal;
  MicroOp op = MicroOp::kIdle;
  std::optional<std::int64_t> cell;
  std::optional<Symbol> symbol;  ///< symbol read or written
  Access access = Access::kNone;
  std::string state;             ///< q' after the step
  std::int64_t tau = 0;
  std::int64_t tau_tilde = 0;
};

/// Summary of one completed local update tau-1 -> tau.
struct UpdateRecord {
  std::int64_t tau = 0;
  std::int64_t k = 0;
  std::int64_t g = 0;                    ///< scrap cells touched + local cells written
  std::int64_t scrap_cells = 0;
  std::int64_t local_cells_written = 0;
  std::int64_t write_count = 0;          ///< |W_tau|
  std::int64_t output_length = 0;        ///< ||f(x)|| for queries, else cells written
  bool query = false;
  bool spoof = false;
};

/// A global time at which S' was partially or completely updated.
struct TildeEvent {
  std::int64_t t = 0;
  bool completes = false;
};

struct RngDraw {
  std::int64_t t = 0;
  std::int64_t tau = 0;
  double draw = 0.0;
  std::size_t branch = 0;
};

/// Everything recorded about one relative-model run. Indexing: K[i] = k_{i+1}
/// with k_0 = 0 implicit; runtime_sets[i], write_ops[i] and updates[i] cover
/// the interval (k_i, k_{i+1}]; local_states[i] = S'_{k_i}.
struct Trace {
  SnapshotMode mode = SnapshotMode::kFull;
  TapeLayout layout;
  std::string machine;
  std::uint64_t seed = 0;

  std::vector<std::int64_t> K;
  std::vector<TildeEvent> K_tilde;
  std::vector<UpdateRecord> updates;
  std::vector<std::int64_t> runtime_set_sizes;
  std::vector<std::vector<SnapshotPtr>> runtime_sets;  ///< full mode only
  std::vector<std::vector<WriteOp>> write_ops;
  std::vector<TapeState> local_states;
  std::vector<MachineConfig> local_configs;  ///< (head, q') at each k_tau
  std::vector<StepRecord> steps;             ///< full mode only
  std::vector<RngDraw> rng_log;

  /// k_tau with the k_0 = 0 convention.
  std::int64_t k(std::int64_t tau) const;
  /// g_tau with g_0 = 0.
  std::int64_t g(std::int64_t tau) const;
  /// Times in K_tilde flagged as completing an update (equals K).
  std::vector<std::int64_t> completion_times() const;
};

/// Applies W_tau in the given order to S'_{k_tau}; returns the resulting local
/// tape. Throws PreconditionError when the permutation is not a bijection.
TapeState replay_writes_permuted(const Trace& trace, std::int64_t tau,
                                 const std::vector<std::size_t>& permutation);

/// True when every cell in W_tau is written at most once.
bool distinct_write_indices(const Trace& trace, std::int64_t tau);

inline constexpr int kTraceSchemaVersion = 1;

struct TraceFooter {
  std::int64_t t = 0;
  std::int64_t tau = 0;
  std::int64_t tau_tilde = 0;
  std::string outcome;
  std::string final_local;
};

/// JSON-lines: header, step records (full mode), update records, draws, end.
void write_trace(std::ostream& out, const Trace& trace, const TraceFooter& footer);
/// Rebuilds K, updates, steps and layout; snapshots are not stored in files.
Trace read_trace(std::istream& in, TraceFooter* footer = nullptr);

nlohmann::json to_json(const StepRecord& r);
nlohmann::json to_json(const UpdateRecord& r);

}  // namespace relmachine
