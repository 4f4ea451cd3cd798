// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <exception>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relmachine/machine.hpp"
#include "relmachine/oracle.hpp"
#include "relmachine/rng.hpp"
#include "relmachine/tape.hpp"
#include "relmachine/trace.hpp"

namespace relmachine {

/// How the reference global machine spends steps on one delta' application.
enum class Schedule {
  kMicro,  ///< read, lookup, write, commit: 4 global steps
  kFused,  ///< 1 global step, like a plain TM step
};
std::string_view schedule_name(Schedule s) noexcept;
Schedule schedule_from_name(std::string_view name);

/// Number of no-op scrap steps inserted before each local update.
struct Padding {
  enum class Kind { kConst, kUniform, kChoice, kSequence };

  Kind kind = Kind::kConst;
  std::vector<std::int64_t> values{0};

  static Padding constant(std::int64_t n);
  static Padding uniform(std::int64_t lo, std::int64_t hi);
  static Padding choice(std::int64_t a, std::int64_t b);
  /// values[i mod size] before update i.
  static Padding sequence(std::vector<std::int64_t> values);
  /// "const:9", "uniform:0:100", "choice:1:9", "seq:0,8".
  static Padding parse(std::string_view text);

  std::int64_t sample(Rng& rng, std::int64_t update_index) const;
  std::string describe() const;
};

struct GlobalConfig {
  Schedule schedule = Schedule::kMicro;
  Padding padding;
  SnapshotMode snapshots = SnapshotMode::kFull;
};

struct SpoofResult {
  bool found = false;
  std::string candidate;
  std::int64_t candidates_tried = 0;
  std::int64_t search_steps = 0;   ///< global steps before the install
  std::int64_t install_steps = 0;  ///< global steps of the install itself
  std::int64_t local_steps = 0;    ///< tau advance (1 when found)
};

/// A global machine simulating an encoded local machine on one tape:
/// [encoding of M'][S'][scrap ...]. All tape traffic goes through the access
/// guard; every executed micro-op is one global step.
class RelativeModel {
 public:
  /// Throws LayoutError when the layout overlaps or is too small, and
  /// MalformedInput for a spec outside the {0,1,_} local alphabet.
  RelativeModel(const MachineSpec& local_spec, std::string_view local_input, const TapeLayout& layout,
                std::vector<OracleBinding> oracles, std::uint64_t seed, GlobalConfig config = {},
                std::int64_t head = 0);

  /// [0, |enc|) encoding, then `local_width` cells of S', then scrap.
  static TapeLayout auto_layout(const MachineSpec& local_spec, std::int64_t local_width);

  /// Executes exactly one micro-op; plans the next local update first when
  /// nothing is pending.
  void global_step();
  /// Runs global steps until tau increases. PreconditionError when halted.
  void advance_local();
  /// advance_local until halt or `max_local_steps`; kTimeout when not halted.
  Outcome run(std::int64_t max_local_steps);

  /// Searches {0,1}^cells candidates for S' cells [0, cells) (lexicographic,
  /// at most candidate_bound) on which M' accepts within `horizon` steps from
  /// the current (head, q'), simulating in scrap, and installs the first hit
  /// as the next local update.
  SpoofResult spoof_accept(std::int64_t horizon, std::int64_t candidate_bound, std::int64_t cells);

  std::int64_t t() const noexcept { return t_; }
  std::int64_t tau() const noexcept { return tau_; }
  std::int64_t tau_tilde() const noexcept { return tau_tilde_; }
  const Trace& trace() const noexcept { return trace_; }
  const Tape& tape() const noexcept { return tape_; }
  const TapeLayout& layout() const noexcept { return layout_; }
  const MachineSpec& local_spec() const noexcept { return local_spec_; }
  /// Head in local coordinates (0 = first cell of S').
  const MachineConfig& local_config() const noexcept { return local_; }
  Outcome outcome() const noexcept;
  bool halted() const noexcept { return local_spec_.is_halting(local_.state); }
  TapeState local_tape() const { return tape_.snapshot(layout_.local); }
  /// Symbols of S' as a string.
  std::string local_string() const { return local_tape().render(); }
  /// |Delta| of the interval in progress.
  std::int64_t current_runtime_set_size() const noexcept { return current_delta_size_; }
  const std::vector<WriteOp>& current_writes() const noexcept { return current_writes_; }
  bool update_pending() const noexcept { return !plan_.empty(); }

 private:
  struct PlannedOp {
    MicroOp op = MicroOp::kIdle;
    Actor actor = Actor::kGlobal;
    std::optional<std::int64_t> cell;
    Access access = Access::kNone;
    Symbol symbol = kBlank;
    bool completes = false;
    MachineConfig commit;
    std::int64_t output_length = 0;
    bool query = false;
    bool spoof = false;
    std::exception_ptr error;
  };
  class Recorder;

  void plan_update();
  void plan_padding();
  void plan_query(const QueryState& q);
  void execute(const PlannedOp& op);
  void complete_update(const PlannedOp& op);
  std::int64_t absolute(std::int64_t local_cell) const noexcept { return layout_.local.begin + local_cell; }
  std::int64_t workspace() const noexcept { return layout_.scrap.begin + 1; }

  MachineSpec local_spec_;
  TapeLayout layout_;
  Tape tape_;
  std::map<std::string, OracleBinding> oracles_;
  GlobalConfig config_;
  Rng local_rng_;
  Rng adversary_rng_;

  std::int64_t t_ = 0;
  std::int64_t tau_ = 0;
  std::int64_t tau_tilde_ = 0;
  MachineConfig local_;
  std::deque<PlannedOp> plan_;
  bool pad_toggle_ = false;

  // Interval in progress.
  std::vector<SnapshotPtr> current_delta_;
  std::int64_t current_delta_size_ = 0;
  std::vector<WriteOp> current_writes_;
  std::set<std::int64_t> scrap_touched_;
  std::set<std::int64_t> local_written_;

  Trace trace_;
};

}  // namespace relmachine
