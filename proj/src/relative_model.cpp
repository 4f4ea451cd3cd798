// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/relative_model.hpp"

#include <charconv>
#include <sstream>

#include "relmachine/error.hpp"

namespace relmachine {
namespace {

const Alphabet& global_alphabet() {
  static const Alphabet a("01_#");
  return a;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw MalformedInput("expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string_view schedule_name(Schedule s) noexcept { return s == Schedule::kMicro ? "micro" : "fused"; }

Schedule schedule_from_name(std::string_view name) {
  if (name == "micro") return Schedule::kMicro;
  if (name == "fused") return Schedule::kFused;
  throw MalformedInput("schedule must be micro or fused");
}

// --- padding ----------------------------------------------------------------

Padding Padding::constant(std::int64_t n) {
  if (n < 0) throw MalformedInput("padding must be non-negative");
  return {Kind::kConst, {n}};
}

Padding Padding::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi < lo) throw MalformedInput("uniform padding needs 0 <= lo <= hi");
  return {Kind::kUniform, {lo, hi}};
}

Padding Padding::choice(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) throw MalformedInput("padding must be non-negative");
  return {Kind::kChoice, {a, b}};
}

Padding Padding::sequence(std::vector<std::int64_t> values) {
  if (values.empty()) throw MalformedInput("padding sequence is empty");
  for (auto v : values)
    if (v < 0) throw MalformedInput("padding must be non-negative");
  return {Kind::kSequence, std::move(values)};
}

Padding Padding::parse(std::string_view text) {
  const auto parts = split(text, ':');
  const auto& kind = parts.front();
  if (kind == "const" && parts.size() == 2) return constant(parse_int(parts[1]));
  if (kind == "uniform" && parts.size() == 3) return uniform(parse_int(parts[1]), parse_int(parts[2]));
  if (kind == "choice" && parts.size() == 3) return choice(parse_int(parts[1]), parse_int(parts[2]));
  if ((kind == "seq" || kind == "sequence") && parts.size() == 2) {
    std::vector<std::int64_t> values;
    for (auto v : split(parts[1], ',')) values.push_back(parse_int(v));
    return sequence(std::move(values));
  }
  throw MalformedInput("padding must look like const:N, uniform:A:B, choice:A:B or seq:A,B,...");
}

std::int64_t Padding::sample(Rng& rng, std::int64_t update_index) const {
  switch (kind) {
    case Kind::kConst: return values.at(0);
    case Kind::kUniform: return rng.between(values.at(0), values.at(1));
    case Kind::kChoice: return rng.coin() ? values.at(1) : values.at(0);
    case Kind::kSequence:
      return values[static_cast<std::size_t>(update_index) % values.size()];
  }
  return 0;
}

std::string Padding::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kConst: os << "const:" << values.at(0); break;
    case Kind::kUniform: os << "uniform:" << values.at(0) << ':' << values.at(1); break;
    case Kind::kChoice: os << "choice:" << values.at(0) << ':' << values.at(1); break;
    case Kind::kSequence:
      os << "seq:";
      for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
      break;
  }
  return os.str();
}

// --- oracle workspace recorder -------------------------------------------

/// Runs an evaluator against the scrap region without touching the tape:
/// every call is queued as a micro-op, and reads see the queued writes.
class RelativeModel::Recorder final : public OracleContext {
 public:
  Recorder(RelativeModel& model, std::int64_t base, std::int64_t arg_length, std::int64_t last_interval)
      : model_(model), base_(base), arg_length_(arg_length), last_interval_(last_interval) {}

  bool scrap_read(std::int64_t offset) override {
    const std::int64_t cell = checked(offset);
    PlannedOp op;
    op.op = MicroOp::kScrapRead;
    op.cell = cell;
    op.access = Access::kRead;
    model_.plan_.push_back(op);
    auto it = pending_.find(cell);
    return it != pending_.end() ? it->second : model_.tape_.read(cell) == '1';
  }

  void scrap_write(std::int64_t offset, bool bit) override {
    const std::int64_t cell = checked(offset);
    PlannedOp op;
    op.op = MicroOp::kScrapWrite;
    op.cell = cell;
    op.access = Access::kWrite;
    op.symbol = bit ? '1' : '0';
    model_.plan_.push_back(op);
    pending_[cell] = bit;
  }

  void tick(std::int64_t n) override {
    if (n < 0) throw OracleFailure("negative tick count");
    PlannedOp op;
    op.op = MicroOp::kCompute;
    for (std::int64_t i = 0; i < n; ++i) model_.plan_.push_back(op);
  }

  std::int64_t last_update_interval() const override { return last_interval_; }
  std::int64_t argument_length() const override { return arg_length_; }

  void note_write(std::int64_t cell, bool bit) { pending_[cell] = bit; }

 private:
  std::int64_t checked(std::int64_t offset) const {
    if (offset < 0) throw OracleFailure("oracle addressed a negative scrap offset");
    return base_ + offset;
  }

  RelativeModel& model_;
  std::int64_t base_;
  std::int64_t arg_length_;
  std::int64_t last_interval_;
  std::map<std::int64_t, bool> pending_;
};

// --- construction -------------------------------------------------------

TapeLayout RelativeModel::auto_layout(const MachineSpec& local_spec, std::int64_t local_width) {
  const auto enc = static_cast<std::int64_t>(encode_machine(local_spec).size());
  TapeLayout layout;
  layout.encoding = {0, enc};
  layout.local = {enc, enc + local_width};
  layout.scrap = {enc + local_width, enc + local_width + 64};
  return layout;
}

RelativeModel::RelativeModel(const MachineSpec& local_spec, std::string_view local_input,
                             const TapeLayout& layout, std::vector<OracleBinding> oracles,
                             std::uint64_t seed, GlobalConfig config, std::int64_t head)
    : layout_(layout),
      tape_(global_alphabet()),
      config_(std::move(config)),
      local_rng_(derive_seed(seed, 1)),
      adversary_rng_(derive_seed(seed, 2)) {
  if (const auto issue = check_layout(layout_)) throw LayoutError(issue->message);
  local_spec.validate();
  if (!local_spec.alphabet.subset_of(Alphabet::binary()))
    throw MalformedInput("local machines use the alphabet {0,1,_}");

  const Bits bits = encode_machine(local_spec);
  if (static_cast<std::int64_t>(bits.size()) > layout_.encoding.width())
    throw LayoutError("layout too small: encoding needs " + std::to_string(bits.size()) +
                      " cells, region has " + std::to_string(layout_.encoding.width()));
  if (static_cast<std::int64_t>(local_input.size()) > layout_.local.width())
    throw LayoutError("layout too small: input has " + std::to_string(local_input.size()) +
                      " cells, local region has " + std::to_string(layout_.local.width()));
  if (head < 0 || head >= layout_.local.width()) throw LayoutError("initial head outside the local region");

  for (std::size_t i = 0; i < bits.size(); ++i)
    tape_.apply_write({bits[i] ? '1' : '0', layout_.encoding.begin + static_cast<std::int64_t>(i), 0});
  for (std::size_t i = 0; i < local_input.size(); ++i) {
    const Symbol s = local_input[i];
    if (!Alphabet::binary().contains(s))
      throw MalformedInput(std::string("input symbol '") + s + "' outside {0,1,_}");
    tape_.apply_write({s, layout_.local.begin + static_cast<std::int64_t>(i), 0});
  }

  // M' is whatever the encoding region decodes to.
  Bits stored;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(bits.size()); ++i)
    stored.push_back(tape_.read(layout_.encoding.begin + i) == '1');
  local_spec_ = decode_machine(stored);

  for (auto& o : oracles) {
    const std::string id = o.id;
    oracles_.insert_or_assign(id, std::move(o));
  }
  local_ = {head, local_spec_.start};

  trace_.mode = config_.snapshots;
  trace_.layout = layout_;
  trace_.machine = local_spec_.name;
  trace_.seed = seed;
  trace_.local_states.push_back(local_tape());
  trace_.local_configs.push_back(local_);
}

Outcome RelativeModel::outcome() const noexcept {
  if (local_.state == local_spec_.accept) return Outcome::kAccept;
  if (local_.state == local_spec_.reject) return Outcome::kReject;
  return Outcome::kRunning;
}

// --- planning -----------------------------------------------------------

void RelativeModel::plan_padding() {
  const std::int64_t n = config_.padding.sample(adversary_rng_, tau_);
  for (std::int64_t i = 0; i < n; ++i) {
    PlannedOp op;
    op.op = MicroOp::kPad;
    op.cell = layout_.scrap.begin;
    op.access = Access::kWrite;
    op.symbol = pad_toggle_ ? '1' : '0';
    pad_toggle_ = !pad_toggle_;
    plan_.push_back(op);
  }
}

void RelativeModel::plan_update() {
  if (halted()) {
    plan_.push_back(PlannedOp{});
    return;
  }
  plan_padding();
  if (const QueryState* q = local_spec_.query(local_.state)) {
    plan_query(*q);
    return;
  }

  const std::int64_t cell = absolute(local_.head);
  const Symbol read = tape_.read(cell);
  PlannedOp lookup;
  Action action;
  try {
    const ResolvedAction r = resolve(local_spec_, read, local_.state, &local_rng_);
    action = r.action;
    if (r.draw) trace_.rng_log.push_back({t_, tau_, *r.draw, *r.branch});
  } catch (const Error&) {
    lookup.error = std::current_exception();
  }
  const MachineConfig next{local_.head + delta(action.move), action.next};

  if (config_.schedule == Schedule::kFused) {
    PlannedOp op;
    op.op = MicroOp::kFused;
    op.actor = Actor::kLocal;
    op.cell = cell;
    op.access = Access::kWrite;
    op.symbol = action.write;
    op.completes = true;
    op.commit = next;
    op.output_length = 1;
    op.error = lookup.error;
    plan_.push_back(op);
    return;
  }

  PlannedOp read_op;
  read_op.op = MicroOp::kRead;
  read_op.actor = Actor::kLocal;
  read_op.cell = cell;
  read_op.access = Access::kRead;
  plan_.push_back(read_op);

  lookup.op = MicroOp::kLookup;
  lookup.cell = layout_.encoding.begin;
  lookup.access = Access::kRead;
  plan_.push_back(lookup);

  PlannedOp write_op;
  write_op.op = MicroOp::kWrite;
  write_op.actor = Actor::kLocal;
  write_op.cell = cell;
  write_op.access = Access::kWrite;
  write_op.symbol = action.write;
  plan_.push_back(write_op);

  PlannedOp commit;
  commit.op = MicroOp::kCommit;
  commit.actor = Actor::kLocal;
  commit.completes = true;
  commit.commit = next;
  commit.output_length = 1;
  plan_.push_back(commit);
}

void RelativeModel::plan_query(const QueryState& q) {
  const std::size_t planned_before = plan_.size();
  try {
    auto it = oracles_.find(q.oracle);
    if (it == oracles_.end()) throw OracleFailure("no oracle bound to identifier '" + q.oracle + "'");
    const OracleBinding& binding = it->second;

    PlannedOp lookup;
    lookup.op = MicroOp::kLookup;
    lookup.cell = layout_.encoding.begin;
    lookup.access = Access::kRead;
    plan_.push_back(lookup);

    std::vector<std::int64_t> arg_cells;
    for (const auto& r : q.arg_regions)
      for (std::int64_t i = r.begin; i < r.end; ++i) {
        if (i >= layout_.local.width()) throw OracleFailure("argument region leaves S'");
        arg_cells.push_back(absolute(i));
      }
    Bits x;
    for (auto c : arg_cells) x.push_back(tape_.read(c) == '1');

    const std::int64_t last = tau_ == 0 ? 0 : trace_.k(tau_) - trace_.k(tau_ - 1);
    Recorder recorder(*this, workspace(), static_cast<std::int64_t>(x.size()), last);
    if (binding.copy_argument) {
      for (std::size_t i = 0; i < arg_cells.size(); ++i) {
        PlannedOp read;
        read.op = MicroOp::kArgRead;
        read.cell = arg_cells[i];
        read.access = Access::kRead;
        plan_.push_back(read);
        PlannedOp write;
        write.op = MicroOp::kScrapWrite;
        write.cell = workspace() + static_cast<std::int64_t>(i);
        write.access = Access::kWrite;
        write.symbol = x[i] ? '1' : '0';
        plan_.push_back(write);
        recorder.note_write(*write.cell, x[i]);
      }
    }

    const Bits y = binding.evaluator(x, recorder);
    const std::int64_t declared = binding.output_length(static_cast<std::int64_t>(x.size()));
    if (static_cast<std::int64_t>(y.size()) != declared)
      throw OracleFailure("oracle '" + q.oracle + "' produced " + std::to_string(y.size()) +
                          " bits, declared " + std::to_string(declared));
    if (q.out_region.width() != declared || q.out_region.end > layout_.local.width())
      throw OracleFailure("output region of '" + q.oracle + "' cannot hold exactly " +
                          std::to_string(declared) + " bits inside S'");

    for (std::int64_t i = 0; i < declared; ++i) {
      PlannedOp out;
      out.op = MicroOp::kOutput;
      out.cell = absolute(q.out_region.begin + i);
      out.access = Access::kWrite;
      out.symbol = y[static_cast<std::size_t>(i)] ? '1' : '0';
      plan_.push_back(out);
    }
    PlannedOp commit;
    commit.op = MicroOp::kCommit;
    commit.completes = true;
    commit.commit = {local_.head + delta(q.move), q.next};
    commit.output_length = declared;
    commit.query = true;
    plan_.push_back(commit);
  } catch (...) {
    plan_.resize(planned_before);
    throw;
  }
}

// --- execution ----------------------------------------------------------

void RelativeModel::global_step() {
  if (plan_.empty()) plan_update();
  const PlannedOp op = plan_.front();
  plan_.pop_front();
  try {
    execute(op);
  } catch (...) {
    plan_.clear();
    throw;
  }
}

void RelativeModel::execute(const PlannedOp& op) {
  const AccessGuard guard(&layout_);
  if (op.cell) {
    if (op.access == Access::kWrite) guard.check_write(op.actor, *op.cell);
    else guard.check_read(op.actor, *op.cell);
  }
  if (op.error) std::rethrow_exception(op.error);

  ++t_;
  std::optional<Symbol> symbol;
  bool wrote_local = false;
  if (op.cell) {
    const std::int64_t cell = *op.cell;
    const Region region = layout_.classify(cell);
    if (op.access == Access::kWrite) {
      tape_.apply_write({op.symbol, cell, t_});
      symbol = op.symbol;
      if (region == Region::kLocal) {
        current_writes_.push_back({op.symbol, cell, t_});
        local_written_.insert(cell);
        wrote_local = true;
      }
    } else {
      symbol = tape_.read(cell);
    }
    if (region == Region::kScrap) {
      scrap_touched_.insert(cell);
      if (cell >= layout_.scrap.end) layout_.scrap.end = cell + 1;
    }
  }

  if (wrote_local || op.completes) {
    ++tau_tilde_;
    trace_.K_tilde.push_back({t_, op.completes});
  }
  if (op.completes) {
    local_ = op.commit;
    complete_update(op);
  } else {
    ++current_delta_size_;
    if (config_.snapshots == SnapshotMode::kFull)
      current_delta_.push_back(std::make_shared<const TapeState>(tape_.snapshot()));
  }

  if (config_.snapshots == SnapshotMode::kFull) {
    StepRecord r;
    r.t = t_;
    r.actor = op.actor;
    r.op = op.op;
    r.cell = op.cell;
    r.symbol = symbol;
    r.access = op.access;
    r.state = local_spec_.state_name(local_.state);
    r.tau = tau_;
    r.tau_tilde = tau_tilde_;
    trace_.steps.push_back(std::move(r));
  }
}

void RelativeModel::complete_update(const PlannedOp& op) {
  ++tau_;
  trace_.K.push_back(t_);
  UpdateRecord u;
  u.tau = tau_;
  u.k = t_;
  u.scrap_cells = static_cast<std::int64_t>(scrap_touched_.size());
  u.local_cells_written = static_cast<std::int64_t>(local_written_.size());
  u.g = u.scrap_cells + u.local_cells_written;
  u.write_count = static_cast<std::int64_t>(current_writes_.size());
  u.output_length = op.output_length;
  u.query = op.query;
  u.spoof = op.spoof;
  trace_.updates.push_back(u);

  trace_.runtime_set_sizes.push_back(current_delta_size_);
  if (config_.snapshots == SnapshotMode::kFull) trace_.runtime_sets.push_back(std::move(current_delta_));
  trace_.write_ops.push_back(std::move(current_writes_));
  trace_.local_states.push_back(local_tape());
  trace_.local_configs.push_back(local_);

  current_delta_.clear();
  current_delta_size_ = 0;
  current_writes_.clear();
  scrap_touched_.clear();
  local_written_.clear();
}

void RelativeModel::advance_local() {
  if (halted() && plan_.empty())
    throw PreconditionError("local machine halted in " + local_spec_.state_name(local_.state));
  const std::int64_t start = tau_;
  while (tau_ == start) global_step();
}

Outcome RelativeModel::run(std::int64_t max_local_steps) {
  if (max_local_steps < 0) throw PreconditionError("max_local_steps must be non-negative");
  for (std::int64_t i = 0; i < max_local_steps && !halted(); ++i) advance_local();
  return halted() ? outcome() : Outcome::kTimeout;
}

// --- spoofing -----------------------------------------------------------

SpoofResult RelativeModel::spoof_accept(std::int64_t horizon, std::int64_t candidate_bound,
                                        std::int64_t cells) {
  if (!plan_.empty()) throw PreconditionError("spoof_accept needs an idle global machine");
  if (halted()) throw PreconditionError("local machine already halted");
  if (cells < 1 || cells > 30 || cells > layout_.local.width())
    throw PreconditionError("spoof candidate width must be in [1, min(30, |S'|)]");
  if (horizon < 0 || candidate_bound < 0) throw PreconditionError("negative search bound");

  const std::int64_t width = layout_.local.width();
  const std::int64_t base = workspace();
  const std::int64_t total = std::int64_t{1} << cells;
  const std::int64_t limit = std::min(total, candidate_bound);

  auto push = [&](MicroOp kind, std::optional<std::int64_t> cell, Access access, Symbol s = kBlank) {
    PlannedOp op;
    op.op = kind;
    op.cell = cell;
    op.access = access;
    op.symbol = s;
    plan_.push_back(op);
  };

  SpoofResult result;
  std::string hit;
  for (std::int64_t index = 0; index < limit && hit.empty(); ++index) {
    ++result.candidates_tried;
    std::string candidate(static_cast<std::size_t>(cells), '0');
    for (std::int64_t i = 0; i < cells; ++i)
      if ((index >> (cells - 1 - i)) & 1) candidate[static_cast<std::size_t>(i)] = '1';

    std::map<std::int64_t, Symbol> sim;  // local cell -> symbol held in scrap
    for (std::int64_t i = 0; i < cells; ++i) {
      push(MicroOp::kScrapWrite, base + i, Access::kWrite, candidate[static_cast<std::size_t>(i)]);
      sim[i] = candidate[static_cast<std::size_t>(i)];
    }
    MachineConfig c = local_;
    for (std::int64_t s = 0; s < horizon; ++s) {
      if (local_spec_.is_halting(c.state) || c.head < 0 || c.head >= width) break;
      const Action* a = nullptr;
      Symbol read;
      if (auto it = sim.find(c.head); it != sim.end()) {
        push(MicroOp::kScrapRead, base + c.head, Access::kRead);
        read = it->second;
      } else {
        push(MicroOp::kArgRead, absolute(c.head), Access::kRead);
        read = tape_.read(absolute(c.head));
      }
      push(MicroOp::kLookup, layout_.encoding.begin, Access::kRead);
      a = local_spec_.transition(read, c.state);
      if (a == nullptr) break;  // query, probabilistic or undefined: not followed
      push(MicroOp::kScrapWrite, base + c.head, Access::kWrite, a->write);
      sim[c.head] = a->write;
      push(MicroOp::kCompute, std::nullopt, Access::kNone);
      c = {c.head + delta(a->move), a->next};
    }
    if (c.state == local_spec_.accept) hit = candidate;
  }
  result.search_steps = static_cast<std::int64_t>(plan_.size());

  if (!hit.empty()) {
    result.found = true;
    result.candidate = hit;
    for (std::int64_t i = 0; i < cells; ++i) {
      PlannedOp op;
      op.op = MicroOp::kInstall;
      op.cell = absolute(i);
      op.access = Access::kWrite;
      op.symbol = hit[static_cast<std::size_t>(i)];
      plan_.push_back(op);
    }
    PlannedOp commit;
    commit.op = MicroOp::kCommit;
    commit.completes = true;
    commit.commit = local_;
    commit.output_length = cells;
    commit.spoof = true;
    plan_.push_back(commit);
    result.install_steps = cells + 1;
  }

  const std::int64_t tau_before = tau_;
  while (!plan_.empty()) global_step();
  result.local_steps = tau_ - tau_before;
  return result;
}

}  // namespace relmachine
