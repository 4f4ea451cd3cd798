// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/tape.hpp"

#include <algorithm>
#include <charconv>

#include "relmachine/error.hpp"

namespace relmachine {

Alphabet::Alphabet() { add(kBlank); }

Alphabet::Alphabet(std::string_view symbols) : Alphabet() {
  for (char c : symbols) add(c);
}

void Alphabet::add(Symbol s) {
  if (s == ',' || s == ':' || s == '\0')
    throw MalformedInput(std::string("symbol not allowed in an alphabet: '") + s + "'");
  auto& slot = member_[static_cast<unsigned char>(s)];
  if (slot) return;
  slot = true;
  symbols_.insert(std::lower_bound(symbols_.begin(), symbols_.end(), s), s);
}

bool Alphabet::subset_of(const Alphabet& other) const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [&](char c) { return other.contains(c); });
}

// ---------------------------------------------------------------------------

TapeState::TapeState(std::optional<Interval> region, std::int64_t origin,
                     std::vector<Symbol> cells)
    : region_(region), origin_(origin), cells_(std::move(cells)) {
  auto first = std::find_if(cells_.begin(), cells_.end(), [](Symbol s) { return s != kBlank; });
  if (first == cells_.end()) {
    cells_.clear();
    origin_ = 0;
    return;
  }
  auto last = std::find_if(cells_.rbegin(), cells_.rend(), [](Symbol s) { return s != kBlank; });
  origin_ += first - cells_.begin();
  cells_.erase(last.base(), cells_.end());
  cells_.erase(cells_.begin(), first);
}

Symbol TapeState::at(std::int64_t index) const noexcept {
  const std::int64_t rel = index - origin_;
  if (rel < 0 || rel >= static_cast<std::int64_t>(cells_.size())) return kBlank;
  return cells_[static_cast<std::size_t>(rel)];
}

std::size_t TapeState::non_blank_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](Symbol s) { return s != kBlank; }));
}

std::string TapeState::render(std::int64_t from, std::int64_t to) const {
  std::string out;
  for (std::int64_t i = from; i < to; ++i) out.push_back(at(i));
  return out;
}

std::string TapeState::render() const {
  if (region_) return render(region_->begin, region_->end);
  return render(origin_, origin_ + static_cast<std::int64_t>(cells_.size()));
}

std::string run_length_encode(const std::vector<Symbol>& cells) {
  std::string out;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    if (!out.empty()) out.push_back(',');
    out += std::to_string(j - i);
    out.push_back(':');
    out.push_back(cells[i]);
    i = j;
  }
  return out;
}

std::vector<Symbol> run_length_decode(std::string_view rle) {
  std::vector<Symbol> out;
  while (!rle.empty()) {
    const auto colon = rle.find(':');
    if (colon == std::string_view::npos || colon + 1 >= rle.size())
      throw MalformedInput("run-length string: missing ':' or symbol");
    std::size_t count = 0;
    auto [ptr, ec] = std::from_chars(rle.data(), rle.data() + colon, count);
    if (ec != std::errc() || ptr != rle.data() + colon || count == 0)
      throw MalformedInput("run-length string: bad count");
    out.insert(out.end(), count, rle[colon + 1]);
    rle.remove_prefix(colon + 2);
    if (!rle.empty()) {
      if (rle.front() != ',') throw MalformedInput("run-length string: expected ','");
      rle.remove_prefix(1);
      if (rle.empty()) throw MalformedInput("run-length string: trailing ','");
    }
  }
  return out;
}

nlohmann::json to_json(const TapeState& state) {
  nlohmann::json j;
  if (state.region())
    j["region"] = {state.region()->begin, state.region()->end};
  else
    j["region"] = nullptr;
  j["origin"] = state.origin();
  j["rle"] = run_length_encode(state.cells());
  return j;
}

TapeState tape_state_from_json(const nlohmann::json& j) {
  try {
    std::optional<Interval> region;
    if (!j.at("region").is_null())
      region = Interval{j.at("region").at(0).get<std::int64_t>(),
                        j.at("region").at(1).get<std::int64_t>()};
    return TapeState(region, j.at("origin").get<std::int64_t>(),
                     run_length_decode(j.at("rle").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("tape state: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

Tape::Tape(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

Symbol Tape::read(std::int64_t index) const noexcept {
  const std::int64_t rel = index - origin_;
  if (rel < 0 || rel >= static_cast<std::int64_t>(cells_.size())) return kBlank;
  return cells_[static_cast<std::size_t>(rel)];
}

void Tape::ensure(std::int64_t index) {
  if (cells_.empty()) {
    origin_ = index;
    cells_.assign(1, kBlank);
    return;
  }
  if (index < origin_) {
    // Grow left with slack so repeated leftward writes stay amortized O(1).
    const std::int64_t grow = std::max<std::int64_t>(origin_ - index, static_cast<std::int64_t>(cells_.size()));
    cells_.insert(cells_.begin(), static_cast<std::size_t>(grow), kBlank);
    origin_ -= grow;
  } else if (index - origin_ >= static_cast<std::int64_t>(cells_.size())) {
    cells_.resize(static_cast<std::size_t>(index - origin_ + 1), kBlank);
  }
}

void Tape::apply_write(const WriteOp& op) {
  if (!alphabet_.contains(op.symbol))
    throw MalformedInput(std::string("rejected write: symbol '") + op.symbol +
                         "' is not in the tape alphabet");
  if (op.symbol == kBlank && read(op.index) == kBlank) return;
  ensure(op.index);
  Symbol& cell = cells_[static_cast<std::size_t>(op.index - origin_)];
  if (cell != op.symbol) {
    cell = op.symbol;
    ++version_;
  }
}

void Tape::apply_writes(const std::vector<WriteOp>& ops) {
  for (const auto& op : ops) apply_write(op);
}

Interval Tape::extent() const noexcept {
  return Interval{origin_, origin_ + static_cast<std::int64_t>(cells_.size())};
}

TapeState Tape::snapshot() const { return TapeState(std::nullopt, origin_, cells_); }

TapeState Tape::snapshot(const Interval& region) const {
  std::vector<Symbol> cells;
  cells.reserve(static_cast<std::size_t>(region.width()));
  for (std::int64_t i = region.begin; i < region.end; ++i) cells.push_back(read(i));
  return TapeState(region, region.begin, std::move(cells));
}

void Tape::restore(const TapeState& state) {
  Interval span = state.region().value_or(
      Interval{state.origin(), state.origin() + static_cast<std::int64_t>(state.cells().size())});
  for (std::int64_t i = span.begin; i < span.end; ++i) apply_write({state.at(i), i, 0});
}

// ---------------------------------------------------------------------------

std::string_view region_name(Region r) noexcept {
  switch (r) {
    case Region::kEncoding: return "encoding";
    case Region::kLocal: return "local";
    case Region::kScrap: return "scrap";
    case Region::kMeasurement: return "measurement";
    case Region::kOutside: return "outside";
  }
  return "outside";
}

Region TapeLayout::classify(std::int64_t cell) const noexcept {
  if (encoding.contains(cell)) return Region::kEncoding;
  if (local.contains(cell)) return Region::kLocal;
  // Scrap grows rightward on demand.
  if (cell >= scrap.begin) return Region::kScrap;
  return Region::kOutside;
}

std::optional<LayoutIssue> check_layout(const TapeLayout& layout) {
  const std::pair<Region, const Interval*> regions[] = {
      {Region::kEncoding, &layout.encoding},
      {Region::kLocal, &layout.local},
      {Region::kScrap, &layout.scrap},
  };
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (regions[i].second->overlaps(*regions[j].second)) {
        return LayoutIssue{LayoutIssue::Kind::kOverlap, regions[i].first, regions[j].first,
                           std::string(region_name(regions[i].first)) + " and " +
                               std::string(region_name(regions[j].first)) + " regions overlap"};
      }
    }
  }
  if (layout.scrap.begin < std::max(layout.encoding.end, layout.local.end))
    return LayoutIssue{LayoutIssue::Kind::kOverlap, Region::kScrap, Region::kLocal,
                       "scrap region must lie to the right of the other regions"};
  if (layout.measurement && !layout.local.contains(*layout.measurement))
    return LayoutIssue{LayoutIssue::Kind::kMeasurementOutsideLocal, Region::kMeasurement,
                       Region::kLocal, "measurement region lies outside the local region"};
  return std::nullopt;
}

nlohmann::json to_json(const TapeLayout& layout) {
  nlohmann::json j = {
      {"encoding", {layout.encoding.begin, layout.encoding.end}},
      {"local", {layout.local.begin, layout.local.end}},
      {"scrap", {layout.scrap.begin, layout.scrap.end}},
  };
  if (layout.measurement)
    j["measurement"] = {layout.measurement->begin, layout.measurement->end};
  return j;
}

TapeLayout tape_layout_from_json(const nlohmann::json& j) {
  auto interval = [](const nlohmann::json& v) {
    return Interval{v.at(0).get<std::int64_t>(), v.at(1).get<std::int64_t>()};
  };
  TapeLayout layout{interval(j.at("encoding")), interval(j.at("local")), interval(j.at("scrap")),
                    std::nullopt};
  if (j.contains("measurement")) layout.measurement = interval(j.at("measurement"));
  return layout;
}

std::string_view actor_name(Actor a) noexcept {
  return a == Actor::kLocal ? "local" : "global";
}

void AccessGuard::check_read(Actor actor, std::int64_t cell) const {
  if (actor == Actor::kLocal && !layout_->local.contains(cell))
    throw GuardViolation("local", cell, std::string(region_name(layout_->classify(cell))));
}

void AccessGuard::check_write(Actor actor, std::int64_t cell) const {
  check_read(actor, cell);
  if (actor == Actor::kGlobal && layout_->encoding.contains(cell))
    throw GuardViolation("global", cell, "encoding");
}

}  // namespace relmachine
