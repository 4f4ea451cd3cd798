// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace relmachine {

using Symbol = char;
inline constexpr Symbol kBlank = '_';

/// Finite alphabet; always contains the blank.
class Alphabet {
 public:
  Alphabet();
  explicit Alphabet(std::string_view symbols);

  static Alphabet binary() { return Alphabet("01_"); }

  bool contains(Symbol s) const noexcept {
    return member_[static_cast<unsigned char>(s)];
  }
  void add(Symbol s);
  /// Symbols in ascending byte order, blank included.
  const std::string& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool subset_of(const Alphabet& other) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::array<bool, 256> member_{};
  std::string symbols_;
};

/// Half-open cell interval [begin, end).
struct Interval {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t width() const noexcept { return end > begin ? end - begin : 0; }
  bool empty() const noexcept { return end <= begin; }
  bool contains(std::int64_t cell) const noexcept {
    return cell >= begin && cell < end;
  }
  bool contains(const Interval& other) const noexcept {
    return other.empty() || (other.begin >= begin && other.end <= end);
  }
  bool overlaps(const Interval& other) const noexcept {
    return !empty() && !other.empty() && begin < other.end && other.begin < end;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// W(b, s): write symbol b at cell s, applied at global time t.
struct WriteOp {
  Symbol symbol = kBlank;
  std::int64_t index = 0;
  std::int64_t global_time = 0;

  friend bool operator==(const WriteOp&, const WriteOp&) = default;
};

/// Immutable tape contents, optionally restricted to a region. Equality is
/// over the non-blank support only; the region is carried as metadata.
class TapeState {
 public:
  TapeState() = default;
  TapeState(std::optional<Interval> region, std::int64_t origin,
            std::vector<Symbol> cells);

  Symbol at(std::int64_t index) const noexcept;
  const std::optional<Interval>& region() const noexcept { return region_; }
  /// Index of the first non-blank cell (0 when empty).
  std::int64_t origin() const noexcept { return origin_; }
  /// Trimmed cells starting at origin(); first and last are non-blank.
  const std::vector<Symbol>& cells() const noexcept { return cells_; }
  bool empty() const noexcept { return cells_.empty(); }
  std::size_t non_blank_count() const noexcept;

  /// Cells [from, to) as a string, blanks rendered as '_'.
  std::string render(std::int64_t from, std::int64_t to) const;
  /// The full region (or support when unrestricted) as a string.
  std::string render() const;

  friend bool operator==(const TapeState& a, const TapeState& b) {
    return a.origin_ == b.origin_ && a.cells_ == b.cells_;
  }

 private:
  std::optional<Interval> region_;
  std::int64_t origin_ = 0;
  std::vector<Symbol> cells_;
};

using SnapshotPtr = std::shared_ptr<const TapeState>;

/// {"region": [b, e] | null, "origin": n, "rle": "count:sym,..."}
nlohmann::json to_json(const TapeState& state);
TapeState tape_state_from_json(const nlohmann::json& j);
std::string run_length_encode(const std::vector<Symbol>& cells);
std::vector<Symbol> run_length_decode(std::string_view rle);

/// Two-way unbounded tape; unwritten cells read as blank. apply_write is the
/// only mutator.
class Tape {
 public:
  explicit Tape(Alphabet alphabet = Alphabet::binary());

  Symbol read(std::int64_t index) const noexcept;
  /// Throws MalformedInput when the symbol is outside the alphabet.
  void apply_write(const WriteOp& op);
  void apply_writes(const std::vector<WriteOp>& ops);

  TapeState snapshot() const;
  TapeState snapshot(const Interval& region) const;
  /// Overwrites the cells covered by the state's region (or support).
  void restore(const TapeState& state);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  /// Bumped on every write that changes a cell.
  std::uint64_t version() const noexcept { return version_; }
  /// Smallest interval holding every non-blank cell ever stored.
  Interval extent() const noexcept;

 private:
  void ensure(std::int64_t index);

  Alphabet alphabet_;
  std::vector<Symbol> cells_;
  std::int64_t origin_ = 0;
  std::uint64_t version_ = 0;
};

enum class Region { kEncoding, kLocal, kScrap, kMeasurement, kOutside };
std::string_view region_name(Region r) noexcept;

struct TapeLayout {
  Interval encoding;
  Interval local;
  Interval scrap;
  std::optional<Interval> measurement;

  Region classify(std::int64_t cell) const noexcept;
};

struct LayoutIssue {
  enum class Kind { kOverlap, kMeasurementOutsideLocal };
  Kind kind;
  Region first;
  Region second;
  std::string message;
};

/// Empty optional means the layout is valid.
std::optional<LayoutIssue> check_layout(const TapeLayout& layout);

nlohmann::json to_json(const TapeLayout& layout);
TapeLayout tape_layout_from_json(const nlohmann::json& j);

enum class Actor { kGlobal, kLocal };
std::string_view actor_name(Actor a) noexcept;

/// Every read/write in the relative model passes through here. Local-tagged
/// accesses must stay inside the local region; global-tagged writes may not
/// touch the encoding of the local machine.
class AccessGuard {
 public:
  explicit AccessGuard(const TapeLayout* layout) : layout_(layout) {}

  void check_read(Actor actor, std::int64_t cell) const;
  void check_write(Actor actor, std::int64_t cell) const;

 private:
  const TapeLayout* layout_;
};

}  // namespace relmachine
