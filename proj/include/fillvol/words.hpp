#pragma once

// Free-group words, finite presentations, the C'(1/6) small-cancellation
// test, and the normal-form strategies used to identify group elements.

#include "fillvol/types.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fillvol {

/// Signed generator index: +k is generator k-1, -k its inverse.
using Letter = int;

/// A freely reduced word. Ordered shortlex (length first, then letters).
class GroupWord {
 public:
  GroupWord() = default;
  /// Freely reduces the input.
  explicit GroupWord(std::span<const Letter> letters);
  GroupWord(std::initializer_list<Letter> letters);

  [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] Letter operator[](std::size_t i) const { return letters_[i]; }

  [[nodiscard]] GroupWord inverse() const;
  GroupWord& operator*=(const GroupWord& rhs);
  GroupWord& operator*=(Letter rhs);

  bool operator==(const GroupWord&) const = default;
  std::strong_ordering operator<=>(const GroupWord& rhs) const;

 private:
  std::vector<Letter> letters_;
};

GroupWord operator*(GroupWord lhs, const GroupWord& rhs);

GroupWord free_reduce(std::span<const Letter> letters);
/// Conjugates away matching first/last letters.
GroupWord cyclically_reduce(const GroupWord& w);
/// All cyclic rotations of a cyclically reduced word.
std::vector<GroupWord> cyclic_shifts(const GroupWord& w);

struct WordHash {
  std::size_t operator()(const GroupWord& w) const noexcept;
};

struct Presentation {
  int generator_count = 0;
  std::vector<std::string> names;  // lowercase; the uppercase spelling is the inverse
  std::vector<GroupWord> relators;  // nonempty, cyclically reduced

  [[nodiscard]] std::size_t max_relator_length() const;
  [[nodiscard]] std::string format(const GroupWord& w) const;
  /// Whitespace-separated letters, or packed single-character names.
  [[nodiscard]] GroupWord parse_word(std::string_view text) const;
};

/// Parses `gens:` / `rels:` lines; `#` starts a comment. Throws SyntaxError
/// (with line/column) or UnknownGenerator.
Presentation parse_presentation(std::string_view text);

/// Every cyclic shift of every relator and of its inverse, without repeats,
/// in a fixed order.
std::vector<GroupWord> symmetrized_relators(const Presentation& p);

struct SmallCancellation {
  bool satisfied = true;
  int max_piece = 0;
  int min_relator = 0;
};

SmallCancellation check_c16(const Presentation& p);

struct NormalFormStrategy {
  enum class Kind { Abelian, Dehn, BoundedEnumeration };
  Kind kind = Kind::Abelian;
  int radius = 0;  // BoundedEnumeration only

  static NormalFormStrategy abelian() { return {Kind::Abelian, 0}; }
  static NormalFormStrategy dehn() { return {Kind::Dehn, 0}; }
  static NormalFormStrategy bounded(int radius) { return {Kind::BoundedEnumeration, radius}; }

  /// "abelian", "dehn", "enum:<r>"; throws InvalidArgument.
  static NormalFormStrategy parse(std::string_view text);
  [[nodiscard]] std::string spec() const;
  bool operator==(const NormalFormStrategy&) const = default;
};

/// A normal-form strategy validated against one presentation.
class WordProblem {
 public:
  /// Throws InvalidStrategy when the presentation does not meet the
  /// strategy's requirement.
  WordProblem(Presentation presentation, NormalFormStrategy strategy,
              std::size_t rewrite_budget = 200000);

  [[nodiscard]] const Presentation& presentation() const { return presentation_; }
  [[nodiscard]] const NormalFormStrategy& strategy() const { return strategy_; }

  /// Canonical representative. BoundedEnumeration throws RadiusExceeded for
  /// words longer than its radius and Overflow when the rewrite budget runs out.
  [[nodiscard]] GroupWord normal_form(const GroupWord& w) const;

  /// The normal form if it has length <= max_length, else nullopt. Accepts
  /// words one letter past the enumeration radius (ball boundary probing).
  [[nodiscard]] std::optional<GroupWord> normal_form_within(const GroupWord& w,
                                                            std::size_t max_length) const;

  /// Greedy shortening by more-than-half relator subwords.
  [[nodiscard]] GroupWord dehn_reduce(GroupWord w) const;

 private:
  [[nodiscard]] GroupWord abelian_form(const GroupWord& w) const;
  [[nodiscard]] GroupWord dehn_form(const GroupWord& w) const;
  [[nodiscard]] GroupWord enumerated_form(const GroupWord& w, std::size_t cap) const;

  Presentation presentation_;
  NormalFormStrategy strategy_;
  std::size_t rewrite_budget_;
  std::vector<GroupWord> symmetrized_;
  // symmetrized_ indices grouped by first letter; slot = letter + generator_count
  std::vector<std::vector<std::size_t>> by_first_letter_;
};

GroupWord normal_form(const Presentation& p, const NormalFormStrategy& s, const GroupWord& w);

}  // namespace fillvol
