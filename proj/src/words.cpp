#include "fillvol/words.hpp"

#include "fillvol/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

namespace fillvol {

// ---------------------------------------------------------------------------
// Words

GroupWord free_reduce(std::span<const Letter> letters) { return GroupWord(letters); }

GroupWord::GroupWord(std::span<const Letter> letters) {
  for (const Letter l : letters) *this *= l;
}

GroupWord::GroupWord(std::initializer_list<Letter> letters)
    : GroupWord(std::span<const Letter>(letters.begin(), letters.size())) {}

GroupWord GroupWord::inverse() const {
  GroupWord out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.letters_.push_back(-*it);
  return out;
}

GroupWord& GroupWord::operator*=(Letter rhs) {
  if (!letters_.empty() && letters_.back() == -rhs) {
    letters_.pop_back();
  } else {
    letters_.push_back(rhs);
  }
  return *this;
}

GroupWord& GroupWord::operator*=(const GroupWord& rhs) {
  for (const Letter l : rhs.letters_) *this *= l;
  return *this;
}

GroupWord operator*(GroupWord lhs, const GroupWord& rhs) {
  lhs *= rhs;
  return lhs;
}

std::strong_ordering GroupWord::operator<=>(const GroupWord& rhs) const {
  if (auto c = letters_.size() <=> rhs.letters_.size(); c != 0) return c;
  return letters_ <=> rhs.letters_;
}

GroupWord cyclically_reduce(const GroupWord& w) {
  const auto& l = w.letters();
  std::size_t lo = 0, hi = l.size();
  while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
    ++lo;
    --hi;
  }
  return GroupWord(std::span<const Letter>(l.data() + lo, hi - lo));
}

std::vector<GroupWord> cyclic_shifts(const GroupWord& w) {
  std::vector<GroupWord> out;
  const auto& l = w.letters();
  for (std::size_t s = 0; s < l.size(); ++s) {
    std::vector<Letter> rotated(l.begin() + static_cast<std::ptrdiff_t>(s), l.end());
    rotated.insert(rotated.end(), l.begin(), l.begin() + static_cast<std::ptrdiff_t>(s));
    out.emplace_back(rotated);
  }
  return out;
}

std::size_t WordHash::operator()(const GroupWord& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (const Letter l : w.letters()) {
    h ^= static_cast<std::size_t>(l + 1024);
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Presentations

std::size_t Presentation::max_relator_length() const {
  std::size_t m = 0;
  for (const auto& r : relators) m = std::max(m, r.size());
  return m;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::optional<Letter> lookup(const std::vector<std::string>& names, std::string_view token) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (token == names[i]) return static_cast<Letter>(i + 1);
    if (token == upper(names[i])) return -static_cast<Letter>(i + 1);
  }
  return std::nullopt;
}

bool single_char_names(const std::vector<std::string>& names) {
  return std::all_of(names.begin(), names.end(), [](const auto& n) { return n.size() == 1; });
}

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line, int offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + offset + 1});
  }
  return out;
}

std::vector<Letter> parse_letters(const std::vector<std::string>& names, const std::vector<Token>& tokens,
                                  int line_no) {
  std::vector<Letter> letters;
  const bool packed = single_char_names(names);
  for (const auto& tok : tokens) {
    if (auto l = lookup(names, tok.text)) {
      letters.push_back(*l);
      continue;
    }
    if (!packed) {
      throw UnknownGenerator("'" + std::string(tok.text) + "' at " + std::to_string(line_no) + ":" +
                             std::to_string(tok.column));
    }
    for (std::size_t k = 0; k < tok.text.size(); ++k) {
      auto l = lookup(names, tok.text.substr(k, 1));
      if (!l) {
        throw UnknownGenerator("'" + std::string(tok.text.substr(k, 1)) + "' at " + std::to_string(line_no) +
                               ":" + std::to_string(tok.column + static_cast<int>(k)));
      }
      letters.push_back(*l);
    }
  }
  return letters;
}

}  // namespace

GroupWord Presentation::parse_word(std::string_view text) const {
  return GroupWord(parse_letters(names, tokenize(text, 0), 0));
}

std::string Presentation::format(const GroupWord& w) const {
  std::string out;
  for (const Letter l : w.letters()) {
    if (!out.empty()) out += ' ';
    const auto& n = names[static_cast<std::size_t>(std::abs(l) - 1)];
    out += l > 0 ? n : upper(n);
  }
  return out;
}

Presentation parse_presentation(std::string_view text) {
  Presentation p;
  bool have_gens = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw SyntaxError("MissingColon", line_no, static_cast<int>(first) + 1, "expected 'gens:' or 'rels:'");
    }
    const auto key_begin = first;
    auto key = line.substr(key_begin, colon - key_begin);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.remove_suffix(1);
    const auto tokens = tokenize(line.substr(colon + 1), static_cast<int>(colon) + 1);
    if (key == "gens") {
      if (have_gens) throw SyntaxError("DuplicateGens", line_no, static_cast<int>(first) + 1, "");
      have_gens = true;
      for (const auto& tok : tokens) {
        const std::string name(tok.text);
        const bool has_lower = std::any_of(name.begin(), name.end(),
                                           [](char c) { return std::islower(static_cast<unsigned char>(c)); });
        const bool has_upper = std::any_of(name.begin(), name.end(),
                                           [](char c) { return std::isupper(static_cast<unsigned char>(c)); });
        if (!has_lower || has_upper) {
          throw SyntaxError("BadGeneratorName", line_no, tok.column, "generator names must be lowercase: " + name);
        }
        if (std::find(p.names.begin(), p.names.end(), name) != p.names.end()) {
          throw SyntaxError("DuplicateGenerator", line_no, tok.column, name);
        }
        p.names.push_back(name);
      }
      if (p.names.empty()) throw SyntaxError("NoGenerators", line_no, static_cast<int>(colon) + 2, "");
      p.generator_count = static_cast<int>(p.names.size());
    } else if (key == "rels") {
      if (!have_gens) throw SyntaxError("RelsBeforeGens", line_no, static_cast<int>(first) + 1, "");
      if (tokens.empty()) continue;  // an empty rels line declares no relator
      const auto letters = parse_letters(p.names, tokens, line_no);
      auto rel = cyclically_reduce(GroupWord(letters));
      if (rel.empty()) {
        throw SyntaxError("EmptyRelator", line_no, tokens.front().column, "relator reduces to the empty word");
      }
      p.relators.push_back(std::move(rel));
    } else {
      throw SyntaxError("UnknownKey", line_no, static_cast<int>(first) + 1, std::string(key));
    }
  }
  if (!have_gens) throw SyntaxError("MissingGens", 0, 0, "no 'gens:' line");
  return p;
}

std::vector<GroupWord> symmetrized_relators(const Presentation& p) {
  std::vector<GroupWord> out;
  std::set<GroupWord> seen;
  for (const auto& r : p.relators) {
    for (const auto& base : {r, r.inverse()}) {
      for (auto& s : cyclic_shifts(base)) {
        if (seen.insert(s).second) out.push_back(std::move(s));
      }
    }
  }
  return out;
}

SmallCancellation check_c16(const Presentation& p) {
  SmallCancellation out;
  if (p.relators.empty()) return out;
  out.min_relator = static_cast<int>(p.relators.front().size());
  for (const auto& r : p.relators) out.min_relator = std::min(out.min_relator, static_cast<int>(r.size()));
  const auto sym = symmetrized_relators(p);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    for (std::size_t j = i + 1; j < sym.size(); ++j) {
      const auto& a = sym[i].letters();
      const auto& b = sym[j].letters();
      const auto n = std::min(a.size(), b.size());
      std::size_t k = 0;
      while (k < n && a[k] == b[k]) ++k;
      out.max_piece = std::max(out.max_piece, static_cast<int>(k));
    }
  }
  out.satisfied = 6 * out.max_piece < out.min_relator;
  return out;
}

// ---------------------------------------------------------------------------
// Strategies

NormalFormStrategy NormalFormStrategy::parse(std::string_view text) {
  if (text == "abelian") return abelian();
  if (text == "dehn") return dehn();
  if (text.starts_with("enum:")) {
    int r = 0;
    const auto digits = text.substr(5);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && r > 0) return bounded(r);
  }
  throw InvalidArgument("unknown strategy '" + std::string(text) + "'");
}

std::string NormalFormStrategy::spec() const {
  switch (kind) {
    case Kind::Abelian:
      return "abelian";
    case Kind::Dehn:
      return "dehn";
    case Kind::BoundedEnumeration:
      return "enum:" + std::to_string(radius);
  }
  return {};
}

namespace {

std::vector<int> exponent_sums(const GroupWord& w, int generators) {
  std::vector<int> e(static_cast<std::size_t>(generators), 0);
  for (const Letter l : w.letters()) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  return e;
}

}  // namespace

WordProblem::WordProblem(Presentation presentation, NormalFormStrategy strategy, std::size_t rewrite_budget)
    : presentation_(std::move(presentation)),
      strategy_(strategy),
      rewrite_budget_(rewrite_budget),
      symmetrized_(symmetrized_relators(presentation_)) {
  const int n = presentation_.generator_count;
  by_first_letter_.resize(static_cast<std::size_t>(2 * n + 1));
  for (std::size_t i = 0; i < symmetrized_.size(); ++i) {
    by_first_letter_[static_cast<std::size_t>(symmetrized_[i][0] + n)].push_back(i);
  }
  switch (strategy_.kind) {
    case NormalFormStrategy::Kind::Abelian: {
      for (const auto& r : presentation_.relators) {
        const auto e = exponent_sums(r, n);
        if (std::any_of(e.begin(), e.end(), [](int x) { return x != 0; })) {
          throw InvalidStrategy("abelian strategy: relator " + presentation_.format(r) +
                                " has nonzero exponent sum");
        }
      }
      const std::set<GroupWord> sym(symmetrized_.begin(), symmetrized_.end());
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          if (!sym.contains(GroupWord{i, j, -i, -j})) {
            throw InvalidStrategy("abelian strategy: generators " + presentation_.names[std::size_t(i - 1)] +
                                  " and " + presentation_.names[std::size_t(j - 1)] + " need a commutator relator");
          }
        }
      }
      break;
    }
    case NormalFormStrategy::Kind::Dehn: {
      const auto c16 = check_c16(presentation_);
      if (!c16.satisfied) {
        throw InvalidStrategy("dehn strategy: presentation fails C'(1/6) (max piece " +
                              std::to_string(c16.max_piece) + ", shortest relator " +
                              std::to_string(c16.min_relator) + ")");
      }
      break;
    }
    case NormalFormStrategy::Kind::BoundedEnumeration:
      if (strategy_.radius <= 0) throw InvalidStrategy("enumeration radius must be positive");
      break;
  }
}

GroupWord WordProblem::abelian_form(const GroupWord& w) const {
  const auto e = exponent_sums(w, presentation_.generator_count);
  GroupWord out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Letter l = static_cast<Letter>(i + 1) * (e[i] > 0 ? 1 : -1);
    for (int k = 0; k < std::abs(e[i]); ++k) out *= l;
  }
  return out;
}

GroupWord WordProblem::dehn_reduce(GroupWord w) const {
  const int n = presentation_.generator_count;
  bool changed = true;
  while (changed) {
    changed = false;
    const auto& l = w.letters();
    for (std::size_t i = 0; i < l.size() && !changed; ++i) {
      for (const auto idx : by_first_letter_[static_cast<std::size_t>(l[i] + n)]) {
        const auto& r = symmetrized_[idx].letters();
        std::size_t k = 0;
        while (i + k < l.size() && k < r.size() && l[i + k] == r[k]) ++k;
        if (2 * k <= r.size()) continue;
        // l[i, i+k) = r[0,k) equals the inverse of r[k, |r|).
        std::vector<Letter> next(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i));
        for (std::size_t j = r.size(); j > k; --j) next.push_back(-r[j - 1]);
        next.insert(next.end(), l.begin() + static_cast<std::ptrdiff_t>(i + k), l.end());
        w = GroupWord(next);
        changed = true;
        break;
      }
    }
  }
  return w;
}

// Dehn reduction followed by the shortlex least word among everything
// reachable through exact half-relator swaps. A swap that exposes a further
// Dehn reduction restarts the search from the shorter word.
GroupWord WordProblem::dehn_form(const GroupWord& input) const {
  const int n = presentation_.generator_count;
  GroupWord start = dehn_reduce(input);
  for (;;) {
    std::set<GroupWord> seen{start};
    std::deque<GroupWord> queue{start};
    std::optional<GroupWord> shorter;
    while (!queue.empty() && !shorter) {
      const GroupWord u = std::move(queue.front());
      queue.pop_front();
      const auto& l = u.letters();
      for (std::size_t i = 0; i < l.size() && !shorter; ++i) {
        for (const auto idx : by_first_letter_[static_cast<std::size_t>(l[i] + n)]) {
          const auto& r = symmetrized_[idx].letters();
          if (r.size() % 2 != 0) continue;
          const std::size_t half = r.size() / 2;
          if (i + half > l.size()) continue;
          if (!std::equal(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(half),
                          l.begin() + static_cast<std::ptrdiff_t>(i)))
            continue;
          std::vector<Letter> next(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i));
          for (std::size_t j = r.size(); j > half; --j) next.push_back(-r[j - 1]);
          next.insert(next.end(), l.begin() + static_cast<std::ptrdiff_t>(i + half), l.end());
          GroupWord v = dehn_reduce(GroupWord(next));
          if (v.size() < start.size()) {
            shorter = std::move(v);
            break;
          }
          if (seen.insert(v).second) {
            if (seen.size() > rewrite_budget_) {
              throw Overflow("dehn normal form: half-relator closure exceeded budget");
            }
            queue.push_back(std::move(v));
          }
        }
      }
    }
    if (!shorter) return *seen.begin();  // shortlex least
    start = std::move(*shorter);
  }
}

GroupWord WordProblem::enumerated_form(const GroupWord& w, std::size_t cap) const {
  if (symmetrized_.empty()) return w;
  std::unordered_set<GroupWord, WordHash> seen{w};
  std::deque<GroupWord> queue{w};
  GroupWord best = w;
  while (!queue.empty()) {
    const GroupWord u = std::move(queue.front());
    queue.pop_front();
    const auto& l = u.letters();
    for (std::size_t pos = 0; pos <= l.size(); ++pos) {
      for (const auto& r : symmetrized_) {
        std::vector<Letter> next(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(pos));
        next.insert(next.end(), r.letters().begin(), r.letters().end());
        next.insert(next.end(), l.begin() + static_cast<std::ptrdiff_t>(pos), l.end());
        GroupWord v(next);
        if (v.size() > cap) continue;
        if (!seen.insert(v).second) continue;
        if (seen.size() > rewrite_budget_) {
          throw Overflow("bounded enumeration: rewrite budget exhausted");
        }
        if (v < best) best = v;
        queue.push_back(std::move(v));
      }
    }
  }
  return best;
}

GroupWord WordProblem::normal_form(const GroupWord& w) const {
  switch (strategy_.kind) {
    case NormalFormStrategy::Kind::Abelian:
      return abelian_form(w);
    case NormalFormStrategy::Kind::Dehn:
      return dehn_form(w);
    case NormalFormStrategy::Kind::BoundedEnumeration: {
      const auto radius = static_cast<std::size_t>(strategy_.radius);
      if (w.size() > radius) {
        throw RadiusExceeded("word of length " + std::to_string(w.size()) + " exceeds enumeration radius " +
                             std::to_string(radius));
      }
      return enumerated_form(w, radius + presentation_.max_relator_length());
    }
  }
  return w;
}

std::optional<GroupWord> WordProblem::normal_form_within(const GroupWord& w, std::size_t max_length) const {
  GroupWord nf;
  if (strategy_.kind == NormalFormStrategy::Kind::BoundedEnumeration) {
    const auto radius = static_cast<std::size_t>(strategy_.radius);
    if (max_length > radius || w.size() > radius + 1) {
      throw RadiusExceeded("ball probe beyond enumeration radius " + std::to_string(radius));
    }
    nf = enumerated_form(w, radius + presentation_.max_relator_length());
  } else {
    nf = normal_form(w);
  }
  if (nf.size() > max_length) return std::nullopt;
  return nf;
}

GroupWord normal_form(const Presentation& p, const NormalFormStrategy& s, const GroupWord& w) {
  return WordProblem(p, s).normal_form(w);
}

}  // namespace fillvol
