#pragma once

// Depth-truncated one-variable type spaces for three theory families:
//
//   Iup         independent unary predicates P_0, P_1, ...; every type is
//               non-principal, a depth-d cell is a sign vector of length d.
//   Sdup        sequentially divisible predicates S_delta over the binary
//               tree; a type stops at a node (isolated) or follows a branch.
//               The root predicate is taken as the whole universe.
//   Colored(m)  m disjoint parts P_i with colors Col_j; finite-color types
//               are isolated, the infinite color of part i is p_i.
//
// Principality is decided by the family, not by finite isolation in the
// truncated signature.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rkbench/error.hpp"

namespace rkbench {

inline constexpr unsigned kIupDepthLimit = 16;
inline constexpr unsigned kSdupDepthLimit = 12;
inline constexpr unsigned kColoredDepthLimit = 64;

enum class Family { Iup, Sdup, Colored };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Iup: return "iup";
    case Family::Sdup: return "sdup";
    case Family::Colored: return "colored";
  }
  return "?";
}

struct TypeSpace {
  Family family = Family::Iup;
  unsigned m = 0;  // part count, Colored only
  unsigned depth = 1;

  static TypeSpace iup(unsigned depth) { return {Family::Iup, 0, depth}; }
  static TypeSpace sdup(unsigned depth) { return {Family::Sdup, 0, depth}; }
  static TypeSpace colored(unsigned m, unsigned depth) {
    return {Family::Colored, m, depth};
  }

  TypeSpace at_depth(unsigned d) const { return {family, m, d}; }

  friend bool operator==(const TypeSpace&, const TypeSpace&) = default;
};

// A color value: finite, or infinite (the limit type of a coloring).
class Color {
 public:
  constexpr Color() = default;
  static constexpr Color finite(unsigned c) { return Color(c); }
  static constexpr Color infinite() { return Color(kInf); }

  constexpr bool is_infinite() const noexcept { return v_ == kInf; }
  constexpr unsigned value() const noexcept { return v_; }

  friend constexpr auto operator<=>(const Color&, const Color&) = default;

 private:
  static constexpr unsigned kInf = ~0u;
  constexpr explicit Color(unsigned v) : v_(v) {}
  unsigned v_ = 0;
};

inline std::string to_string(Color c) {
  return c.is_infinite() ? "inf" : std::to_string(c.value());
}

inline std::optional<Color> try_parse_color(const std::string& s) {
  if (s == "inf") return Color::infinite();
  if (s.empty() || s.size() > 9 ||
      !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  return Color::finite(static_cast<unsigned>(std::stoul(s)));
}

inline unsigned color_min(Color a, Color b, unsigned cap) {
  const unsigned va = a.is_infinite() ? cap : a.value();
  const unsigned vb = b.is_infinite() ? cap : b.value();
  return std::min(va, vb);
}

// ---------------------------------------------------------------------------
// Cell addresses

struct IupCell {
  std::string signs;  // '1' = P_k holds, '0' = negated; position k
  friend auto operator<=>(const IupCell&, const IupCell&) = default;
};

struct SdupCell {
  std::string node;  // path in the binary tree, "" is the root
  bool stopped = false;
  friend auto operator<=>(const SdupCell&, const SdupCell&) = default;
};

struct ColoredCell {
  unsigned part = 0;
  Color color;
  friend auto operator<=>(const ColoredCell&, const ColoredCell&) = default;
};

using TypeId = std::variant<IupCell, SdupCell, ColoredCell>;

// Iup "0110"; Sdup "<path>." stopped or "<path>*" continuing; Colored
// "(i,j)" or "(i,inf)".
inline std::string to_string(const TypeId& id) {
  if (auto* c = std::get_if<IupCell>(&id)) return c->signs;
  if (auto* c = std::get_if<SdupCell>(&id))
    return c->node + (c->stopped ? "." : "*");
  const auto& c = std::get<ColoredCell>(id);
  return "(" + std::to_string(c.part) + "," + to_string(c.color) + ")";
}

inline bool is_binary_string(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

inline std::optional<TypeId> try_parse_type_id(Family f, const std::string& s) {
  switch (f) {
    case Family::Iup:
      if (s.empty() || !is_binary_string(s)) return std::nullopt;
      return IupCell{s};
    case Family::Sdup: {
      if (s.empty()) return std::nullopt;
      const char mark = s.back();
      const std::string node = s.substr(0, s.size() - 1);
      if ((mark != '.' && mark != '*') || !is_binary_string(node)) return std::nullopt;
      return SdupCell{node, mark == '.'};
    }
    case Family::Colored: {
      if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
      const auto comma = s.find(',');
      if (comma == std::string::npos) return std::nullopt;
      const std::string part = s.substr(1, comma - 1);
      const auto color = try_parse_color(s.substr(comma + 1, s.size() - comma - 2));
      if (part.empty() || part.size() > 9 || !color ||
          !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
      return ColoredCell{static_cast<unsigned>(std::stoul(part)), *color};
    }
  }
  return std::nullopt;
}

inline Family family_of(const TypeId& id) {
  if (std::holds_alternative<IupCell>(id)) return Family::Iup;
  if (std::holds_alternative<SdupCell>(id)) return Family::Sdup;
  return Family::Colored;
}

// Depth at which the cell is a complete cell of the truncation. Colored
// cells with infinite color are valid at every depth, reported as 0.
inline unsigned cell_depth(const TypeId& id) {
  if (auto* c = std::get_if<IupCell>(&id)) return static_cast<unsigned>(c->signs.size());
  if (auto* c = std::get_if<SdupCell>(&id)) return static_cast<unsigned>(c->node.size());
  const auto& c = std::get<ColoredCell>(id);
  return c.color.is_infinite() ? 0 : c.color.value();
}

// Whether `id` names a cell that exists at depth `d` of the family.
inline bool valid_at(const TypeSpace& ts, const TypeId& id, unsigned d) {
  if (family_of(id) != ts.family) return false;
  if (auto* c = std::get_if<IupCell>(&id)) return c->signs.size() == d;
  if (auto* c = std::get_if<SdupCell>(&id))
    return c->stopped ? c->node.size() <= d : c->node.size() == d;
  const auto& c = std::get<ColoredCell>(id);
  return c.part < ts.m && (c.color.is_infinite() || c.color.value() <= d);
}

// Image of a (possibly deeper) cell in the depth-d partition.
inline std::optional<TypeId> truncate(const TypeSpace& ts, const TypeId& id, unsigned d) {
  if (family_of(id) != ts.family) return std::nullopt;
  if (auto* c = std::get_if<IupCell>(&id)) {
    if (c->signs.size() < d) return std::nullopt;
    return IupCell{c->signs.substr(0, d)};
  }
  if (auto* c = std::get_if<SdupCell>(&id)) {
    if (c->stopped && c->node.size() <= d) return *c;
    if (c->node.size() < d) return std::nullopt;
    return SdupCell{c->node.substr(0, d), false};
  }
  const auto& c = std::get<ColoredCell>(id);
  if (c.part >= ts.m) return std::nullopt;
  if (c.color.is_infinite() || c.color.value() > d)
    return ColoredCell{c.part, Color::infinite()};
  return c;
}

// ---------------------------------------------------------------------------
// Literal conjunctions in one free variable

struct Atom {
  enum class Kind { Pred, Tree, Col };
  Kind kind = Kind::Pred;
  unsigned index = 0;  // Pred: P_index; Col: Col_index
  std::string node;    // Tree: S_node

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool positive = true;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct FormulaLit {
  std::vector<Literal> literals;

  // No atom with both signs.
  bool well_formed() const {
    std::map<Atom, bool> seen;
    for (const auto& l : literals) {
      auto [it, fresh] = seen.emplace(l.atom, l.positive);
      if (!fresh && it->second != l.positive) return false;
    }
    return true;
  }
  friend bool operator==(const FormulaLit&, const FormulaLit&) = default;
};

inline std::string to_string(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Pred: return "P" + std::to_string(a.index);
    case Atom::Kind::Col: return "C" + std::to_string(a.index);
    case Atom::Kind::Tree: return "S" + (a.node.empty() ? std::string("e") : a.node);
  }
  return "?";
}

inline std::string to_string(const FormulaLit& f) {
  if (f.literals.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < f.literals.size(); ++i) {
    if (i) out += " & ";
    if (!f.literals[i].positive) out += "!";
    out += to_string(f.literals[i].atom);
  }
  return out;
}

// Grammar: "true" | literal ( "&" literal )*, literal = ["!"] (P<k> | C<j> |
// S<bits> | Se).
inline std::optional<FormulaLit> try_parse_formula(const std::string& text) {
  FormulaLit f;
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s == "true" || s.empty()) return f;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto amp = s.find('&', pos);
    std::string tok = s.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
    Literal lit;
    if (!tok.empty() && tok.front() == '!') {
      lit.positive = false;
      tok.erase(0, 1);
    }
    if (tok.size() < 2) return std::nullopt;
    const std::string rest = tok.substr(1);
    const bool digits = std::all_of(rest.begin(), rest.end(),
                                    [](char c) { return c >= '0' && c <= '9'; });
    if ((tok[0] == 'P' || tok[0] == 'C') && digits && rest.size() <= 9) {
      lit.atom.kind = tok[0] == 'P' ? Atom::Kind::Pred : Atom::Kind::Col;
      lit.atom.index = static_cast<unsigned>(std::stoul(rest));
    } else if (tok[0] == 'S' && (rest == "e" || is_binary_string(rest))) {
      lit.atom.kind = Atom::Kind::Tree;
      lit.atom.node = rest == "e" ? "" : rest;
    } else {
      return std::nullopt;
    }
    f.literals.push_back(lit);
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Family semantics

namespace detail {

inline bool is_prefix(const std::string& p, const std::string& s) {
  return p.size() <= s.size() && s.compare(0, p.size(), p) == 0;
}

// Truth value of an atom on every type of the cell, or nullopt when the cell
// does not decide it.
inline std::optional<bool> decide(const TypeId& cell, const Atom& a) {
  if (auto* c = std::get_if<IupCell>(&cell)) {
    if (a.kind != Atom::Kind::Pred) return false;
    if (a.index < c->signs.size()) return c->signs[a.index] == '1';
    return std::nullopt;
  }
  if (auto* c = std::get_if<SdupCell>(&cell)) {
    if (a.kind != Atom::Kind::Tree) return false;
    if (is_prefix(a.node, c->node)) return true;
    if (c->stopped) return false;
    if (is_prefix(c->node, a.node)) return std::nullopt;
    return false;
  }
  const auto& c = std::get<ColoredCell>(cell);
  if (a.kind == Atom::Kind::Pred) return a.index == c.part;
  if (a.kind == Atom::Kind::Col)
    return !c.color.is_infinite() && c.color.value() == a.index;
  return false;
}

// Every type in the cell satisfies the conjunction.
inline bool cell_entails(const TypeId& cell, const FormulaLit& f) {
  for (const auto& l : f.literals) {
    const auto v = decide(cell, l.atom);
    if (!v || *v != l.positive) return false;
  }
  return true;
}

inline unsigned decision_depth(const FormulaLit& f) {
  unsigned d = 1;
  for (const auto& l : f.literals) {
    switch (l.atom.kind) {
      case Atom::Kind::Pred: d = std::max(d, l.atom.index + 1); break;
      case Atom::Kind::Col: d = std::max(d, l.atom.index + 1); break;
      case Atom::Kind::Tree:
        d = std::max(d, static_cast<unsigned>(l.atom.node.size()) + 1);
        break;
    }
  }
  return d;
}

inline bool atom_in_family(const TypeSpace& ts, const Atom& a) {
  switch (ts.family) {
    case Family::Iup: return a.kind == Atom::Kind::Pred;
    case Family::Sdup: return a.kind == Atom::Kind::Tree;
    case Family::Colored:
      return a.kind == Atom::Kind::Col || (a.kind == Atom::Kind::Pred && a.index < ts.m);
  }
  return false;
}

}  // namespace detail

struct TypedCell {
  TypeId id;
  bool principal = false;
};

inline unsigned depth_limit(Family f) {
  switch (f) {
    case Family::Iup: return kIupDepthLimit;
    case Family::Sdup: return kSdupDepthLimit;
    case Family::Colored: return kColoredDepthLimit;
  }
  return 0;
}

inline void check_space(const TypeSpace& ts) {
  if (ts.depth == 0)
    throw Error("type space depth must be positive");
  if (ts.depth > depth_limit(ts.family))
    throw Error(std::string("depth ") + std::to_string(ts.depth) + " exceeds the " +
                to_string(ts.family) + " limit of " +
                std::to_string(depth_limit(ts.family)));
  if (ts.family == Family::Colored && ts.m == 0)
    throw Error("colored type space needs at least one part");
}

// All complete cells of the truncation, in a fixed order.
inline std::vector<TypedCell> enumerate_types(const TypeSpace& ts) {
  check_space(ts);
  std::vector<TypedCell> out;
  switch (ts.family) {
    case Family::Iup: {
      const std::uint64_t count = std::uint64_t{1} << ts.depth;
      out.reserve(count);
      for (std::uint64_t v = 0; v < count; ++v) {
        std::string s(ts.depth, '0');
        for (unsigned k = 0; k < ts.depth; ++k)
          if (v >> (ts.depth - 1 - k) & 1) s[k] = '1';
        out.push_back({IupCell{s}, false});
      }
      break;
    }
    case Family::Sdup: {
      for (unsigned len = 0; len <= ts.depth; ++len)
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
          std::string s(len, '0');
          for (unsigned k = 0; k < len; ++k)
            if (v >> (len - 1 - k) & 1) s[k] = '1';
          out.push_back({SdupCell{s, true}, true});
        }
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << ts.depth); ++v) {
        std::string s(ts.depth, '0');
        for (unsigned k = 0; k < ts.depth; ++k)
          if (v >> (ts.depth - 1 - k) & 1) s[k] = '1';
        out.push_back({SdupCell{s, false}, false});
      }
      break;
    }
    case Family::Colored:
      for (unsigned i = 0; i < ts.m; ++i) {
        for (unsigned j = 0; j <= ts.depth; ++j)
          out.push_back({ColoredCell{i, Color::finite(j)}, true});
        out.push_back({ColoredCell{i, Color::infinite()}, false});
      }
      break;
  }
  return out;
}

// Isolated types of the untruncated family that are distinguishable at depth
// `d` (deeper isolated types agree with one of these on every depth-d atom).
inline std::vector<TypeId> isolated_types(const TypeSpace& ts, unsigned d) {
  std::vector<TypeId> out;
  if (ts.family == Family::Iup) return out;
  for (const auto& c : enumerate_types(ts.at_depth(d)))
    if (c.principal) out.push_back(c.id);
  return out;
}

// Defining conjunction of a cell.
inline FormulaLit cell_formula(const TypeSpace& ts, const TypeId& id) {
  FormulaLit f;
  if (auto* c = std::get_if<IupCell>(&id)) {
    for (unsigned k = 0; k < c->signs.size(); ++k)
      f.literals.push_back({{Atom::Kind::Pred, k, {}}, c->signs[k] == '1'});
  } else if (auto* c = std::get_if<SdupCell>(&id)) {
    for (std::size_t len = 1; len <= c->node.size(); ++len)
      f.literals.push_back({{Atom::Kind::Tree, 0, c->node.substr(0, len)}, true});
    if (c->stopped) {
      f.literals.push_back({{Atom::Kind::Tree, 0, c->node + "0"}, false});
      f.literals.push_back({{Atom::Kind::Tree, 0, c->node + "1"}, false});
    }
  } else {
    const auto& cc = std::get<ColoredCell>(id);
    f.literals.push_back({{Atom::Kind::Pred, cc.part, {}}, true});
    if (cc.color.is_infinite()) {
      for (unsigned j = 0; j <= ts.depth; ++j)
        f.literals.push_back({{Atom::Kind::Col, j, {}}, false});
    } else {
      f.literals.push_back({{Atom::Kind::Col, cc.color.value(), {}}, true});
    }
  }
  return f;
}

// Some type of the family contains the conjunction.
inline bool is_consistent(const TypeSpace& ts, const FormulaLit& f) {
  if (!f.well_formed()) return false;
  for (const auto& l : f.literals)
    if (!detail::atom_in_family(ts, l.atom)) return false;
  const unsigned d = detail::decision_depth(f);
  if (ts.family == Family::Iup) return true;
  for (const auto& c : enumerate_types(ts.at_depth(d)))
    if (detail::cell_entails(c.id, f)) return true;
  return false;
}

enum class FormulaClass { IFormula, NiFormula };

inline const char* to_string(FormulaClass c) {
  return c == FormulaClass::IFormula ? "i-formula" : "ni-formula";
}

// i-formula iff some isolated type of the family contains it.
inline FormulaClass classify_formula(const TypeSpace& ts, const FormulaLit& f) {
  if (!is_consistent(ts, f))
    throw Error("classify_formula: inconsistent formula '" + to_string(f) + "'");
  const unsigned d = detail::decision_depth(f);
  for (const auto& iso : isolated_types(ts, d))
    if (detail::cell_entails(iso, f)) return FormulaClass::IFormula;
  return FormulaClass::NiFormula;
}

// Prime-model criterion: no ni-formulas. Every consistent conjunction is
// entailed by some complete cell, so it suffices that each cell formula is
// an i-formula, i.e. isolated types meet every cell.
inline bool has_prime_model(const TypeSpace& ts) {
  for (const auto& c : enumerate_types(ts))
    if (classify_formula(ts, cell_formula(ts, c.id)) == FormulaClass::NiFormula)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Sets of types: an implicit base plus finite explicit edits

enum class Base { None, All };

struct TypeSet {
  Base base = Base::None;
  std::set<TypeId> added;
  std::set<TypeId> removed;
};

// Every depth-d cell is refined by some member. A set with the full base
// is dense whatever finitely many points are removed from it.
inline bool is_dense(const TypeSpace& ts, const TypeSet& x, unsigned d) {
  for (const auto& id : x.added)
    if (family_of(id) != ts.family || !truncate(ts, id, d))
      throw Error("is_dense: member " + to_string(id) + " invalid at depth " +
                  std::to_string(d));
  if (x.base == Base::All) return true;
  std::set<TypeId> hit;
  for (const auto& id : x.added)
    if (!x.removed.contains(id)) hit.insert(*truncate(ts, id, d));
  for (const auto& c : enumerate_types(ts.at_depth(d)))
    if (!hit.contains(c.id)) return false;
  return true;
}

}  // namespace rkbench
