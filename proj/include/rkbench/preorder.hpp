#pragma once

// Finite preordered sets, their ~-quotients and the premodel-set checker.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/error.hpp"
#include "rkbench/report.hpp"

namespace rkbench {

// Quotient classes above this count are rejected by width().
inline constexpr std::size_t kWidthClassLimit = 20;

class Preorder {
 public:
  Preorder() = default;
  explicit Preorder(std::size_t n) : n_(n), rel_(n * n, 0) {}

  static Preorder from_pairs(
      std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& le) {
    Preorder p(n);
    for (auto [i, j] : le) p.add(i, j);
    return p;
  }

  std::size_t size() const noexcept { return n_; }

  void add(std::size_t i, std::size_t j) {
    check_index(i);
    check_index(j);
    rel_[i * n_ + j] = 1;
  }

  bool le(std::size_t i, std::size_t j) const {
    return rel_[i * n_ + j] != 0;
  }
  bool equiv(std::size_t i, std::size_t j) const { return le(i, j) && le(j, i); }
  bool strictly_below(std::size_t i, std::size_t j) const {
    return le(i, j) && !le(j, i);
  }

  bool is_closed() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!le(i, i)) return false;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!le(i, j)) continue;
        for (std::size_t k = 0; k < n_; ++k)
          if (le(j, k) && !le(i, k)) return false;
      }
    }
    return true;
  }

  // All (i, j) with i <= j, i != j, in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && le(i, j)) out.emplace_back(i, j);
    return out;
  }

  friend bool operator==(const Preorder&, const Preorder&) = default;

 private:
  void check_index(std::size_t i) const {
    if (i >= n_)
      throw Error("element " + std::to_string(i) + " out of range for preorder of size " +
                  std::to_string(n_));
  }

  std::size_t n_ = 0;
  std::vector<std::uint8_t> rel_;
};

// Reflexive-transitive closure (Warshall).
inline Preorder close(const Preorder& raw) {
  Preorder p = raw;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) p.add(i, i);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.le(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (p.le(k, j)) p.add(i, j);
    }
  return p;
}

struct QuotientPoset {
  // Classes ordered by their least member; members ascending.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  Preorder order;  // partial order on class indices

  std::size_t size() const noexcept { return classes.size(); }
  bool le(std::size_t c, std::size_t d) const { return order.le(c, d); }

  // Pairs (c, d) where d covers c.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t k = size();
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t d = 0; d < k; ++d) {
        if (c == d || !order.le(c, d)) continue;
        bool direct = true;
        for (std::size_t e = 0; e < k && direct; ++e)
          if (e != c && e != d && order.le(c, e) && order.le(e, d)) direct = false;
        if (direct) out.emplace_back(c, d);
      }
    return out;
  }

  std::vector<std::size_t> minimal_classes() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < size(); ++c) {
      bool minimal = true;
      for (std::size_t d = 0; d < size() && minimal; ++d)
        if (d != c && order.le(d, c)) minimal = false;
      if (minimal) out.push_back(c);
    }
    return out;
  }

  std::vector<std::size_t> maximal_classes() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < size(); ++c) {
      bool maximal = true;
      for (std::size_t d = 0; d < size() && maximal; ++d)
        if (d != c && order.le(c, d)) maximal = false;
      if (maximal) out.push_back(c);
    }
    return out;
  }
};

inline QuotientPoset sim_quotient(const Preorder& p) {
  if (!p.is_closed()) throw Error("sim_quotient requires a closed preorder");
  const std::size_t n = p.size();
  QuotientPoset q;
  q.class_of.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (q.class_of[i] != n) continue;
    const std::size_t c = q.classes.size();
    q.classes.emplace_back();
    for (std::size_t j = i; j < n; ++j)
      if (p.equiv(i, j)) {
        q.class_of[j] = c;
        q.classes.back().push_back(j);
      }
  }
  q.order = Preorder(q.classes.size());
  for (std::size_t c = 0; c < q.classes.size(); ++c)
    for (std::size_t d = 0; d < q.classes.size(); ++d)
      if (p.le(q.classes[c].front(), q.classes[d].front())) q.order.add(c, d);
  return q;
}

struct Cones {
  std::vector<std::size_t> lower;  // x <= a
  std::vector<std::size_t> upper;  // a <= x
};

inline Cones cones(const Preorder& p, std::size_t a) {
  if (a >= p.size())
    throw Error("cone element " + std::to_string(a) + " out of range");
  Cones out;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.le(x, a)) out.lower.push_back(x);
    if (p.le(a, x)) out.upper.push_back(x);
  }
  return out;
}

// Longest chain of pairwise non-equivalent elements.
inline std::size_t height(const Preorder& p) {
  const QuotientPoset q = sim_quotient(p);
  const std::size_t k = q.size();
  // Classes sorted by number of strict predecessors form a linear extension.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> below(k, 0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < k; ++d)
      if (c != d && q.le(d, c)) ++below[c];
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  std::vector<std::size_t> longest(k, 1);
  std::size_t best = 0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t c = order[idx];
    for (std::size_t jdx = 0; jdx < idx; ++jdx) {
      const std::size_t d = order[jdx];
      if (q.le(d, c) && d != c) longest[c] = std::max(longest[c], longest[d] + 1);
    }
    best = std::max(best, longest[c]);
  }
  return best;
}

namespace detail {
// Maximum independent set in the comparability graph by branch and bound.
inline void antichain_search(const QuotientPoset& q,
                             std::vector<std::size_t>& candidates,
                             std::size_t chosen, std::size_t& best) {
  if (chosen + candidates.size() <= best) return;
  if (candidates.empty()) {
    best = std::max(best, chosen);
    return;
  }
  const std::size_t c = candidates.back();
  candidates.pop_back();
  std::vector<std::size_t> rest;
  for (auto d : candidates)
    if (!q.le(c, d) && !q.le(d, c)) rest.push_back(d);
  antichain_search(q, rest, chosen + 1, best);
  antichain_search(q, candidates, chosen, best);
  candidates.push_back(c);
}
}  // namespace detail

// Maximum antichain of pairwise non-equivalent elements, computed exactly.
inline std::size_t width(const Preorder& p,
                         std::size_t class_limit = kWidthClassLimit) {
  const QuotientPoset q = sim_quotient(p);
  if (q.size() > class_limit)
    throw Error("width: " + std::to_string(q.size()) +
                " quotient classes exceed the limit of " +
                std::to_string(class_limit));
  std::vector<std::size_t> candidates(q.size());
  std::iota(candidates.begin(), candidates.end(), 0);
  std::size_t best = 0;
  detail::antichain_search(q, candidates, 0, best);
  return best;
}

inline bool is_upward_directed(const Preorder& p) {
  if (!p.is_closed()) throw Error("is_upward_directed requires a closed preorder");
  const std::size_t n = p.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      bool bounded = false;
      for (std::size_t c = 0; c < n && !bounded; ++c)
        bounded = p.le(a, c) && p.le(b, c);
      if (!bounded) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Premodel sets
//
// A premodel set is continual, so it is described by a symbolic profile of
// claimed cardinalities rather than materialized.

struct JointUpperConeCase {
  Cardinal cone_card;        // |upper(a1) n ... n upper(an)|
  Cardinal complement_card;  // |X \ that intersection|
  bool equals_x = false;

  friend bool operator==(const JointUpperConeCase&,
                         const JointUpperConeCase&) = default;
};

enum class UpperConeShape { Countable, WholeSet, CoCountable, CoContinual };

inline const char* to_string(UpperConeShape s) {
  switch (s) {
    case UpperConeShape::Countable: return "countable";
    case UpperConeShape::WholeSet: return "continual-equals-X";
    case UpperConeShape::CoCountable: return "co-countable";
    case UpperConeShape::CoContinual: return "co-continual";
  }
  return "?";
}

struct PremodelProfile {
  Cardinal size = Cardinal::continuum();
  bool directed = true;
  Cardinal lower_cone_card = Cardinal::omega();
  Cardinal class_card = Cardinal::omega();
  std::vector<JointUpperConeCase> joint_upper_cone_cases;
  Cardinal height = Cardinal::omega();

  friend bool operator==(const PremodelProfile&, const PremodelProfile&) = default;
};

// The disjuncts are read as a classification of the joint upper cone: a
// countable cone, or a continual cone that is all of X, co-countable or
// co-continual. Returns every disjunct the case satisfies.
inline std::vector<UpperConeShape> upper_cone_shapes(const JointUpperConeCase& c,
                                                     Cardinal set_size,
                                                     bool ch = kDefaultCH) {
  std::vector<UpperConeShape> out;
  const Cardinal w = Cardinal::omega(), cont = Cardinal::continuum();
  const bool continual_set = card_eq(set_size, cont, ch);
  const bool complement_matches_x = c.equals_x == c.complement_card.is_zero();
  if (!continual_set || !complement_matches_x) return out;
  if (card_eq(c.cone_card, w, ch) && card_eq(c.complement_card, cont, ch) &&
      !c.equals_x)
    out.push_back(UpperConeShape::Countable);
  if (card_eq(c.cone_card, cont, ch)) {
    if (c.equals_x) out.push_back(UpperConeShape::WholeSet);
    if (card_eq(c.complement_card, w, ch)) out.push_back(UpperConeShape::CoCountable);
    if (card_eq(c.complement_card, cont, ch)) out.push_back(UpperConeShape::CoContinual);
  }
  return out;
}

inline Report check_premodel(const PremodelProfile& pr, bool ch = kDefaultCH) {
  Report r;
  r.title = "premodel profile";
  const Cardinal w = Cardinal::omega(), cont = Cardinal::continuum();
  r.check("size", card_eq(pr.size, cont, ch),
          "|X| = " + to_string(pr.size) + ", must be c");
  r.check("directed", pr.directed, "X must be upward directed");
  r.check("lower-cones", card_eq(pr.lower_cone_card, w, ch),
          "|lower cone| = " + to_string(pr.lower_cone_card) + ", must be w");
  r.check("sim-classes", card_eq(pr.class_card, w, ch),
          "|class| = " + to_string(pr.class_card) + ", must be w");
  bool cones_ok = true;
  std::string cone_detail;
  for (std::size_t i = 0; i < pr.joint_upper_cone_cases.size(); ++i) {
    const auto shapes =
        upper_cone_shapes(pr.joint_upper_cone_cases[i], pr.size, ch);
    if (shapes.size() != 1) {
      cones_ok = false;
      cone_detail += "case " + std::to_string(i) + " matches " +
                     std::to_string(shapes.size()) + " shapes; ";
    } else {
      r.fact("upper-cone-case-" + std::to_string(i), to_string(shapes.front()));
    }
  }
  r.check("joint-upper-cones", cones_ok, cone_detail);
  const bool height_ok = card_eq(pr.height, w, ch);
  r.check("height", height_ok,
          height_ok ? "" : "height must be w, got " + to_string(pr.height));
  if (r.passed()) {
    r.fact("width", "c");
    r.fact("directed", "yes");
  }
  return r;
}

// DOT rendering of the quotient's covering relation.
inline std::string to_dot(const QuotientPoset& q, const std::string& name = "quotient") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=BT;\n";
  for (std::size_t c = 0; c < q.size(); ++c) {
    out << "  c" << c << " [label=\"";
    for (std::size_t i = 0; i < q.classes[c].size(); ++i)
      out << (i ? "," : "") << q.classes[c][i];
    out << "\"];\n";
  }
  for (auto [c, d] : q.covers()) out << "  c" << c << " -> c" << d << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace rkbench
