#pragma once

// Countable models as realized-type specifications.
//
// A ModelSpec has an implicit base and finitely many explicit edits. Base
// `all` stands for a canonical countable dense set of types, one designated
// representative per depth cell realized once; base `none` realizes nothing
// beyond the edits. An explicit entry overrides the representative's count,
// and count 0 removes it. Counts live in {0..cap} u {w}.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/domination.hpp"
#include "rkbench/error.hpp"
#include "rkbench/report.hpp"
#include "rkbench/typespace.hpp"

namespace rkbench {

inline constexpr unsigned kDefaultCountCap = 8;

struct ModelSpec {
  TypeSpace space;
  Base base = Base::None;
  std::map<TypeId, Cardinal> counts;
  unsigned cap = kDefaultCountCap;

  Cardinal baseline() const { return Cardinal::fin(base == Base::All ? 1 : 0); }

  Cardinal count(const TypeId& id) const {
    auto it = counts.find(id);
    return it == counts.end() ? baseline() : it->second;
  }

  // Drops edits equal to the baseline so equal models compare equal.
  void normalize() {
    for (auto it = counts.begin(); it != counts.end();)
      it = it->second == baseline() ? counts.erase(it) : std::next(it);
  }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) {
    ModelSpec x = a, y = b;
    x.normalize();
    y.normalize();
    return x.space == y.space && x.base == y.base && x.counts == y.counts && x.cap == y.cap;
  }
};

inline bool valid_count(Cardinal c, unsigned cap) {
  return (c.is_finite() && c.value() <= cap) || c == Cardinal::omega();
}

// Cells realized at least once.
inline std::set<TypeId> support(const ModelSpec& m) {
  std::set<TypeId> out;
  for (const auto& c : enumerate_types(m.space))
    if (!m.count(c.id).is_zero()) out.insert(c.id);
  return out;
}

inline TypeSet realized_set(const ModelSpec& m) {
  TypeSet s;
  s.base = m.base;
  for (const auto& [id, c] : m.counts) (c.is_zero() ? s.removed : s.added).insert(id);
  return s;
}

inline bool is_dense(const ModelSpec& m) {
  return is_dense(m.space, realized_set(m), m.space.depth);
}

// Throws on cells outside the space, out-of-range counts, or a non-dense
// Iup model.
inline void validate(const ModelSpec& m) {
  check_space(m.space);
  for (const auto& [id, c] : m.counts) {
    if (!valid_at(m.space, id, m.space.depth))
      throw Error("model cell " + to_string(id) + " is not a cell of the space at depth " +
                  std::to_string(m.space.depth));
    if (!valid_count(c, m.cap))
      throw Error("count " + to_string(c) + " for " + to_string(id) + " outside 0.." +
                  std::to_string(m.cap) + ",w");
  }
  if (m.space.family == Family::Iup && !is_dense(m))
    throw Error("an iup model must realize a dense set of types");
}

// Generalized domination of countable models. For Iup every type realized
// in m1 is realized in m2 at least as often; elsewhere FD-inclusion.
inline bool cm_dominates(const ModelSpec& m1, const ModelSpec& m2) {
  if (!(m1.space == m2.space)) throw Error("cm_dominates: models over different type spaces");
  if (m1.space.family != Family::Iup) {
    const auto s1 = support(m1), s2 = support(m2);
    return std::includes(s2.begin(), s2.end(), s1.begin(), s1.end());
  }
  // Implicit points beyond the edited representatives.
  if (m1.base == Base::All && m2.base == Base::None) return false;
  std::set<TypeId> keys;
  for (const auto& [id, c] : m1.counts) keys.insert(id);
  for (const auto& [id, c] : m2.counts) keys.insert(id);
  return std::all_of(keys.begin(), keys.end(),
                     [&](const TypeId& id) { return card_le(m1.count(id), m2.count(id)); });
}

enum class Direction { Down, Up };

namespace detail {

inline Cardinal bump(Cardinal c, unsigned cap) {
  if (!c.is_finite()) throw Error("count already w");
  return c.value() >= cap ? Cardinal::omega() : Cardinal::fin(c.value() + 1);
}

inline Cardinal drop(Cardinal c, unsigned cap) {
  if (c.is_zero()) throw Error("count already 0");
  return c.is_finite() ? Cardinal::fin(c.value() - 1) : Cardinal::fin(cap);
}

}  // namespace detail

// A strict neighbour under cm_dominates with dense support. Up duplicates
// the first representative that is not yet at w. Down prefers lowering an
// excess count, then (base all) removes the next unedited representative,
// then lowers any count whose loss keeps the support dense.
inline ModelSpec perturb(const ModelSpec& m, Direction dir) {
  if (m.space.family != Family::Iup) throw Error("perturb is defined for iup models only");
  validate(m);
  const auto cells = enumerate_types(m.space);
  ModelSpec out = m;
  if (dir == Direction::Up) {
    for (const auto& c : cells) {
      const Cardinal cur = m.count(c.id);
      if (cur.is_finite()) {
        out.counts[c.id] = detail::bump(cur, m.cap);
        out.normalize();
        return out;
      }
    }
    throw Error("perturb up: every representative is already realized w times");
  }
  for (const auto& [id, c] : m.counts)
    if (card_lt(Cardinal::fin(1), c)) {
      out.counts[id] = detail::drop(c, m.cap);
      out.normalize();
      return out;
    }
  if (m.base == Base::All) {
    for (const auto& c : cells)
      if (!m.counts.contains(c.id)) {
        out.counts[c.id] = Cardinal::fin(0);
        return out;
      }
  }
  for (const auto& [id, c] : m.counts) {
    if (c.is_zero()) continue;
    ModelSpec trial = m;
    trial.counts[id] = detail::drop(c, m.cap);
    trial.normalize();
    if (is_dense(trial)) return trial;
  }
  throw Error("perturb down: no strictly smaller dense model in this representation");
}

// Entries q_0, q_1, ... with q_n <=_RK q_{n+1}; witnesses[n] labels the
// edge q_{n+1} dominates q_n.
struct RkSequence {
  std::vector<std::string> entries;
  std::vector<std::string> witnesses;
};

inline Report check_sequence(const RkSequence& q, const DominationGraph& g) {
  Report r;
  r.title = "rk-sequence";
  r.check("nonempty", !q.entries.empty(), "a sequence needs at least one entry");
  const std::size_t steps = q.entries.empty() ? 0 : q.entries.size() - 1;
  r.check("witness-count", q.witnesses.size() == steps,
          "expected " + std::to_string(steps) + " witnesses, got " +
              std::to_string(q.witnesses.size()));
  for (std::size_t i = 0; i + 1 < q.entries.size() && i < q.witnesses.size(); ++i) {
    const auto& lo = q.entries[i];
    const auto& hi = q.entries[i + 1];
    const bool ok = std::any_of(g.edges().begin(), g.edges().end(), [&](const DomEdge& e) {
      return e.q == hi && e.p == lo && e.label == q.witnesses[i];
    });
    r.check("step-" + std::to_string(i), ok,
            hi + " dominates " + lo + " via " + q.witnesses[i] + (ok ? "" : " is not in the graph"));
  }
  return r;
}

namespace detail {

inline std::set<TypeId> cone_union(const TypeSpace& ts, const RkSequence& q,
                                   const std::vector<std::vector<TypeId>>& cones, unsigned d) {
  if (cones.size() != q.entries.size())
    throw Error("cone data has " + std::to_string(cones.size()) + " entries for a sequence of " +
                std::to_string(q.entries.size()));
  std::set<TypeId> out;
  for (const auto& cone : cones)
    for (const auto& id : cone) {
      const auto cell = truncate(ts, id, d);
      if (!cell) throw Error("cone member " + to_string(id) + " is not a type of the space");
      out.insert(*cell);
    }
  return out;
}

}  // namespace detail

// Depth-d rendering of the elementary-submodel condition: every consistent
// literal conjunction lies in some type dominated by an entry. The
// extension clause for existential formulas has nothing to act on in the
// literal fragment and is reported as such.
inline Report elementary_submodel_report(const TypeSpace& ts, const RkSequence& q,
                                         const std::vector<std::vector<TypeId>>& cones,
                                         unsigned depth) {
  const TypeSpace at = ts.at_depth(depth);
  const auto covered = detail::cone_union(at, q, cones, depth);
  Report r;
  r.title = "elementary-submodel";
  std::size_t missing = 0;
  std::string first;
  for (const auto& c : enumerate_types(at))
    if (!covered.contains(c.id)) {
      if (!missing++) first = to_string(c.id);
    }
  r.check("covers-cells", missing == 0,
          missing ? std::to_string(missing) + " cells uncovered, first " + first
                  : "all cells dominated");
  r.fact("depth", std::to_string(depth));
  r.fact("exists-clause", "vacuous in the literal fragment");
  return r;
}

inline bool is_elementary_submodel_sequence(const TypeSpace& ts, const RkSequence& q,
                                            const std::vector<std::vector<TypeId>>& cones,
                                            unsigned depth) {
  return elementary_submodel_report(ts, q, cones, depth).passed();
}

// Round-robin enumeration: each round gives every depth cell one slot and
// fills it with a witness from the dominated cells; `rounds` beyond the cap
// saturate to w.
inline ModelSpec construct_model(const TypeSpace& ts, const RkSequence& q,
                                 const std::vector<std::vector<TypeId>>& cones, unsigned depth,
                                 unsigned rounds = kDefaultCountCap + 1) {
  if (!is_elementary_submodel_sequence(ts, q, cones, depth))
    throw Error("construct_model: the sequence does not yield an elementary submodel");
  const TypeSpace at = ts.at_depth(depth);
  const auto dominated = detail::cone_union(at, q, cones, depth);
  ModelSpec m;
  m.space = at;
  m.base = Base::None;
  std::map<TypeId, unsigned> slots;
  const auto cells = enumerate_types(at);
  for (unsigned r = 0; r < rounds; ++r)
    for (const auto& c : cells) {
      // The witness for a cell formula is the cell's own dominated type.
      if (!dominated.contains(c.id)) throw Error("construct_model: no witness for a cell");
      ++slots[c.id];
    }
  for (const auto& [id, n] : slots)
    m.counts[id] = n > m.cap ? Cardinal::omega() : Cardinal::fin(n);
  return m;
}

struct SumResult {
  Cardinal total;
  bool equals_continuum = false;
};

inline SumResult sum_Iq(const std::vector<Cardinal>& parts) {
  if (parts.empty()) throw Error("sum_Iq of an empty list");
  const Cardinal t = card_total(parts);
  return {t, t.is_continuum()};
}

// `copies` summands each equal to `each`; copies may be infinite.
inline SumResult sum_Iq_uniform(Cardinal copies, Cardinal each) {
  Cardinal t = Cardinal::fin(0);
  if (copies.is_zero() || each.is_zero()) {
    t = Cardinal::fin(0);
  } else if (copies.is_finite()) {
    for (std::uint64_t i = 0; i < copies.value(); ++i) t = card_sum(t, each);
  } else {
    t = copies < each ? each : copies;
  }
  return {t, t.is_continuum()};
}

// Every tuple of realized cells extends, inside the model, to one over which
// every consistent one-variable formula is an i-formula. In the unary
// literal fragment a formula over b is a conjunction with literals x = b_i
// or x != b_i. An equality literal is isolated by itself; otherwise the
// parameters only exclude finitely many realizations and the formula is
// classified as in the family. So every tuple passes or none does.
inline Report npl_zero_report(const TypeSpace& ts, const ModelSpec& spec, unsigned depth) {
  if (spec.space.family != ts.family || spec.space.m != ts.m)
    throw Error("npl_zero_check: model and type space belong to different families");
  validate(spec);
  const TypeSpace at = ts.at_depth(depth);
  std::string ni;
  for (const auto& c : enumerate_types(at))
    if (classify_formula(at, cell_formula(at, c.id)) == FormulaClass::NiFormula) {
      ni = to_string(cell_formula(at, c.id));
      break;
    }
  std::set<TypeId> sup;
  for (const auto& id : support(spec)) {
    const auto cell = truncate(spec.space, id, std::min(depth, spec.space.depth));
    if (!cell) throw Error("npl_zero_check: cell " + to_string(id) + " does not truncate");
    sup.insert(*cell);
  }
  const std::size_t k = sup.size();
  const std::size_t tuples = 1 + k + k * (k + 1) / 2;  // multisets of size <= 2
  Report r;
  r.title = "npl-zero";
  r.check("tuples-extend", ni.empty(),
          ni.empty() ? std::to_string(tuples) + " tuples extend"
                     : "ni-formula " + ni + " over every tuple");
  r.fact("tuples", std::to_string(tuples));
  r.fact("depth", std::to_string(depth));
  return r;
}

inline bool npl_zero_check(const TypeSpace& ts, const ModelSpec& spec, unsigned depth) {
  return npl_zero_report(ts, spec, depth).passed();
}

}  // namespace rkbench
