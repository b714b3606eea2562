#pragma once

// Distribution triples cm3(T) = (P(T), L(T), NPL(T)), admissible limit-count
// functions f, and blueprints that realize a preorder with given f through
// the operators.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/domination.hpp"
#include "rkbench/error.hpp"
#include "rkbench/operators.hpp"
#include "rkbench/pipeline.hpp"
#include "rkbench/preorder.hpp"
#include "rkbench/report.hpp"

namespace rkbench {

struct Cm3Triple {
  Cardinal p;    // prime models
  Cardinal l;    // limit models
  Cardinal npl;  // neither prime nor limit

  friend bool operator==(const Cm3Triple&, const Cm3Triple&) = default;
};

inline std::string to_string(const Cm3Triple& t) {
  return to_string(t.p) + "," + to_string(t.l) + "," + to_string(t.npl);
}

inline std::optional<Cm3Triple> try_parse_triple(const std::string& s) {
  std::vector<Cardinal> parts;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      auto c = try_parse_cardinal(cur);
      if (!c) return std::nullopt;
      parts.push_back(*c);
      cur.clear();
    } else if (ch != ' ' && ch != '(' && ch != ')') {
      cur += ch;
    }
  }
  if (parts.size() != 3) return std::nullopt;
  return Cm3Triple{parts[0], parts[1], parts[2]};
}

enum class TheoryClass { Small, Tc };

inline const char* to_string(TheoryClass c) { return c == TheoryClass::Small ? "small" : "tc"; }

// ---------------------------------------------------------------------------
// Classification

enum class VerdictKind { AdmissibleSmall, AdmissibleTc, Inadmissible };

enum class Reason {
  None,
  NoContinualCoordinate,  // tc theories have continuum many countable models
  ContinualLOnly,         // (l1, c, l3) with l1, l3 < c
  ContinualPOnly,         // (c, l2, l3) with l2, l3 < c
  PZeroLPositive,         // no prime models forces no limit models
  SmallNplNonzero,
  SmallPOutOfRange,
  SmallLZero,
  SmallOnePrimeWithLimits,
};

inline const char* to_string(Reason r) {
  switch (r) {
    case Reason::None: return "none";
    case Reason::NoContinualCoordinate: return "no-continual-coordinate";
    case Reason::ContinualLOnly: return "continual-l-only";
    case Reason::ContinualPOnly: return "continual-p-only";
    case Reason::PZeroLPositive: return "p-zero-l-positive";
    case Reason::SmallNplNonzero: return "small-npl-nonzero";
    case Reason::SmallPOutOfRange: return "small-p-out-of-range";
    case Reason::SmallLZero: return "small-l-zero";
    case Reason::SmallOnePrimeWithLimits: return "small-one-prime-with-limits";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::Inadmissible;
  int which = 0;  // small case 1|2, or tc family 1|2|3
  Reason reason = Reason::None;
  bool realization_unknown = false;  // l = w1 in a small triple
  bool outside_ch = false;           // w1 kept as a value with ch = false

  bool admissible() const { return kind != VerdictKind::Inadmissible; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline std::string to_string(const Verdict& v) {
  std::string out;
  switch (v.kind) {
    case VerdictKind::AdmissibleSmall: out = "AdmissibleSmall case " + std::to_string(v.which); break;
    case VerdictKind::AdmissibleTc: out = "AdmissibleTc family " + std::to_string(v.which); break;
    case VerdictKind::Inadmissible: out = std::string("Inadmissible ") + to_string(v.reason); break;
  }
  if (v.realization_unknown) out += " (realization unknown)";
  if (v.outside_ch) out += " (outside the continuum hypothesis)";
  return out;
}

namespace detail {

inline bool is_c(Cardinal x, bool ch) { return card_eq(x, Cardinal::continuum(), ch); }

// Membership in w u {w, c}. Without CH, w1 is kept as a value (it is in the
// value set of IL) and flagged.
inline bool in_values(Cardinal x, bool ch, bool& outside) {
  if (x.kind() == Cardinal::Kind::Omega1 && !ch) outside = true;
  return true;
}

}  // namespace detail

// The tc families as data: number, pattern, predicate.
struct TcFamily {
  int number;
  const char* pattern;
  bool (*matches)(const Cm3Triple&, bool ch);
};

inline const std::vector<TcFamily>& tc_families() {
  static const std::vector<TcFamily> fams = {
      {1, "(c, c, l)",
       [](const Cm3Triple& t, bool ch) { return detail::is_c(t.p, ch) && detail::is_c(t.l, ch); }},
      {2, "(0, 0, c)",
       [](const Cm3Triple& t, bool ch) {
         return t.p.is_zero() && t.l.is_zero() && detail::is_c(t.npl, ch);
       }},
      {3, "(l1 >= 1, l2, c)",
       [](const Cm3Triple& t, bool ch) { return !t.p.is_zero() && detail::is_c(t.npl, ch); }},
  };
  return fams;
}

inline std::vector<int> matching_families(const Cm3Triple& t, bool ch = kDefaultCH) {
  std::vector<int> out;
  for (const auto& f : tc_families())
    if (f.matches(t, ch)) out.push_back(f.number);
  return out;
}

// (c, c, c) lies in families 1 and 3; the lowest matching family is
// reported.
inline Verdict classify_triple(const Cm3Triple& t, TheoryClass cls, bool ch = kDefaultCH) {
  Verdict v;
  const auto w = Cardinal::omega();
  if (cls == TheoryClass::Small) {
    if (!t.npl.is_zero()) return v.reason = Reason::SmallNplNonzero, v;
    if (t.p == Cardinal::fin(1)) {
      if (!t.l.is_zero()) return v.reason = Reason::SmallOnePrimeWithLimits, v;
      v.kind = VerdictKind::AdmissibleSmall;
      v.which = 1;
      return v;
    }
    if (t.p.is_zero() || !card_le(t.p, w, ch)) return v.reason = Reason::SmallPOutOfRange, v;
    if (t.l.is_zero()) return v.reason = Reason::SmallLZero, v;
    v.kind = VerdictKind::AdmissibleSmall;
    v.which = 2;
    v.realization_unknown = t.l.kind() == Cardinal::Kind::Omega1;
    v.outside_ch = !ch && t.l.kind() == Cardinal::Kind::Omega1;
    return v;
  }
  const bool pc = detail::is_c(t.p, ch), lc = detail::is_c(t.l, ch), nc = detail::is_c(t.npl, ch);
  if (!pc && !lc && !nc) return v.reason = Reason::NoContinualCoordinate, v;
  const auto fams = matching_families(t, ch);
  if (!fams.empty()) {
    v.kind = VerdictKind::AdmissibleTc;
    v.which = fams.front();
    for (Cardinal x : {t.p, t.l, t.npl}) detail::in_values(x, ch, v.outside_ch);
    return v;
  }
  if (!nc && lc) v.reason = Reason::ContinualLOnly;
  else if (!nc && pc) v.reason = Reason::ContinualPOnly;
  else v.reason = Reason::PZeroLPositive;
  return v;
}

// ---------------------------------------------------------------------------
// Decomposition

struct Decomposition {
  Cardinal total;
  bool tc_checked = false;
  bool tc_ok = true;  // total = c when checked
};

// I(T, w) = rk + sum il + npl.
inline Decomposition decompose(Cardinal rk, const std::vector<Cardinal>& il, Cardinal npl,
                               bool tc = false, bool ch = kDefaultCH) {
  Decomposition d;
  d.total = card_sum(rk, card_sum(card_total(il), npl));
  d.tc_checked = tc;
  d.tc_ok = !tc || detail::is_c(d.total, ch);
  return d;
}

// Uniform choice of realizations together with uncountably many types
// forces continuum many prime models; applied only when both are asserted.
inline std::optional<Cardinal> uniform_choice_rule(bool uniform_choice, bool uncountably_many) {
  if (uniform_choice && uncountably_many) return Cardinal::continuum();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Distribution specs

enum class SpecMode { Finite, Countable };

inline const char* to_string(SpecMode m) { return m == SpecMode::Finite ? "finite" : "countable"; }

// How a countable X continues past its finite truncation.
enum class GrowthKind { None, ChainAbove, Antichain, ContinualAntichain };

inline const char* to_string(GrowthKind g) {
  switch (g) {
    case GrowthKind::None: return "none";
    case GrowthKind::ChainAbove: return "chain-above";
    case GrowthKind::Antichain: return "antichain";
    case GrowthKind::ContinualAntichain: return "continual-antichain";
  }
  return "?";
}

struct Growth {
  GrowthKind kind = GrowthKind::None;
  std::size_t anchor = 0;  // ChainAbove: generated chain sits above this element
  friend bool operator==(const Growth&, const Growth&) = default;
};

// A <=-sequence: a finite prefix, then either a repeated cycle or the
// generated chain g1 < g2 < ... of a ChainAbove growth rule.
struct FSequence {
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
  bool generated = false;
  friend bool operator==(const FSequence&, const FSequence&) = default;
};

enum class Label { P, NPL };

struct DistributionSpec {
  Preorder x;
  SpecMode mode = SpecMode::Finite;
  TheoryClass cls = TheoryClass::Tc;
  Growth growth;
  std::map<std::size_t, Cardinal> class_f;  // keyed by the least element of a class
  std::vector<std::pair<FSequence, Cardinal>> seq_f;
  std::optional<std::vector<Label>> partition;

  std::size_t size() const { return x.size(); }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

inline std::size_t class_key(const Preorder& x, std::size_t e) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.equiv(i, e)) return i;
  return e;
}

inline Cardinal class_value(const DistributionSpec& s, std::size_t e) {
  auto it = s.class_f.find(class_key(s.x, e));
  return it == s.class_f.end() ? Cardinal::fin(0) : it->second;
}

// Sets f on e's class; zero erases the entry.
inline void set_class_f(DistributionSpec& s, std::size_t e, Cardinal v) {
  const auto k = class_key(s.x, e);
  if (v.is_zero()) s.class_f.erase(k);
  else s.class_f[k] = v;
}

inline Label label_of(const DistributionSpec& s, std::size_t e) {
  return s.partition ? (*s.partition)[e] : Label::P;
}

// Throws on a malformed spec; semantic conditions are validate_f's job.
inline void check_well_formed(const DistributionSpec& s) {
  const auto n = s.size();
  auto bad = [](const std::string& m) { throw Error("malformed distribution spec: " + m); };
  if (n == 0) bad("the preorder is empty");
  if (!s.x.is_closed()) bad("the preorder is not transitively closed");
  for (const auto& [k, v] : s.class_f) {
    if (k >= n) bad("f names element " + std::to_string(k) + " outside X");
    if (class_key(s.x, k) != k) bad("f key " + std::to_string(k) + " is not the least element of its class");
    if (v.is_zero()) bad("f lists a zero value for class " + std::to_string(k));
  }
  if (s.mode == SpecMode::Finite) {
    if (!s.seq_f.empty()) bad("finite mode takes f on classes, not sequences");
    if (s.growth.kind != GrowthKind::None) bad("finite mode has no growth rule");
  } else if (!s.class_f.empty()) {
    bad("countable mode takes f on sequences, not classes");
  }
  if (s.growth.kind == GrowthKind::ChainAbove && s.growth.anchor >= n)
    bad("growth anchor outside X");
  for (const auto& [y, v] : s.seq_f) {
    for (auto e : y.prefix) if (e >= n) bad("sequence element outside X");
    for (auto e : y.cycle) if (e >= n) bad("sequence element outside X");
    if (y.generated == !y.cycle.empty()) bad("a sequence needs exactly one of a cycle or a generated tail");
    if (y.generated && s.growth.kind != GrowthKind::ChainAbove)
      bad("a generated tail needs a chain-above growth rule");
  }
  for (std::size_t i = 0; i < s.seq_f.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (s.seq_f[i].first == s.seq_f[j].first) bad("sequence listed twice");
  if (s.partition && s.partition->size() != n) bad("partition size differs from |X|");
}

namespace detail {

inline constexpr long kGen = -1;  // the generated chain, as a cycle symbol

struct Lasso {
  std::vector<long> prefix, cycle;
};

// Shortest period of a cycle.
inline std::vector<long> min_period(const std::vector<long>& c) {
  for (std::size_t p = 1; p <= c.size(); ++p) {
    if (c.size() % p) continue;
    bool ok = true;
    for (std::size_t i = p; ok && i < c.size(); ++i) ok = c[i] == c[i - p];
    if (ok) return {c.begin(), c.begin() + static_cast<long>(p)};
  }
  return c;
}

inline Lasso lasso(const FSequence& y) {
  Lasso l;
  for (auto e : y.prefix) l.prefix.push_back(static_cast<long>(e));
  if (y.generated) {
    l.cycle = {kGen};
  } else {
    for (auto e : y.cycle) l.cycle.push_back(static_cast<long>(e));
    l.cycle = min_period(l.cycle);
  }
  return l;
}

inline long at(const Lasso& l, std::size_t i) {
  return i < l.prefix.size() ? l.prefix[i] : l.cycle[(i - l.prefix.size()) % l.cycle.size()];
}

// Is `sub` a subsequence of `sup` (both infinite)? Greedy matching over a
// finite state space: positions are taken modulo the cycles.
inline bool is_subsequence(const FSequence& sub_seq, const FSequence& sup_seq) {
  const Lasso a = lasso(sub_seq), b = lasso(sup_seq);
  const std::size_t bn = b.prefix.size() + b.cycle.size();
  auto norm = [](const Lasso& l, std::size_t i) {
    return i < l.prefix.size() ? i : l.prefix.size() + (i - l.prefix.size()) % l.cycle.size();
  };
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t i = 0, j = 0;  // next element of a to match, next position of b
  for (;;) {
    if (i >= a.prefix.size() && !seen.insert({i, j}).second) return true;
    const long want = at(a, i);
    std::size_t steps = 0;
    while (at(b, j) != want) {
      j = norm(b, j + 1);
      if (++steps > bn) return false;
    }
    j = norm(b, j + 1);
    i = norm(a, i + 1);
  }
}

// y_{k+n} = y'_{m+n} from some n on.
inline bool same_tail(const FSequence& y1, const FSequence& y2) {
  const Lasso a = lasso(y1), b = lasso(y2);
  if (a.cycle.size() != b.cycle.size()) return false;
  const std::size_t m = a.cycle.size();
  for (std::size_t r = 0; r < m; ++r) {
    bool eq = true;
    for (std::size_t k = 0; eq && k < m; ++k) eq = a.cycle[k] == b.cycle[(k + r) % m];
    if (eq) return true;
  }
  return false;
}

inline bool eventually_constant(const FSequence& y) {
  return !y.generated && lasso(y).cycle.size() == 1;
}

inline std::vector<std::size_t> explicit_elements(const FSequence& y) {
  std::vector<std::size_t> out = y.prefix;
  out.insert(out.end(), y.cycle.begin(), y.cycle.end());
  return out;
}

inline std::string show(const FSequence& y) {
  std::string s;
  for (auto e : y.prefix) s += std::to_string(e) + " ";
  s += "|";
  if (y.generated) s += " gen";
  for (auto e : y.cycle) s += " " + std::to_string(e);
  return s;
}

inline std::optional<std::size_t> least_element(const Preorder& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; all && j < x.size(); ++j) all = x.le(i, j);
    if (all) return i;
  }
  return std::nullopt;
}

inline bool codomain_ok(Cardinal v) { return v.kind() != Cardinal::Kind::Omega1; }

// Is every consecutive pair of y (with the tail) related by <=?
inline bool is_chain(const DistributionSpec& s, const FSequence& y) {
  std::vector<std::size_t> seq = y.prefix;
  if (y.generated) {
    if (!seq.empty() && !s.x.le(seq.back(), s.growth.anchor)) return false;
  } else {
    seq.insert(seq.end(), y.cycle.begin(), y.cycle.end());
    seq.push_back(y.cycle.front());
  }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (!s.x.le(seq[i], seq[i + 1])) return false;
  return true;
}

inline bool is_cofinal(const DistributionSpec& s, const FSequence& y) {
  if (s.growth.kind != GrowthKind::None && !(y.generated && s.growth.kind == GrowthKind::ChainAbove))
    return false;
  auto tops = explicit_elements(y);
  if (y.generated) tops.push_back(s.growth.anchor);
  for (std::size_t e = 0; e < s.size(); ++e)
    if (std::none_of(tops.begin(), tops.end(), [&](std::size_t t) { return s.x.le(e, t); }))
      return false;
  return true;
}

inline std::string node_name(std::size_t e) { return "P" + std::to_string(e); }

inline std::optional<std::size_t> element_of_node(const std::string& id) {
  if (id == "Pinf") return 0;
  if (id.size() < 2 || id[0] != 'P' || id.find_first_not_of("0123456789", 1) != std::string::npos)
    return std::nullopt;
  if (id.size() > 2 && id[1] == '0') return std::nullopt;
  return std::stoull(id.substr(1));
}

}  // namespace detail

// IL obligations read off a registry: a ~-class with two non-isomorphic
// prime models, or a node whose realizations admit a limit model, needs
// f >= 1 on the matching class of the spec.
inline void check_registry_obligations(Report& r, const DistributionSpec& s,
                                       const DominationGraph& g) {
  const RkStructure rk = rk_structure(g);
  std::vector<std::string> missing;
  std::size_t obligations = 0;
  auto need = [&](const std::string& id, const std::string& why) {
    ++obligations;
    auto e = detail::element_of_node(id);
    if (!e || *e >= s.size()) {
      missing.push_back(id + " (" + why + ", no matching element)");
    } else if (class_value(s, *e).is_zero()) {
      missing.push_back("class of " + std::to_string(*e) + " (" + why + ")");
    }
  };
  for (std::size_t c = 0; c < rk.quotient.size(); ++c)
    if (rk.iso_count(c) > 1) need(rk.iso_types[rk.quotient.classes[c].front()].front(),
                                   "non-isomorphic prime models");
  for (const auto& n : g.nodes())
    if (n.realizations && n.prime && limit_exists_over(*n.realizations, true))
      need(n.id, "limit model over realizations");
  std::string detail;
  for (const auto& m : missing) detail += (detail.empty() ? "" : "; ") + m;
  r.check("il-obligation", missing.empty(),
          missing.empty() ? std::to_string(obligations) + " obligations met" : detail);
}

// Admissibility of f for the spec's mode and theory class. `registry`
// adds the cross-check against a built domination graph.
inline Report validate_f(const DistributionSpec& s, const DominationGraph* registry = nullptr) {
  check_well_formed(s);
  using namespace detail;
  Report r;
  r.title = std::string("validate f (") + to_string(s.mode) + ", " + to_string(s.cls) + ")";
  const auto q = sim_quotient(s.x);
  {
    std::string bad;
    for (const auto& [k, v] : s.class_f)
      if (!codomain_ok(v)) bad += " class " + std::to_string(k);
    for (const auto& [y, v] : s.seq_f)
      if (!codomain_ok(v)) bad += " [" + show(y) + "]";
    r.check("codomain", bad.empty(), bad.empty() ? "values in w u {w, c}" : "w1 at" + bad);
  }
  const auto least = least_element(s.x);

  if (s.mode == SpecMode::Finite) {
    if (s.cls == TheoryClass::Small) {
      r.check("least-element", least.has_value(), "X needs a least element");
      r.check("f-least-zero", !least || class_value(s, *least).is_zero(),
              least ? "f(class of " + std::to_string(*least) + ") = " + to_string(class_value(s, *least))
                    : "no least element");
      const auto maxima = q.maximal_classes();
      r.check("greatest-class", maxima.size() == 1, std::to_string(maxima.size()) + " maximal classes");
      const bool top_ok = maxima.size() != 1 || s.size() <= 1 ||
                          !class_value(s, q.classes[maxima.front()].front()).is_zero();
      r.check("f-greatest-positive", top_ok, "f of the greatest class when |X| > 1");
    }
    std::string bad;
    for (const auto& cls : q.classes)
      if (cls.size() > 1 && class_value(s, cls.front()).is_zero())
        bad += (bad.empty() ? "" : ", ") + std::to_string(cls.front());
    r.check("class-size", bad.empty(),
            bad.empty() ? "every class with two elements has f >= 1" : "f = 0 on classes of " + bad);
  } else {
    std::string not_chain;
    for (const auto& [y, v] : s.seq_f)
      if (!is_chain(s, y)) not_chain += " [" + show(y) + "]";
    r.check("sequence-chain", not_chain.empty(), not_chain.empty() ? "" : "not <=-chains:" + not_chain);
    if (s.cls == TheoryClass::Small) {
      r.check("least-element", least.has_value(), "X needs a least element");
      r.check("directed", s.growth.kind == GrowthKind::None || s.growth.kind == GrowthKind::ChainAbove
                              ? is_upward_directed(s.x)
                              : false,
              "X must be upward directed");
      std::string on_least;
      if (least)
        for (const auto& [y, v] : s.seq_f) {
          const auto el = explicit_elements(y);
          if (std::find(el.begin(), el.end(), *least) != el.end()) on_least += " [" + show(y) + "]";
        }
      r.check("sequences-avoid-least", on_least.empty(),
              on_least.empty() ? "" : "sequences through the least element:" + on_least);
      std::string cof;
      for (const auto& [y, v] : s.seq_f)
        if (v.is_zero() && is_cofinal(s, y)) cof += " [" + show(y) + "]";
      r.check("cofinal-positive", cof.empty(), cof.empty() ? "" : "cofinal with f = 0:" + cof);
    }
    std::string rep;
    for (const auto& [y, v] : s.seq_f)
      if (v.is_zero() && !eventually_constant(y)) rep += " [" + show(y) + "]";
    r.check("non-repeating-positive", rep.empty(),
            rep.empty() ? "" : "not eventually constant with f = 0:" + rep);
    std::string mono, tail;
    for (const auto& [y, v] : s.seq_f)
      for (const auto& [y2, v2] : s.seq_f) {
        if (&y == &y2) continue;
        if (is_subsequence(y2, y) && card_lt(v2, v)) mono += " [" + show(y) + "]>[" + show(y2) + "]";
        if (same_tail(y, y2) && !card_eq(v, v2) && show(y) < show(y2))
          tail += " [" + show(y) + "]~[" + show(y2) + "]";
      }
    r.check("subsequence-monotone", mono.empty(),
            mono.empty() ? "" : "f(y) > f(y') for a subsequence y':" + mono);
    r.check("tail-invariant", tail.empty(), tail.empty() ? "" : "equal tails, different f:" + tail);
    if (s.partition) {
      std::string out;
      for (const auto& [y, v] : s.seq_f)
        for (auto e : explicit_elements(y))
          if ((*s.partition)[e] == Label::NPL) {
            out += " [" + show(y) + "]";
            break;
          }
      r.check("sequences-in-P", out.empty(), out.empty() ? "" : "sequences through NPL:" + out);
    }
  }
  if (registry) check_registry_obligations(r, s, *registry);
  return r;
}

// ---------------------------------------------------------------------------
// Blueprints

enum class Variant { T77, T84, T91, T92 };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::T77: return "t77";
    case Variant::T84: return "t84";
    case Variant::T91: return "t91";
    case Variant::T92: return "t92";
  }
  return "?";
}

inline std::optional<Variant> try_parse_variant(const std::string& s) {
  for (Variant v : {Variant::T77, Variant::T84, Variant::T91, Variant::T92})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

struct QEdge {
  std::string lower, upper;
  bool principal = true;
  friend bool operator==(const QEdge&, const QEdge&) = default;
};

struct SystemPlan {
  std::string op;  // lmt, lms or free
  std::vector<std::string> nodes;
  Cardinal target;
  friend bool operator==(const SystemPlan&, const SystemPlan&) = default;
};

struct TheoryBlueprint {
  Variant variant = Variant::T77;
  std::vector<std::string> predicates;
  std::vector<QEdge> q_edges;
  Pipeline plan;
  std::vector<SystemPlan> identity_systems;
  Cm3Triple predicted;
};

// Generated elements take the anchor's label (chain) or NPL (antichains,
// when a partition is given).
inline Cm3Triple predicted_triple(const DistributionSpec& s, Variant v) {
  const auto c = Cardinal::continuum();
  Cardinal l = Cardinal::fin(0);
  for (const auto& [k, f] : s.class_f) l = card_sum(l, f);
  for (const auto& [y, f] : s.seq_f) l = card_sum(l, f);
  std::uint64_t np = 0, nn = 0;
  for (std::size_t e = 0; e < s.size(); ++e) (label_of(s, e) == Label::P ? np : nn) += 1;
  Cardinal gp = Cardinal::fin(0), gn = Cardinal::fin(0);
  const Label anti = s.partition ? Label::NPL : Label::P;
  auto grow = [&](Label lab, Cardinal k) { (lab == Label::P ? gp : gn) = k; };
  switch (s.growth.kind) {
    case GrowthKind::None: break;
    case GrowthKind::ChainAbove: grow(label_of(s, s.growth.anchor), Cardinal::omega()); break;
    case GrowthKind::Antichain: grow(anti, Cardinal::omega()); break;
    case GrowthKind::ContinualAntichain: grow(anti, c); break;
  }
  switch (v) {
    case Variant::T77:
    case Variant::T84: return {card_sum(Cardinal::fin(np + nn), card_sum(gp, gn)), l, c};
    case Variant::T91: return {card_sum(Cardinal::fin(np), gp), l, c};
    case Variant::T92: return {c, l, card_sum(Cardinal::fin(nn), gn)};
  }
  return {};
}

namespace detail {

// Components of the comparability graph, each listed lower elements first.
inline std::vector<std::vector<std::size_t>> components_in_order(const Preorder& x) {
  const auto n = x.size();
  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::vector<std::size_t> stack{s}, members;
    comp[s] = out.size();
    while (!stack.empty()) {
      const auto a = stack.back();
      stack.pop_back();
      members.push_back(a);
      for (std::size_t b = 0; b < n; ++b)
        if (comp[b] == n && (x.le(a, b) || x.le(b, a))) {
          comp[b] = out.size();
          stack.push_back(b);
        }
    }
    std::vector<std::size_t> below(n, 0);
    for (auto a : members)
      for (std::size_t b = 0; b < n; ++b) below[a] += x.le(b, a) && !x.le(a, b);
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return below[a] != below[b] ? below[a] < below[b] : a < b;
    });
    out.push_back(members);
  }
  return out;
}

inline bool is_maximal(const Preorder& x, std::size_t a) {
  for (std::size_t b = 0; b < x.size(); ++b)
    if (x.le(a, b) && !x.le(b, a)) return false;
  return true;
}

inline PipelineOp op(std::string name, std::map<std::string, std::string> args,
                     std::set<std::string> flags = {}) {
  return PipelineOp{std::move(name), std::move(args), std::move(flags), 0};
}

inline std::vector<std::string> sequence_nodes(const DistributionSpec& s, const FSequence& y) {
  std::vector<std::string> out;
  for (auto e : y.prefix) out.push_back(node_name(e));
  for (auto e : y.cycle) out.push_back(node_name(e));
  if (y.generated) out.push_back(node_name(s.growth.anchor));
  return out;
}

}  // namespace detail

// Operator plan for the spec. icp runs at depth 1; fan-out and seed are
// replay parameters.
inline TheoryBlueprint build_blueprint(const DistributionSpec& s, Variant v) {
  using namespace detail;
  check_well_formed(s);
  if (v == Variant::T77 && s.mode != SpecMode::Finite)
    throw Error("t77 needs a finite-mode spec (f on classes)");
  if (v != Variant::T77 && s.mode != SpecMode::Countable)
    throw Error(std::string(to_string(v)) + " needs a countable-mode spec (f on sequences)");
  if ((v == Variant::T91 || v == Variant::T92) && !s.partition)
    throw Error(std::string(to_string(v)) + " needs a P/NPL partition");
  const Report val = validate_f(s);
  if (!val.passed()) {
    std::string rules;
    for (const auto& e : val.violations()) rules += " " + e.rule;
    throw Error("f is not admissible:" + rules);
  }

  TheoryBlueprint b;
  b.variant = v;
  b.predicted = predicted_triple(s, v);
  const auto n = s.size();
  const auto comps = components_in_order(s.x);
  const auto q = sim_quotient(s.x);
  auto& plan = b.plan.ops;

  for (std::size_t e = 0; e < n; ++e) b.predicates.push_back(node_name(e));
  if (v == Variant::T84) b.predicates.push_back("Pinf");
  for (const auto& p : b.predicates) plan.push_back(op("pred", {{"name", p}, {"colors", "0,inf"}}));

  // Covers between classes, then a non-principal cycle inside each class.
  for (auto [lo, hi] : q.covers())
    b.q_edges.push_back({node_name(q.classes[lo].front()), node_name(q.classes[hi].front()), true});
  for (const auto& cls : q.classes)
    if (cls.size() > 1)
      for (std::size_t i = 0; i < cls.size(); ++i)
        b.q_edges.push_back({node_name(cls[i]), node_name(cls[(i + 1) % cls.size()]), false});
  if (v == Variant::T84) {
    b.q_edges.push_back({"P0", "Pinf", true});
    b.q_edges.push_back({"Pinf", "P0", true});
  }
  for (const auto& e : b.q_edges)
    plan.push_back(op("link", {{"lower", e.lower}, {"upper", e.upper}},
                      e.principal ? std::set<std::string>{} : std::set<std::string>{"nonprincipal"}));

  std::vector<std::size_t> order;
  for (const auto& c : comps) order.insert(order.end(), c.begin(), c.end());
  std::vector<std::size_t> p_elems, npl_elems;
  for (auto e : order) (label_of(s, e) == Label::P ? p_elems : npl_elems).push_back(e);

  std::set<std::string> partitioned;
  auto icp_on = [&](const std::string& sub) {
    if (!partitioned.insert(sub).second) return;
    plan.push_back(op("icp", {{"sub", sub}, {"depth", "1"}}));
  };
  auto css_on = [&](const std::string& sub, const std::string& base) {
    plan.push_back(op("css", {{"sub", sub}, {"q", base + ".q0," + base + ".q1"}}));
  };

  std::string base;
  if (v == Variant::T92 && !npl_elems.empty()) {
    for (auto e : npl_elems) icp_on(node_name(e));
    base = node_name(npl_elems.front());
  } else {
    base = node_name(order.front());
    icp_on(base);
  }
  const bool all_css = v == Variant::T77 || v == Variant::T84;
  for (auto e : all_css ? order : p_elems) css_on(node_name(e), base);
  if (v == Variant::T84) css_on("Pinf", base);
  if (v == Variant::T91)
    for (auto e : npl_elems) icp_on(node_name(e));

  std::vector<std::size_t> comp_of(n);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto e : comps[c]) comp_of[e] = c;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = a + 1; c < n; ++c) {
      const bool across = comp_of[a] != comp_of[c];
      const bool maxima = !across && is_maximal(s.x, a) && is_maximal(s.x, c);
      if (across || maxima)
        plan.push_back(op("bu", {{"sub1", node_name(a)}, {"sub2", node_name(c)}, {"depth", "1"}}));
    }

  auto add_system = [&](const std::vector<std::string>& nodes, Cardinal f, bool single) {
    if (f.is_zero()) return;
    std::string list;
    for (std::size_t i = 0; i < nodes.size(); ++i) list += (i ? "," : "") + nodes[i];
    SystemPlan sp{"", nodes, f};
    if (f.is_continuum()) {
      sp.op = "free";
      plan.push_back(op("free", {{single ? "p" : "q", list}, {"lambda", to_string(f)}}));
    } else if (single) {
      sp.op = "lmt";
      plan.push_back(op("lmt", {{"p", list}, {"lambda", to_string(f)}}));
    } else {
      sp.op = "lms";
      plan.push_back(op("lms", {{"q", list}, {"lambda", to_string(f)}}));
    }
    b.identity_systems.push_back(sp);
  };
  for (const auto& [k, f] : s.class_f) add_system({node_name(k)}, f, true);
  for (const auto& [y, f] : s.seq_f) add_system(sequence_nodes(s, y), f, false);
  return b;
}

inline StructSpec replay(const TheoryBlueprint& b, const OperatorConfig& cfg = {}) {
  return run_pipeline(b.plan, cfg);
}

// Reads the replayed registry back against the spec, by node names.
inline Report check_roundtrip(const DistributionSpec& s, const TheoryBlueprint& b,
                              const StructSpec& built) {
  Report r;
  r.title = std::string("round trip ") + to_string(b.variant);
  const auto& g = built.registry;
  const auto n = s.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t e = 0; e < n; ++e) idx[e] = g.index_of(detail::node_name(e));
  const Preorder full = rk_preorder(g);
  std::size_t wrong = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c) wrong += full.le(idx[a], idx[c]) != s.x.le(a, c);
  r.check("preorder", wrong == 0, std::to_string(wrong) + " pairs differ from X");

  std::size_t bad_prime = 0;
  for (std::size_t e = 0; e < n; ++e) {
    const bool want = b.variant == Variant::T77 || b.variant == Variant::T84 ||
                      label_of(s, e) == Label::P;
    bad_prime += g.nodes()[idx[e]].prime != want;
  }
  r.check("prime-nodes", bad_prime == 0, std::to_string(bad_prime) + " elements with the wrong prime status");

  if (b.variant == Variant::T77) {
    const RkStructure rk = rk_structure(g);
    std::size_t extra = 0;
    for (const auto& id : rk.nodes) extra += !detail::element_of_node(id).has_value();
    r.check("rk-nodes", extra == 0 && rk.nodes.size() == n,
            std::to_string(rk.nodes.size()) + " prime nodes for " + std::to_string(n) + " elements");
    const auto q = sim_quotient(s.x);
    std::size_t bad_iso = 0;
    for (const auto& cls : q.classes) {
      std::set<std::size_t> groups;
      for (auto e : cls)
        for (std::size_t t = 0; t < rk.iso_types.size(); ++t)
          for (const auto& id : rk.iso_types[t])
            if (id == detail::node_name(e)) groups.insert(t);
      bad_iso += groups.size() != cls.size();
    }
    r.check("iso-types", bad_iso == 0, std::to_string(bad_iso) + " classes with the wrong number of isomorphism types");
    std::size_t bad_il = 0;
    for (const auto& cls : q.classes) {
      Cardinal il = Cardinal::fin(0);
      for (auto e : cls) il = card_sum(il, g.nodes()[idx[e]].il.value_or(Cardinal::fin(0)));
      bad_il += il != class_value(s, cls.front());
    }
    r.check("il-targets", bad_il == 0, std::to_string(bad_il) + " classes whose IL differs from f");
  } else {
    std::size_t bad = 0;
    for (const auto& sp : b.identity_systems) {
      const bool found = std::any_of(built.systems.begin(), built.systems.end(), [&](const AttachedSystem& a) {
        return a.nodes == sp.nodes && a.system.target == sp.target;
      });
      bad += !found;
    }
    r.check("il-targets", bad == 0 && built.systems.size() == b.identity_systems.size(),
            std::to_string(bad) + " sequences without their limit-model system");
  }
  r.merge(verify_all(built));
  r.fact("universe", std::to_string(built.universe));
  r.fact("triple", to_string(b.predicted));
  return r;
}

// ---------------------------------------------------------------------------
// Corollary specs

enum class Corollary { C78, C85, C93 };

inline const char* to_string(Corollary c) {
  switch (c) {
    case Corollary::C78: return "c78";
    case Corollary::C85: return "c85";
    case Corollary::C93: return "c93";
  }
  return "?";
}

inline std::optional<Corollary> try_parse_corollary(const std::string& s) {
  for (Corollary c : {Corollary::C78, Corollary::C85, Corollary::C93})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

inline constexpr std::uint64_t kCorollaryElementLimit = 256;

struct CorollarySpec {
  DistributionSpec spec;
  Variant variant;
  Cm3Triple target;
};

inline CorollarySpec realize_corollary(Corollary kind, const std::vector<Cardinal>& params) {
  auto value = [](Cardinal c, const char* what) {
    if (c.kind() == Cardinal::Kind::Omega1)
      throw Error(std::string(what) + " must be in w u {w, c}, got w1");
    return c;
  };
  const auto c = Cardinal::continuum();
  CorollarySpec out;
  auto& s = out.spec;
  switch (kind) {
    case Corollary::C78: {
      if (params.size() != 2) throw Error("c78 takes two parameters");
      const Cardinal l1 = params[0], l2 = value(params[1], "c78 lambda2");
      if (!l1.is_finite() || l1.is_zero()) throw Error("c78 lambda1 must be a positive natural number");
      if (l1.value() > kCorollaryElementLimit)
        throw Error("c78 lambda1 above " + std::to_string(kCorollaryElementLimit) + " is not materialized");
      s.x = close(Preorder(l1.value()));
      s.mode = SpecMode::Finite;
      set_class_f(s, 0, l2);
      out.variant = Variant::T77;
      out.target = {l1, l2, c};
      break;
    }
    case Corollary::C85: {
      if (params.size() != 1) throw Error("c85 takes one parameter");
      const Cardinal l = value(params[0], "c85 lambda");
      s.x = close(Preorder(1));
      s.mode = SpecMode::Countable;
      s.growth = {GrowthKind::ChainAbove, 0};
      if (!l.is_zero()) s.seq_f.push_back({FSequence{{0}, {}, true}, l});
      out.variant = Variant::T84;
      out.target = {Cardinal::omega(), l, c};
      break;
    }
    case Corollary::C93: {
      if (params.size() != 1) throw Error("c93 takes one parameter");
      const Cardinal l = value(params[0], "c93 lambda");
      std::uint64_t npl = 0;
      if (l.is_finite()) {
        if (l.value() > kCorollaryElementLimit)
          throw Error("c93 lambda above " + std::to_string(kCorollaryElementLimit) + " is not materialized");
        npl = l.value();
      } else {
        npl = 1;
        s.growth.kind = l.is_continuum() ? GrowthKind::ContinualAntichain : GrowthKind::Antichain;
      }
      s.x = Preorder(2 + npl);
      s.x.add(0, 1);
      s.x.add(1, 0);
      s.x = close(s.x);
      s.mode = SpecMode::Countable;
      s.partition = std::vector<Label>(2 + npl, Label::NPL);
      (*s.partition)[0] = (*s.partition)[1] = Label::P;
      s.seq_f.push_back({FSequence{{}, {0, 1}, false}, c});
      out.variant = Variant::T92;
      out.target = {c, c, l};
      break;
    }
  }
  return out;
}

}  // namespace rkbench
