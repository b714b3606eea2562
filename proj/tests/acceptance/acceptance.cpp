// One line per criterion; exits nonzero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "congruence_oracle.hpp"
#include "gen.hpp"
#include "order_oracle.hpp"
#include "rkbench/rkbench.hpp"
#include "triple_oracle.hpp"

using namespace rkbench;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note = what;
    ok = ok && cond;
  }
};

std::vector<Cardinal> algebra_values() {
  std::vector<Cardinal> out;
  for (std::uint64_t k = 0; k <= 20; ++k) out.push_back(Cardinal::fin(k));
  out.insert(out.end(), {Cardinal::omega(), Cardinal::omega1(), Cardinal::continuum()});
  return out;
}

oracle::Matrix matrix_of(const Preorder& p) {
  oracle::Matrix m(p.size(), std::vector<bool>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) m[i][j] = p.le(i, j);
  return m;
}

Outcome c1_cardinals() {
  Outcome o;
  const auto v = algebra_values();
  for (auto a : v)
    for (auto b : v) {
      o.expect(card_sum(a, b) == card_sum(b, a), "commutativity");
      for (auto c : v) o.expect(card_sum(card_sum(a, b), c) == card_sum(a, card_sum(b, c)), "associativity");
      const Cardinal big = card_le(a, b, false) ? b : a;
      if (!a.is_finite() || !b.is_finite()) o.expect(card_sum(a, b) == big, "absorption");
      for (bool ch : {true, false}) {
        o.expect(card_le(a, b, ch) || card_le(b, a, ch), "totality");
        if (card_le(a, b, ch) && card_le(b, a, ch)) o.expect(card_eq(a, b, ch), "antisymmetry");
        for (auto c : v)
          if (card_le(a, b, ch) && card_le(b, c, ch)) o.expect(card_le(a, c, ch), "transitivity");
      }
    }
  o.expect(card_eq(Cardinal::omega1(), Cardinal::continuum(), true), "ch identifies w1 and c");
  o.expect(card_lt(Cardinal::omega1(), Cardinal::continuum(), false), "w1 < c without ch");
  return o;
}

Outcome c2_preorders() {
  Outcome o;
  gen::Rng rng(2002);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = gen::uniform(rng, 1, 10);
    const auto pairs = gen::random_pairs(rng, n, gen::pick(rng, std::vector<double>{0.05, 0.15, 0.3}));
    const Preorder p = close(Preorder::from_pairs(n, pairs));
    const auto m = oracle::closure(n, pairs);
    o.expect(matrix_of(p) == m, "closure differs from the oracle");
    o.expect(close(p) == p, "closure not idempotent");
    const auto q = sim_quotient(p);
    std::vector<int> hits(n, 0);
    for (std::size_t c = 0; c < q.size(); ++c)
      for (auto e : q.classes[c]) {
        ++hits[e];
        o.expect(q.class_of[e] == c, "class_of disagrees");
        o.expect(p.equiv(e, q.classes[c].front()), "class not an ~-class");
      }
    for (int h : hits) o.expect(h == 1, "quotient is not a partition");
    for (std::size_t a = 0; a < q.size(); ++a)
      for (std::size_t b = 0; b < q.size(); ++b)
        if (a != b) o.expect(!(q.order.le(a, b) && q.order.le(b, a)), "quotient order not antisymmetric");
    o.expect(q.size() == oracle::class_count(m), "class count");
    if (n <= 8) {
      o.expect(height(p) == oracle::brute_height(m), "height");
      o.expect(width(p) == oracle::brute_width(m), "width");
    }
  }
  return o;
}

Outcome c3_premodel() {
  Outcome o;
  PremodelProfile good;
  good.joint_upper_cone_cases = {{Cardinal::omega(), Cardinal::continuum(), false},
                                 {Cardinal::continuum(), Cardinal::fin(0), true},
                                 {Cardinal::continuum(), Cardinal::omega(), false},
                                 {Cardinal::continuum(), Cardinal::continuum(), false}};
  const Report r = check_premodel(good);
  o.expect(r.passed(), "conforming profile rejected");
  o.expect(r.find_fact("width") && *r.find_fact("width") == to_string(Cardinal::continuum()),
           "width is not the continuum");
  for (std::uint64_t h : {1, 2, 7, 1000}) {
    PremodelProfile tall = good;
    tall.height = Cardinal::fin(h);
    o.expect(check_premodel(tall).failed("height"), "finite height accepted");
  }
  return o;
}

// Every conjunction over `atoms`, each absent, positive or negated.
bool exhaustive_ni(const TypeSpace& ts, const std::vector<Atom>& atoms) {
  std::vector<FormulaLit> fs{FormulaLit{}};
  for (const auto& a : atoms) {
    std::vector<FormulaLit> next;
    for (const auto& f : fs) {
      next.push_back(f);
      for (bool pos : {true, false}) {
        FormulaLit g = f;
        g.literals.push_back({a, pos});
        next.push_back(g);
      }
    }
    fs = std::move(next);
  }
  for (const auto& f : fs)
    if (is_consistent(ts, f) && classify_formula(ts, f) == FormulaClass::NiFormula) return true;
  return false;
}

Outcome c4_types() {
  Outcome o;
  for (unsigned d = 1; d <= 12; ++d)
    o.expect(enumerate_types(TypeSpace::iup(d)).size() == (std::size_t{1} << d), "iup cell count");
  for (unsigned d = 1; d <= 3; ++d) {
    const auto iup = TypeSpace::iup(d);
    std::vector<Atom> preds;
    for (unsigned i = 0; i < d; ++i) preds.push_back({Atom::Kind::Pred, i, {}});
    o.expect(!has_prime_model(iup), "iup has a prime model");
    o.expect(exhaustive_ni(iup, preds) == !has_prime_model(iup), "iup criterion disagrees");

    const auto sd = TypeSpace::sdup(d);
    std::vector<Atom> nodes;
    for (unsigned len = 0; len <= d; ++len)
      for (unsigned v = 0; v < (1u << len); ++v) {
        std::string s;
        for (unsigned k = 0; k < len; ++k) s += (v >> (len - 1 - k) & 1) ? '1' : '0';
        nodes.push_back({Atom::Kind::Tree, 0, s});
      }
    if (d <= 2) o.expect(exhaustive_ni(sd, nodes) == !has_prime_model(sd), "sdup criterion disagrees");
    o.expect(has_prime_model(sd), "sdup lacks a prime model");
  }
  return o;
}

Outcome c5_domination() {
  Outcome o;
  gen::Rng rng(5005);
  std::vector<ModelSpec> ms;
  for (int t = 0; t < 200; ++t) {
    ms.push_back(gen::model_spec(rng, TypeSpace::iup(2)));
    o.expect(is_dense(ms.back()), "generated model not dense");
  }
  for (const auto& a : ms) {
    o.expect(cm_dominates(a, a), "not reflexive");
    for (const auto& b : ms)
      if (cm_dominates(a, b))
        for (const auto& c : ms)
          if (cm_dominates(b, c)) o.expect(cm_dominates(a, c), "not transitive");
  }
  for (int t = 0; t < 100; ++t) {
    const ModelSpec& m = ms[static_cast<std::size_t>(t)];
    const ModelSpec up = perturb(m, Direction::Up), down = perturb(m, Direction::Down);
    o.expect(cm_dominates(m, up) && !cm_dominates(up, m), "up is not strictly above");
    o.expect(cm_dominates(down, m) && !cm_dominates(m, down), "down is not strictly below");
    o.expect(is_dense(up) && is_dense(down), "perturbation lost density");
  }
  return o;
}

Outcome c6_construction() {
  Outcome o;
  gen::Rng rng(6006);
  int covering = 0, non_covering = 0;
  while (covering < 50 || non_covering < 50) {
    const TypeSpace ts = gen::type_space(rng);
    const auto cells = enumerate_types(ts);
    const std::size_t k = gen::uniform(rng, 1, 4);
    RkSequence q;
    for (std::size_t i = 0; i < k; ++i) q.entries.push_back("q" + std::to_string(i));
    for (std::size_t i = 1; i < k; ++i) q.witnesses.push_back("w" + std::to_string(i));
    std::vector<std::vector<TypeId>> cones(k);
    std::set<TypeId> uni;
    for (const auto& c : cells)
      if (gen::coin(rng, 0.85)) {
        cones[gen::uniform(rng, 0, k - 1)].push_back(c.id);
        uni.insert(c.id);
      }
    const bool covers = uni.size() == cells.size();
    const unsigned depth = ts.depth;
    if (covers && covering < 50) {
      ++covering;
      o.expect(is_elementary_submodel_sequence(ts, q, cones, depth), "covering family rejected");
      const ModelSpec m = construct_model(ts, q, cones, depth);
      o.expect(support(m) == uni, "support differs from the cone union");
    } else if (!covers && non_covering < 50) {
      ++non_covering;
      o.expect(!is_elementary_submodel_sequence(ts, q, cones, depth), "non-covering family accepted");
      bool threw = false;
      try {
        construct_model(ts, q, cones, depth);
      } catch (const Error&) {
        threw = true;
      }
      o.expect(threw, "construct_model ran on a non-covering family");
    }
  }
  return o;
}

oracle::Family family_of(const IdentitySystem& s) {
  const bool fin = s.target.is_finite();
  if (s.origin == SystemOrigin::Lmt) return fin ? oracle::Family::LmtFinite : oracle::Family::LmtOmega;
  return fin ? oracle::Family::LmsFinite : oracle::Family::LmsOmega;
}

Outcome c7_limits() {
  Outcome o;
  std::vector<IdentitySystem> systems;
  for (unsigned n = 1; n <= 3; ++n) {
    systems.push_back(lmt_system(Cardinal::fin(n)));
    for (std::size_t ql = 1; ql <= 3; ++ql) systems.push_back(lms_system(ql, Cardinal::fin(n)));
  }
  systems.push_back(lmt_system(Cardinal::omega()));
  for (std::size_t ql = 1; ql <= 3; ++ql)
    for (auto r : {PlateauReading::Strict, PlateauReading::Literal})
      systems.push_back(lms_system(ql, Cardinal::omega(), r));
  for (const auto& sys : systems)
    for (Letter A = 1; A <= 4; ++A)
      for (std::size_t L = 1; L <= 4; ++L) {
        const bool strict = sys.schemas.back().reading == PlateauReading::Strict;
        const auto n = static_cast<std::uint32_t>(sys.target.is_finite() ? sys.target.value() : 0);
        const auto eqs = oracle::identities(family_of(sys), n, A, L, strict);
        const auto engine = count_classes(sys, A, L).count;
        o.expect(engine == oracle::count_classes(eqs, A, L),
                 std::string(to_string(sys.origin)) + " " + to_string(sys.target) + " differs from the oracle");
        IdentitySystem more = sys;
        more.extra.push_back({Word{static_cast<Letter>(A - 1)}, Word{0, 0}});
        o.expect(count_classes(more, A, L).count <= engine, "an extra equation raised the count");
      }
  for (Letter A = 2; A <= 4; ++A)
    for (std::size_t L = 1; L <= 5; ++L)
      o.expect(count_classes(lmt_system(Cardinal::fin(1)), A, L).count == 1, "lmt n=1 is not one class");
  return o;
}

int code(Cardinal x) {
  switch (x.kind()) {
    case Cardinal::Kind::Finite: return static_cast<int>(x.value());
    case Cardinal::Kind::Omega: return oracle::kW;
    case Cardinal::Kind::Omega1: return oracle::kW1;
    default: return oracle::kC;
  }
}

Outcome c8_triples() {
  Outcome o;
  std::vector<Cardinal> v;
  for (std::uint64_t k = 0; k <= 5; ++k) v.push_back(Cardinal::fin(k));
  v.insert(v.end(), {Cardinal::omega(), Cardinal::omega1(), Cardinal::continuum()});
  std::size_t seen = 0;
  for (bool ch : {true, false})
    for (auto p : v)
      for (auto l : v)
        for (auto z : v) {
          ++seen;
          const oracle::Triple t{code(p), code(l), code(z)};
          const auto tc = classify_triple({p, l, z}, TheoryClass::Tc, ch);
          const int fam = oracle::tc_family(t, ch);
          o.expect(tc.admissible() == (fam != 0), "tc admissibility of " + to_string(Cm3Triple{p, l, z}));
          if (fam) {
            o.expect(tc.which == fam, "tc family");
            o.expect(decompose(p, {l}, z, true, ch).tc_ok, "accepted triple does not sum to c");
          } else {
            o.expect(to_string(tc.reason) == oracle::tc_reason(t, ch), "tc reason code");
          }
          const auto sm = classify_triple({p, l, z}, TheoryClass::Small, ch);
          o.expect((sm.admissible() ? sm.which : 0) == oracle::small_case(t, ch), "small case");
        }
  const auto c = Cardinal::continuum();
  o.expect(classify_triple({Cardinal::fin(1), c, Cardinal::fin(2)}, TheoryClass::Tc).reason ==
               Reason::ContinualLOnly, "(l1, c, l3)");
  o.expect(classify_triple({c, Cardinal::fin(1), Cardinal::omega()}, TheoryClass::Tc).reason ==
               Reason::ContinualPOnly, "(c, l2, l3)");
  o.expect(seen == 2 * 9 * 9 * 9, "coverage");
  return o;
}

Outcome c9_builder() {
  Outcome o;
  gen::Rng rng(9009);
  for (int t = 0; t < 50; ++t) {
    const DistributionSpec s = gen::finite_spec(rng, 6);
    const auto b = build_blueprint(s, Variant::T77);
    const OperatorConfig cfg{1, rng()};
    StructSpec built;
    for (const auto& op : b.plan.ops) {
      built = apply_op(std::move(built), op, cfg);
      o.expect(verify_all(built).passed(), "intermediate structure fails its schemes after " + op.name);
      o.expect(built.universe <= 200, "universe above 200");
    }
    const RkStructure rk = rk_structure(built.registry);
    const auto m = matrix_of(s.x);
    o.expect(oracle::isomorphic(matrix_of(rk.quotient.order), oracle::class_order(m)),
             "RK quotient not isomorphic to X/~");
    std::map<std::size_t, Cardinal> il;
    for (const auto& node : built.registry.nodes())
      if (node.il && node.id.size() > 1 && node.id[0] == 'P' &&
          node.id.find_first_not_of("0123456789", 1) == std::string::npos) {
        const auto e = std::stoul(node.id.substr(1));
        const auto k = class_key(s.x, e);
        il[k] = card_sum(il.count(k) ? il[k] : Cardinal::fin(0), *node.il);
      }
    for (auto r : oracle::representatives(m)) {
      const Cardinal want = class_value(s, r);
      const Cardinal got = il.count(class_key(s.x, r)) ? il[class_key(s.x, r)] : Cardinal::fin(0);
      o.expect(got == want, "registry IL differs from f");
    }
  }
  return o;
}

// Signature of y under R_1..R_depth of icp number k.
std::map<std::uint64_t, std::size_t> image_parts(const StructSpec& s, std::size_t k, Elem x, unsigned depth) {
  std::map<std::uint64_t, std::size_t> parts;
  for (const auto& [a, y] : s.binary.at(rel_name("icp", k, 0))) {
    if (a != x) continue;
    std::uint64_t sig = 0;
    for (unsigned i = 1; i <= depth; ++i)
      if (s.binary.at(rel_name("icp", k, i)).contains({x, y})) sig |= std::uint64_t{1} << (i - 1);
    ++parts[sig];
  }
  return parts;
}

Outcome c10_ground() {
  Outcome o;
  gen::Rng rng(10010);
  int mutations = 0, caught = 0;
  for (int t = 0; t < 100; ++t) {
    const unsigned depth = static_cast<unsigned>(gen::uniform(rng, 1, 4));
    std::vector<Color> cs{Color::infinite()};
    for (std::size_t i = gen::uniform(rng, 1, 4); i > 0; --i)
      cs.push_back(Color::finite(static_cast<unsigned>(gen::uniform(rng, 0, depth))));
    StructSpec s = add_predicate(StructSpec{}, "P", cs);
    s = icp(s, "P", std::nullopt, depth, {static_cast<unsigned>(gen::uniform(rng, 1, 3)), rng()});
    std::set<Elem> used;
    for (const auto& [x, y] : s.binary.at(rel_name("icp", 1, 0))) {
      o.expect(used.insert(y).second, "images of different elements overlap");
    }
    for (Elem x : s.extent("P")) {
      const Color c = s.coloring.at(x);
      const unsigned n = c.is_infinite() ? depth : c.value();
      const auto parts = image_parts(s, 1, x, depth);
      o.expect(parts.size() == (std::size_t{1} << n), "color-n image does not split into 2^n parts");
      for (const auto& [sig, size] : parts) o.expect(size > 0 && (sig >> n) == 0, "part outside the split");
    }
    o.expect(verify_schemes(s, "icp").passed(), "unmutated structure fails");

    StructSpec m = s;
    auto& r0 = m.binary.at(rel_name("icp", 1, 0));
    const unsigned ri = static_cast<unsigned>(gen::uniform(rng, 1, depth));
    auto& rel = m.binary.at(rel_name("icp", 1, ri));
    const std::vector<Pair> r0v(r0.begin(), r0.end());
    const Pair victim = gen::pick(rng, r0v);
    switch (gen::uniform(rng, 0, 3)) {
      case 0: r0.erase(victim); break;
      case 1:
        if (rel.contains(victim)) rel.erase(victim);
        else rel.insert(victim);
        break;
      case 2: r0.insert({victim.first, detail::fresh(m)}); break;
      default: {
        Elem other = victim.first;
        for (Elem e : m.extent("P"))
          if (e != victim.first) other = e;
        if (other == victim.first) {
          r0.erase(victim);
        } else {
          r0.erase(victim);
          r0.insert({other, victim.second});
        }
      }
    }
    ++mutations;
    caught += !verify_schemes(m, "icp").passed();
  }
  o.expect(caught == mutations, std::to_string(caught) + "/" + std::to_string(mutations) + " mutations caught");
  return o;
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;  // 0 when unbounded
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "cardinal algebra", 1, c1_cardinals},
      {2, "preorder laws", 30, c2_preorders},
      {3, "premodel checker", 0, c3_premodel},
      {4, "type spaces and the prime-model criterion", 10, c4_types},
      {5, "model domination and perturbation", 0, c5_domination},
      {6, "model construction from cone families", 0, c6_construction},
      {7, "limit counting against the oracle", 120, c7_limits},
      {8, "triple classification", 0, c8_triples},
      {9, "builder round trip", 120, c9_builder},
      {10, "operator ground checks", 0, c10_ground},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.ok = false;
      o.note = "over the time limit";
    }
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", o.ok ? "PASS" : "FAIL", c.number, c.name, secs,
                o.ok ? "" : " ", o.note.c_str());
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
