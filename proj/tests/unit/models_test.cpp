#include <catch_amalgamated.hpp>

#include "gen.hpp"
#include "rkbench/models.hpp"

using namespace rkbench;

namespace {
ModelSpec full(unsigned depth) {
  ModelSpec m;
  m.space = TypeSpace::iup(depth);
  m.base = Base::All;
  return m;
}

std::vector<TypeId> cells(const TypeSpace& ts) {
  std::vector<TypeId> out;
  for (const auto& c : enumerate_types(ts)) out.push_back(c.id);
  return out;
}
}  // namespace

TEST_CASE("domination of iup models") {
  ModelSpec a = full(2), b = full(2);
  b.counts[IupCell{"00"}] = Cardinal::fin(2);
  CHECK(cm_dominates(a, b));
  CHECK_FALSE(cm_dominates(b, a));
  CHECK(cm_dominates(a, a));

  ModelSpec s1, s2;
  s1.space = s2.space = TypeSpace::sdup(1);
  s1.counts[SdupCell{"0", true}] = Cardinal::fin(1);
  s2.counts[SdupCell{"1", true}] = Cardinal::fin(1);
  CHECK_FALSE(cm_dominates(s1, s2));
  CHECK_FALSE(cm_dominates(s2, s1));
  CHECK_THROWS_AS(cm_dominates(full(2), full(3)), Error);
}

TEST_CASE("perturbation") {
  const ModelSpec base = full(3);
  const ModelSpec up = perturb(base, Direction::Up);
  CHECK(up.counts.size() == 1);
  CHECK(cm_dominates(base, up));
  CHECK_FALSE(cm_dominates(up, base));

  ModelSpec plus = base;
  plus.counts[IupCell{"101"}] = Cardinal::fin(2);
  CHECK(perturb(plus, Direction::Down) == base);

  ModelSpec removed = base;
  removed.counts[IupCell{"000"}] = Cardinal::fin(0);
  const ModelSpec down = perturb(removed, Direction::Down);
  CHECK(is_dense(down));
  std::size_t zeros = 0;
  for (const auto& [id, c] : down.counts) zeros += c.is_zero();
  CHECK(zeros == 2);
  CHECK(cm_dominates(down, removed));
  CHECK_FALSE(cm_dominates(removed, down));

  ModelSpec sd;
  sd.space = TypeSpace::sdup(1);
  CHECK_THROWS_AS(perturb(sd, Direction::Up), Error);
}

TEST_CASE("mutual domination means equal counts") {
  gen::Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const ModelSpec a = gen::model_spec(rng, TypeSpace::iup(2));
    const ModelSpec b = gen::model_spec(rng, TypeSpace::iup(2));
    const bool mutual = cm_dominates(a, b) && cm_dominates(b, a);
    bool equal = true;
    for (const auto& id : cells(a.space)) equal &= a.count(id) == b.count(id);
    CHECK(mutual == equal);
  }
}

TEST_CASE("elementary submodel sequences") {
  const TypeSpace ts = TypeSpace::iup(2);
  const RkSequence q{{"q0", "q1"}, {"R"}};
  std::vector<TypeId> p0, np0;
  for (const auto& id : cells(ts)) (to_string(id)[0] == '1' ? p0 : np0).push_back(id);
  CHECK(is_elementary_submodel_sequence(ts, q, {p0, np0}, 2));
  CHECK_FALSE(is_elementary_submodel_sequence(ts, q, {p0, p0}, 2));
  const RkSequence one{{"q0"}, {}};
  CHECK(is_elementary_submodel_sequence(ts, one, {cells(ts)}, 2));

  const ModelSpec m = construct_model(ts, q, {p0, np0}, 2);
  CHECK(support(m).size() == 4);
  for (const auto& id : cells(ts)) CHECK_FALSE(m.count(id).is_zero());
  CHECK_THROWS_AS(construct_model(ts, q, {p0, p0}, 2), Error);
  CHECK_THROWS_AS(is_elementary_submodel_sequence(ts, q, {p0}, 2), Error);
}

TEST_CASE("sequences against a graph") {
  DominationGraph g;
  g.add_node({.id = "a"});
  g.add_node({.id = "b"});
  g.add_edge("b", "a", "phi", false);
  CHECK(check_sequence({{"a", "b"}, {"phi"}}, g).passed());
  CHECK_FALSE(check_sequence({{"a", "b"}, {"psi"}}, g).passed());
  CHECK_FALSE(check_sequence({{"a", "b"}, {}}, g).passed());
}

TEST_CASE("sums of model counts") {
  auto r = sum_Iq({Cardinal::fin(1), Cardinal::continuum()});
  CHECK(r.total == Cardinal::continuum());
  CHECK(r.equals_continuum);
  r = sum_Iq({Cardinal::fin(1), Cardinal::fin(1)});
  CHECK(r.total == Cardinal::fin(2));
  CHECK_FALSE(r.equals_continuum);
  CHECK(sum_Iq_uniform(Cardinal::continuum(), Cardinal::fin(1)).total == Cardinal::continuum());
  CHECK_THROWS_AS(sum_Iq({}), Error);
}
