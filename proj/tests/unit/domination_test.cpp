#include <catch_amalgamated.hpp>

#include "gen.hpp"
#include "rkbench/domination.hpp"

using namespace rkbench;

namespace {
DominationGraph graph(std::vector<std::string> ids, bool prime = true) {
  DominationGraph g;
  for (auto& id : ids) {
    TypeNode n;
    n.id = id;
    n.prime = prime;
    g.add_node(n);
  }
  return g;
}
}  // namespace

TEST_CASE("rk preorder orientation") {
  auto g = graph({"p0", "p1"});
  g.add_edge("p1", "p0", "Q", false);
  const Preorder p = rk_preorder(g);
  CHECK(p.le(0, 1));
  CHECK_FALSE(p.le(1, 0));
  CHECK(rk_preorder(graph({"a", "b"})).pairs().empty());
  auto chain = graph({"a", "b", "c", "d"});
  chain.add_edge("b", "a", "f", false);
  chain.add_edge("c", "b", "f", false);
  chain.add_edge("d", "c", "f", false);
  CHECK(rk_preorder(chain).le(0, 3));
  CHECK(rkt_structure(chain) == rk_preorder(chain));
}

TEST_CASE("strong equivalence") {
  auto g = graph({"p", "q", "r"});
  g.add_edge("p", "q", "a", true);
  g.add_edge("q", "p", "b", true);
  g.add_edge("r", "p", "c", true);
  g.add_edge("p", "r", "d", false);
  CHECK(strong_equiv(g, "p", "q"));
  CHECK_FALSE(strong_equiv(g, "p", "r"));
  CHECK(strong_equiv(g, "r", "r"));
  CHECK_THROWS_AS(strong_equiv(g, "p", "x"), Error);
}

TEST_CASE("rk structure") {
  auto g = graph({"a", "b", "c"});
  g.add_edge("b", "a", "f", false);
  const auto rk = rk_structure(g);
  CHECK(rk.quotient.size() == sim_quotient(rk_preorder(g)).size());

  auto iup = graph({"a", "b"}, false);
  iup.add_edge("b", "a", "f", false);
  CHECK(rk_structure(iup).nodes.empty());
  CHECK_FALSE(rkt_structure(iup).pairs().empty());

  auto merged = graph({"a", "b"});
  merged.add_edge("a", "b", "f", true);
  merged.add_edge("b", "a", "g", true);
  CHECK(rk_structure(merged).iso_types.size() == 1);

  auto two_minima = graph({"a", "b", "c"});
  two_minima.add_edge("c", "a", "f", false);
  two_minima.add_edge("c", "b", "f", false);
  CHECK(sim_quotient(rkt_structure(two_minima)).minimal_classes().size() == 2);
}

TEST_CASE("strong equivalence implies domination equivalence") {
  gen::Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = gen::uniform(rng, 2, 6);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("t" + std::to_string(i));
    auto g = graph(ids);
    for (auto [a, b] : gen::random_pairs(rng, n, 0.3)) g.add_edge(ids[a], ids[b], "f", gen::coin(rng));
    const Preorder p = rk_preorder(g);
    CHECK(close(p) == p);
    for (const auto& e : g.edges()) CHECK(p.le(g.index_of(e.p), g.index_of(e.q)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (strong_equiv(g, ids[i], ids[j])) CHECK(p.equiv(i, j));
  }
}

TEST_CASE("limit existence over a type") {
  RealizationDigraph r(2);
  r.add(0, 1, true, false);
  CHECK(limit_exists_over(r, true));
  RealizationDigraph sym(2);
  sym.add(0, 1, true, false);
  sym.add(1, 0, false, true);
  CHECK_FALSE(limit_exists_over(sym, true));
  CHECK_FALSE(limit_exists_over(RealizationDigraph(3), true));
  CHECK_THROWS_AS(limit_exists_over(r, false), Error);
}

TEST_CASE("graph contracts") {
  auto g = graph({"a"});
  CHECK_THROWS_AS(g.add_node({.id = "a"}), Error);
  CHECK_THROWS_AS(g.add_node({.id = "has space"}), Error);
  CHECK_THROWS_AS(g.add_edge("a", "zz", "f", false), Error);
  TypeNode principal;
  principal.id = "iso";
  principal.principal = true;
  CHECK(g.add_node(principal).prime);
}
