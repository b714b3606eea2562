#include <catch_amalgamated.hpp>

#include "gen.hpp"
#include "order_oracle.hpp"
#include "rkbench/preorder.hpp"

using namespace rkbench;

namespace {
Preorder po(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> le) {
  return close(Preorder::from_pairs(n, le));
}
}  // namespace

TEST_CASE("close") {
  const Preorder p = po(3, {{0, 1}, {1, 2}});
  CHECK(p.le(0, 2));
  for (std::size_t i = 0; i < 3; ++i) CHECK(p.le(i, i));
  CHECK(close(p) == p);
  const Preorder id = close(Preorder(2));
  CHECK(id.pairs().empty());
  CHECK(id.le(0, 0));
  CHECK(id.le(1, 1));
}

TEST_CASE("quotient") {
  CHECK(sim_quotient(po(2, {{0, 1}, {1, 0}})).size() == 1);
  const auto anti = sim_quotient(po(3, {}));
  CHECK(anti.size() == 3);
  CHECK(anti.covers().empty());
  const auto q = sim_quotient(po(3, {{0, 1}, {1, 0}, {1, 2}}));
  CHECK(q.size() == 2);
  CHECK(q.covers().size() == 1);
  CHECK_THROWS_AS(sim_quotient(Preorder::from_pairs(3, {{0, 1}, {1, 2}})), Error);
}

TEST_CASE("cones") {
  const Preorder chain = po(3, {{0, 1}, {1, 2}});
  CHECK(cones(chain, 2).lower.size() == 3);
  CHECK(cones(chain, 2).upper == std::vector<std::size_t>{2});
  CHECK(cones(chain, 1).lower.size() == 2);
  CHECK(cones(chain, 1).upper.size() == 2);
  const Preorder iso = po(2, {});
  CHECK(cones(iso, 0).lower == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(cones(chain, 3), Error);
}

TEST_CASE("height and width") {
  const Preorder chain4 = po(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(height(chain4) == 4);
  CHECK(width(chain4) == 1);
  CHECK(height(po(5, {})) == 1);
  CHECK(width(po(5, {})) == 5);
  CHECK(height(po(2, {{0, 1}, {1, 0}})) == 1);
  // 2x2 grid: (0,0) < (0,1), (1,0) < (1,1)
  CHECK(width(po(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})) == 2);
}

TEST_CASE("width refuses quotients above the class limit") {
  CHECK_THROWS_AS(width(po(kWidthClassLimit + 1, {})), Error);
}

TEST_CASE("directedness") {
  CHECK(is_upward_directed(po(3, {{0, 2}, {1, 2}})));
  CHECK_FALSE(is_upward_directed(po(2, {})));
  CHECK(is_upward_directed(po(4, {{0, 3}, {1, 3}, {2, 3}})));
}

TEST_CASE("random preorders agree with brute force") {
  gen::Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = gen::uniform(rng, 1, 8);
    const auto pairs = gen::random_pairs(rng, n, 0.2);
    const Preorder p = close(Preorder::from_pairs(n, pairs));
    const auto m = oracle::closure(n, pairs);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) REQUIRE(p.le(i, j) == m[i][j]);
    CHECK(height(p) == oracle::brute_height(m));
    CHECK(width(p) == oracle::brute_width(m));
    CHECK(sim_quotient(p).size() == oracle::class_count(m));
  }
}

TEST_CASE("premodel profile") {
  PremodelProfile good;
  good.joint_upper_cone_cases = {{Cardinal::omega(), Cardinal::continuum(), false},
                                 {Cardinal::continuum(), Cardinal::fin(0), true},
                                 {Cardinal::continuum(), Cardinal::omega(), false},
                                 {Cardinal::continuum(), Cardinal::continuum(), false}};
  const Report r = check_premodel(good);
  CHECK(r.passed());
  REQUIRE(r.find_fact("width"));
  CHECK(*r.find_fact("width") == "c");

  PremodelProfile tall = good;
  tall.height = Cardinal::fin(5);
  CHECK(check_premodel(tall).failed("height"));

  PremodelProfile wide_cone = good;
  wide_cone.lower_cone_card = Cardinal::continuum();
  CHECK(check_premodel(wide_cone).failed("lower-cones"));

  PremodelProfile bad_case = good;
  bad_case.joint_upper_cone_cases = {{Cardinal::omega(), Cardinal::omega(), false}};
  CHECK(check_premodel(bad_case).failed("joint-upper-cones"));
}

TEST_CASE("dot output lists covers") {
  const auto q = sim_quotient(po(3, {{0, 1}, {1, 2}}));
  const std::string dot = to_dot(q);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}
