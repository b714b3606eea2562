#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "gen.hpp"
#include "rkbench/operators.hpp"
#include "rkbench/pipeline.hpp"

using namespace rkbench;

namespace {
std::vector<Color> colors(std::initializer_list<int> cs) {
  std::vector<Color> out;
  for (int c : cs) out.push_back(c < 0 ? Color::infinite() : Color::finite(static_cast<unsigned>(c)));
  return out;
}

StructSpec with_pred(std::initializer_list<int> cs, const std::string& name = "P") {
  return add_predicate(StructSpec{}, name, colors(cs));
}

// Images of x under R0 grouped by their R_1..R_depth signature.
std::map<std::uint64_t, std::set<Elem>> parts_of(const StructSpec& s, std::size_t k, Elem x,
                                                 unsigned depth) {
  std::map<std::uint64_t, std::set<Elem>> out;
  for (const auto& [a, y] : s.binary.at(rel_name("icp", k, 0))) {
    if (a != x) continue;
    std::uint64_t sig = 0;
    for (unsigned i = 1; i <= depth; ++i)
      if (s.binary.at(rel_name("icp", k, i)).contains({x, y})) sig |= 1u << (i - 1);
    out[sig].insert(y);
  }
  return out;
}
}  // namespace

TEST_CASE("icp splits images by color") {
  const StructSpec s = icp(with_pred({2, 0, -1}), "P", std::nullopt, 2);
  const Elem color2 = s.extent("P")[0];
  CHECK(parts_of(s, 1, color2, 2).size() == 4);
  CHECK(parts_of(s, 1, s.extent("P")[1], 2).size() == 1);
  CHECK(parts_of(s, 1, s.extent("P")[2], 2).size() == 4);
  std::set<Elem> seen;
  for (const auto& [x, y] : s.binary.at(rel_name("icp", 1, 0))) CHECK(seen.insert(y).second);
  CHECK_FALSE(s.registry.node("P").prime);
  CHECK(s.registry.contains("P.q00"));
  CHECK(s.registry.contains("P.q11"));
  CHECK(verify_schemes(s, "icp").passed());
  CHECK_THROWS_AS(icp(with_pred({2, -1}), "P", 1, 2), Error);
  CHECK_THROWS_AS(icp(with_pred({1, 2}), "P", std::nullopt, 2), Error);
}

TEST_CASE("css images respect colors and restore the prime model") {
  StructSpec s = icp(with_pred({1, 0, -1}), "P", std::nullopt, 1);
  s = css(s, {"P.q0"}, "P");
  const auto& rel = s.binary.at(rel_name("css", 2, 0));
  for (Elem x : s.extent("P")) {
    const Color cx = s.coloring.at(x);
    std::set<Color> got;
    for (const auto& [a, y] : rel)
      if (a == x) got.insert(s.coloring.at(y));
    for (Color c : got) CHECK_FALSE(c < cx);
    if (!cx.is_infinite())
      for (unsigned k = cx.value(); k <= 1; ++k) CHECK(got.contains(Color::finite(k)));
  }
  CHECK(s.registry.node("P").prime);
  CHECK(s.registry.node("P").realizes == std::vector<std::string>{"P.q0"});
  CHECK(s.registry.node("P.q0").realized);
  CHECK_FALSE(s.registry.node("P.q1").realized);
  CHECK(verify_schemes(s, "css").passed());
  CHECK(bd(s, {"P.q1"}, "P").registry.node("P").linked);
  CHECK_THROWS_AS(css(s, {"P"}, "P"), Error);
  CHECK_THROWS_AS(css(s, {}, "P"), Error);
}

TEST_CASE("bu bans joint prime models only") {
  StructSpec s = with_pred({1, -1}, "A");
  s = add_predicate(s, "B", colors({2, -1}));
  s = bu(s, "A", "B", std::nullopt, 2);
  CHECK(s.registry.node("A").prime);
  CHECK(s.registry.node("B").prime);
  CHECK_FALSE(s.registry.node("A*B").prime);
  const auto& r0 = s.ternary.at(rel_name("bu", 2, 0));
  std::map<std::pair<Elem, Elem>, std::size_t> images;
  std::set<Elem> zs;
  for (const auto& t : r0) {
    ++images[{t[0], t[1]}];
    CHECK(zs.insert(t[2]).second);
  }
  CHECK(images.size() == 4);
  CHECK(verify_schemes(s, "bu").passed());
  CHECK_THROWS_AS(bu(s, "A", "A", std::nullopt, 1), Error);
}

TEST_CASE("identity systems from lmt and lms") {
  CHECK(lmt("p", Cardinal::fin(1)).schemas.size() == 3);
  CHECK(lmt("p", Cardinal::omega()).schemas.back().kind == SchemaKind::AscendingInsert);
  CHECK_THROWS_AS(lmt("p", Cardinal::fin(0)), Error);
  CHECK(lms(2, Cardinal::fin(2)).schemas.size() == 2);
  CHECK(lms(2, Cardinal::omega()).schemas.size() == 3);
  CHECK_THROWS_AS(lms(2, Cardinal::continuum()), Error);
  StructSpec s = with_pred({0, -1});
  s = apply_lmt(s, "P", Cardinal::fin(2));
  CHECK(s.registry.node("P").il == Cardinal::fin(2));
  CHECK(s.systems.size() == 1);
}

TEST_CASE("mutations are caught") {
  StructSpec s = icp(with_pred({1, -1}), "P", std::nullopt, 1);
  auto& r0 = s.binary.at(rel_name("icp", 1, 0));
  r0.erase(r0.begin());
  CHECK_FALSE(verify_schemes(s, "icp").passed());
}

TEST_CASE("links and the registry") {
  StructSpec s = with_pred({0, -1}, "P0");
  s = add_predicate(s, "P1", colors({0, -1}));
  s = add_link(s, "P0", "P1", true);
  CHECK(rk_preorder(s.registry).le(0, 1));
  CHECK_THROWS_AS(add_link(s, "P0", "P1", true), Error);
  CHECK_THROWS_AS(add_link(s, "P0", "P0", true), Error);
  CHECK_THROWS_AS(add_predicate(s, "bad name", colors({0})), Error);
}

TEST_CASE("icp then css leaves exactly the allocated stubs realized") {
  gen::Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const unsigned depth = static_cast<unsigned>(gen::uniform(rng, 1, 2));
    std::vector<Color> cs{Color::infinite()};
    for (std::size_t i = gen::uniform(rng, 0, 3); i > 0; --i)
      cs.push_back(Color::finite(static_cast<unsigned>(gen::uniform(rng, 0, depth))));
    const OperatorConfig cfg{static_cast<unsigned>(gen::uniform(rng, 1, 2)), rng()};
    StructSpec s = add_predicate(StructSpec{}, "P", cs);
    s = icp(s, "P", std::nullopt, depth, cfg);
    std::vector<std::string> q;
    for (std::uint64_t b = 0; b < (1u << depth); ++b)
      if (gen::coin(rng) || (q.empty() && b + 1 == (1u << depth)))
        q.push_back("P.q" + detail::bits_string(b, depth));
    s = css(s, q, "P", false, cfg);
    std::size_t realized = 0;
    for (const auto& n : s.registry.nodes()) realized += n.realized;
    CHECK(realized == q.size());
    CHECK(s.registry.node("P").prime);
    CHECK(s.universe <= 200);
    CHECK(verify_all(s).passed());
  }
}

TEST_CASE("operators are deterministic for a seed") {
  const OperatorConfig cfg{2, 99};
  const StructSpec a = icp(with_pred({2, -1}), "P", std::nullopt, 2, cfg);
  const StructSpec b = icp(with_pred({2, -1}), "P", std::nullopt, 2, cfg);
  CHECK(a == b);
}

TEST_CASE("pipelines") {
  const std::string text =
      "pred name=P0 colors=0,inf\n"
      "icp sub=P0 depth=1   # comment\n"
      "css sub=P0 q=P0.q0\n"
      "lmt p=P0 lambda=2\n";
  const Pipeline p = parse_pipeline(text, "t.pipe");
  CHECK(p.ops.size() == 4);
  CHECK(parse_pipeline(to_text(p)) == p);
  const StructSpec s = run_pipeline(p, {1, 0});
  CHECK(verify_all(s).passed());
  CHECK(s.registry.node("P0").il == Cardinal::fin(2));

  try {
    parse_pipeline("pred name=P0\n", "bad.pipe");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("bad.pipe:1") == 0);
  }
  CHECK_THROWS_AS(parse_pipeline("explode now=1\n"), ParseError);
  CHECK_THROWS_AS(parse_pipeline("free lambda=c\n"), ParseError);
  try {
    run_pipeline(parse_pipeline("pred name=P0 colors=0,inf\ncss sub=P0 q=P0.q0\n"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2 (css)") == 0);
  }
}
