#include <catch_amalgamated.hpp>

#include <array>
#include <vector>

#include "rkbench/cardinal.hpp"

using rkbench::Cardinal;

namespace {
std::vector<Cardinal> symbols() {
  std::vector<Cardinal> v;
  for (std::uint64_t k = 0; k <= 20; ++k) v.push_back(Cardinal::fin(k));
  v.push_back(Cardinal::omega());
  v.push_back(Cardinal::omega1());
  v.push_back(Cardinal::continuum());
  return v;
}
}  // namespace

TEST_CASE("finite sums add, infinite sums take the maximum") {
  CHECK(rkbench::card_sum(Cardinal::fin(2), Cardinal::fin(3)) == Cardinal::fin(5));
  CHECK(rkbench::card_sum(Cardinal::omega(), Cardinal::fin(7)) == Cardinal::omega());
  CHECK(rkbench::card_sum(Cardinal::omega1(), Cardinal::continuum()) == Cardinal::continuum());
}

TEST_CASE("sum is commutative, associative and absorbed by the continuum") {
  const auto xs = symbols();
  for (auto a : xs) {
    CHECK(rkbench::card_sum(a, Cardinal::continuum()) == Cardinal::continuum());
    for (auto b : xs) {
      CHECK(rkbench::card_sum(a, b) == rkbench::card_sum(b, a));
      for (auto c : xs)
        CHECK(rkbench::card_sum(rkbench::card_sum(a, b), c) ==
              rkbench::card_sum(a, rkbench::card_sum(b, c)));
    }
  }
}

TEST_CASE("sup") {
  const std::array a{Cardinal::fin(1), Cardinal::fin(4), Cardinal::fin(2)};
  CHECK(rkbench::card_sup(a) == Cardinal::fin(4));
  const std::array b{Cardinal::fin(3), Cardinal::omega()};
  CHECK(rkbench::card_sup(b) == Cardinal::omega());
  const std::array c{Cardinal::fin(1)};
  CHECK(rkbench::card_sup(c, true) == Cardinal::omega());
  CHECK_THROWS_AS(rkbench::card_sup(std::span<const Cardinal>{}), rkbench::Error);
}

TEST_CASE("comparison with and without CH") {
  CHECK(rkbench::card_le(Cardinal::omega(), Cardinal::omega1(), false));
  CHECK_FALSE(rkbench::card_le(Cardinal::continuum(), Cardinal::omega1(), false));
  CHECK(rkbench::card_le(Cardinal::continuum(), Cardinal::omega1(), true));
  for (bool ch : {false, true}) {
    const auto xs = symbols();
    for (auto a : xs) {
      CHECK(rkbench::card_le(a, a, ch));
      for (auto b : xs) {
        CHECK((rkbench::card_le(a, b, ch) || rkbench::card_le(b, a, ch)));
        for (auto c : xs)
          if (rkbench::card_le(a, b, ch) && rkbench::card_le(b, c, ch))
            CHECK(rkbench::card_le(a, c, ch));
      }
    }
  }
}

TEST_CASE("text tokens") {
  for (auto x : symbols()) CHECK(rkbench::parse_cardinal(rkbench::to_string(x)) == x);
  CHECK(rkbench::to_string(Cardinal::omega1()) == "w1");
  CHECK_FALSE(rkbench::try_parse_cardinal("omega").has_value());
  CHECK_FALSE(rkbench::try_parse_cardinal("").has_value());
  CHECK_FALSE(rkbench::try_parse_cardinal("-1").has_value());
}
