#pragma once

// Symbolic cardinals: the naturals plus omega, omega_1 and the continuum.
//
// Values are stored exactly; the continuum hypothesis only affects
// comparisons (card_le / card_eq), never the stored symbol, so both
// omega_1 and 2^omega stay expressible side by side.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "rkbench/error.hpp"

namespace rkbench {

// Default for every comparison that takes a CH flag.
inline constexpr bool kDefaultCH = true;

class Cardinal {
 public:
  enum class Kind : std::uint8_t { Finite, Omega, Omega1, Continuum };

  constexpr Cardinal() = default;

  static constexpr Cardinal fin(std::uint64_t k) {
    return Cardinal(Kind::Finite, k);
  }
  static constexpr Cardinal omega() { return Cardinal(Kind::Omega, 0); }
  static constexpr Cardinal omega1() { return Cardinal(Kind::Omega1, 0); }
  static constexpr Cardinal continuum() {
    return Cardinal(Kind::Continuum, 0);
  }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  constexpr bool is_infinite() const noexcept { return !is_finite(); }
  constexpr bool is_zero() const noexcept { return is_finite() && value_ == 0; }
  constexpr bool is_continuum() const noexcept {
    return kind_ == Kind::Continuum;
  }

  // Only meaningful for finite values.
  constexpr std::uint64_t value() const noexcept { return value_; }

  // Structural order: Fin(k) < Fin(k+1) < Omega < Omega1 < Continuum.
  friend constexpr auto operator<=>(const Cardinal&,
                                    const Cardinal&) = default;

 private:
  constexpr Cardinal(Kind kind, std::uint64_t v) : kind_(kind), value_(v) {}

  Kind kind_ = Kind::Finite;
  std::uint64_t value_ = 0;
};

inline Cardinal card_sum(Cardinal a, Cardinal b) {
  if (a.is_finite() && b.is_finite()) {
    if (a.value() > std::numeric_limits<std::uint64_t>::max() - b.value())
      throw Error("finite cardinal sum overflows");
    return Cardinal::fin(a.value() + b.value());
  }
  return a < b ? b : a;
}

inline Cardinal card_total(std::span<const Cardinal> xs) {
  Cardinal acc = Cardinal::fin(0);
  for (auto x : xs) acc = card_sum(acc, x);
  return acc;
}

// Least upper bound of a nonempty list. `unbounded_finite` states that the
// listed finite values stand for an unbounded family, which forces Omega.
inline Cardinal card_sup(std::span<const Cardinal> xs,
                         bool unbounded_finite = false) {
  if (xs.empty()) throw Error("card_sup of an empty list");
  Cardinal best = xs.front();
  for (auto x : xs)
    if (best < x) best = x;
  if (unbounded_finite && best.is_finite()) return Cardinal::omega();
  return best;
}

namespace detail {
// Rank used for comparisons; under CH omega_1 and the continuum coincide.
constexpr int cmp_rank(Cardinal c, bool ch) {
  switch (c.kind()) {
    case Cardinal::Kind::Finite: return 0;
    case Cardinal::Kind::Omega: return 1;
    case Cardinal::Kind::Omega1: return 2;
    case Cardinal::Kind::Continuum: return ch ? 2 : 3;
  }
  return 0;
}
}  // namespace detail

inline bool card_le(Cardinal a, Cardinal b, bool ch = kDefaultCH) {
  const int ra = detail::cmp_rank(a, ch), rb = detail::cmp_rank(b, ch);
  if (ra != rb) return ra < rb;
  if (ra == 0) return a.value() <= b.value();
  return true;
}

inline bool card_eq(Cardinal a, Cardinal b, bool ch = kDefaultCH) {
  return card_le(a, b, ch) && card_le(b, a, ch);
}

inline bool card_lt(Cardinal a, Cardinal b, bool ch = kDefaultCH) {
  return !card_le(b, a, ch);
}

// "0","1",...,"w","w1","c"
inline std::string to_string(Cardinal c) {
  switch (c.kind()) {
    case Cardinal::Kind::Finite: return std::to_string(c.value());
    case Cardinal::Kind::Omega: return "w";
    case Cardinal::Kind::Omega1: return "w1";
    case Cardinal::Kind::Continuum: return "c";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& out, Cardinal c) {
  return out << to_string(c);
}

inline std::optional<Cardinal> try_parse_cardinal(std::string_view s) {
  if (s == "w") return Cardinal::omega();
  if (s == "w1") return Cardinal::omega1();
  if (s == "c") return Cardinal::continuum();
  if (s.empty() || s.size() > 19) return std::nullopt;
  std::uint64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  if (s.size() > 1 && s.front() == '0') return std::nullopt;
  return Cardinal::fin(v);
}

inline Cardinal parse_cardinal(std::string_view s) {
  if (auto c = try_parse_cardinal(s)) return *c;
  throw Error("not a cardinal token: '" + std::string(s) +
              "' (expected digits, w, w1 or c)");
}

}  // namespace rkbench
