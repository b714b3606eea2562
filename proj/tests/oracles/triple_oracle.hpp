#pragma once

// Direct encodings of the value lists for small theories and for T_c,
// over integer codes: 0..999 finite, then w, w1, c.

#include <string>

namespace oracle {

inline constexpr int kW = 1000, kW1 = 1001, kC = 1002;

struct Triple {
  int p, l, npl;
};

// Under CH w1 is the continuum.
inline int norm(int x, bool ch) { return ch && x == kW1 ? kC : x; }

inline bool in_value_set(int x) { return x < kW || x == kW || x == kC; }  // w u {w, c}

// 0 when rejected, otherwise the lowest family number.
inline int tc_family(Triple t, bool ch) {
  const int p = norm(t.p, ch), l = norm(t.l, ch), npl = norm(t.npl, ch);
  if (p == kC && l == kC) return 1;
  if (p == 0 && l == 0 && npl == kC) return 2;
  if (p >= 1 && npl == kC) return 3;
  return 0;
}

// Expected reason code for a rejected tc triple.
inline std::string tc_reason(Triple t, bool ch) {
  const int p = norm(t.p, ch), l = norm(t.l, ch), npl = norm(t.npl, ch);
  if (p != kC && l != kC && npl != kC) return "no-continual-coordinate";
  if (l == kC && p != kC && npl != kC) return "continual-l-only";
  if (p == kC && l != kC && npl != kC) return "continual-p-only";
  return "p-zero-l-positive";
}

// 0 when rejected, otherwise the case number.
inline int small_case(Triple t, bool ch) {
  const int p = norm(t.p, ch), l = norm(t.l, ch);
  if (t.npl != 0) return 0;
  if (p == 1 && l == 0) return 1;
  if (p >= 2 && p <= kW && l >= 1) return 2;
  return 0;
}

}  // namespace oracle
