#pragma once

// Identity systems over natural-number letters and their congruence classes
// on bounded words.
//
// The congruence is generated by one-step rewrites x u y <-> x v y for a
// ground equation u = v, where both sides of the step have length <= L.
// Derivations through longer words are not followed.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/error.hpp"

namespace rkbench {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;

inline constexpr std::uint64_t kDefaultWordBudget = std::uint64_t{1} << 22;

// Length first, then lexicographic.
inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Digits run together when every letter is below 10, else space separated.
inline std::string to_string(const Word& w) {
  const bool compact = std::all_of(w.begin(), w.end(), [](Letter l) { return l < 10; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i) out += ' ';
    out += std::to_string(w[i]);
  }
  return out;
}

inline std::optional<Word> try_parse_word(const std::string& s) {
  Word w;
  if (s.find(' ') == std::string::npos) {
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      w.push_back(static_cast<Letter>(c - '0'));
    }
  } else {
    std::size_t pos = 0;
    while (pos < s.size()) {
      if (s[pos] == ' ') {
        ++pos;
        continue;
      }
      std::size_t end = s.find(' ', pos);
      if (end == std::string::npos) end = s.size();
      const std::string tok = s.substr(pos, end - pos);
      if (tok.size() > 9 || !std::all_of(tok.begin(), tok.end(),
                                         [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
      w.push_back(static_cast<Letter>(std::stoul(tok)));
      pos = end;
    }
  }
  if (w.empty()) return std::nullopt;
  return w;
}

struct Equation {
  Word lhs;
  Word rhs;
  friend bool operator==(const Equation&, const Equation&) = default;
};

enum class SchemaKind {
  LmtFinCollapse,      // (n-1) = m, m >= n
  FinIdempotent,       // m m = m, m < n
  DescendingCollapse,  // n1..ns = ns, min(n1..n_{s-1}) > ns, s >= 2
  Idempotent,          // n n = n
  AscendingInsert,     // n1 n2 = n1 (n1+1) .. n2, n1 < n2
  AscendingToTop,      // n0..ns = ns^(s+1), max(n0..n_{s-1}) < ns, s >= 1
  ConsecutiveRun,      // n0..ns = n0 (n0+1) .. (n0+s), n0+s <= ns
  PlateauRun,          // n0..ns = n0 .. (n0+t) (n0+t)^(s-t), n0+t = ns, 0 < t < s
};

inline const char* to_string(SchemaKind k) {
  switch (k) {
    case SchemaKind::LmtFinCollapse: return "fin-collapse";
    case SchemaKind::FinIdempotent: return "fin-idempotent";
    case SchemaKind::DescendingCollapse: return "descending-collapse";
    case SchemaKind::Idempotent: return "idempotent";
    case SchemaKind::AscendingInsert: return "ascending-insert";
    case SchemaKind::AscendingToTop: return "ascending-to-top";
    case SchemaKind::ConsecutiveRun: return "consecutive-run";
    case SchemaKind::PlateauRun: return "plateau-run";
  }
  return "?";
}

// The side condition of the plateau schema is garbled in its source:
// "n0 + s, n0 + t = ns". Strict reads the first conjunct as n0 + s > ns,
// Literal drops it.
enum class PlateauReading { Strict, Literal };

inline const char* to_string(PlateauReading r) {
  return r == PlateauReading::Strict ? "strict" : "literal";
}

struct Schema {
  SchemaKind kind;
  std::uint64_t n = 0;  // LmtFinCollapse, FinIdempotent
  PlateauReading reading = PlateauReading::Strict;

  friend bool operator==(const Schema&, const Schema&) = default;
};

enum class SystemOrigin { Lmt, Lms, Free, Custom };

inline const char* to_string(SystemOrigin o) {
  switch (o) {
    case SystemOrigin::Lmt: return "lmt";
    case SystemOrigin::Lms: return "lms";
    case SystemOrigin::Free: return "free";
    case SystemOrigin::Custom: return "custom";
  }
  return "?";
}

struct IdentitySystem {
  SystemOrigin origin = SystemOrigin::Custom;
  std::vector<Schema> schemas;
  std::vector<Equation> extra;  // ground equations added by hand
  Cardinal target = Cardinal::fin(0);
  std::size_t q_len = 0;  // lms only

  friend bool operator==(const IdentitySystem&, const IdentitySystem&) = default;
};

namespace detail {

inline void require_limit_count(Cardinal lambda, const char* op) {
  if (lambda.is_zero() || !(lambda.is_finite() || lambda == Cardinal::omega()))
    throw Error(std::string(op) + ": number of limit models must be in 1..w, got " +
                to_string(lambda));
}

}  // namespace detail

// Limit models over a type.
inline IdentitySystem lmt_system(Cardinal lambda) {
  detail::require_limit_count(lambda, "lmt");
  IdentitySystem s;
  s.origin = SystemOrigin::Lmt;
  s.target = lambda;
  if (lambda.is_finite()) {
    s.schemas = {{SchemaKind::LmtFinCollapse, lambda.value()},
                 {SchemaKind::FinIdempotent, lambda.value()},
                 {SchemaKind::DescendingCollapse}};
  } else {
    s.schemas = {{SchemaKind::Idempotent},
                 {SchemaKind::DescendingCollapse},
                 {SchemaKind::AscendingInsert}};
  }
  return s;
}

// Limit models over a <=_RK-sequence of length q_len.
inline IdentitySystem lms_system(std::size_t q_len, Cardinal lambda,
                                 PlateauReading reading = PlateauReading::Strict) {
  detail::require_limit_count(lambda, "lms");
  IdentitySystem s;
  s.origin = SystemOrigin::Lms;
  s.target = lambda;
  s.q_len = q_len;
  if (lambda.is_finite()) {
    s.schemas = {{SchemaKind::LmtFinCollapse, lambda.value()},
                 {SchemaKind::AscendingToTop}};
  } else {
    s.schemas = {{SchemaKind::AscendingToTop},
                 {SchemaKind::ConsecutiveRun},
                 {SchemaKind::PlateauRun, 0, reading}};
  }
  return s;
}

// No identities: every sequence is its own class. Used when the target is
// the continuum, which no identity family in the operators reaches.
inline IdentitySystem free_system(Cardinal target) {
  IdentitySystem s;
  s.origin = SystemOrigin::Free;
  s.target = target;
  return s;
}

namespace detail {

// Calls f(word) for every word of length len over {0..A-1} in lex order.
template <class F>
void for_each_word(std::size_t len, Letter A, F&& f) {
  if (A == 0) return;
  Word w(len, 0);
  while (true) {
    f(w);
    std::size_t i = len;
    while (i > 0 && w[i - 1] + 1 == A) w[--i] = 0;
    if (i == 0) return;
    ++w[i - 1];
  }
}

inline void emit(std::vector<Equation>& out, Word lhs, Word rhs, std::size_t L) {
  if (lhs.size() > L || rhs.size() > L || lhs == rhs) return;
  out.push_back({std::move(lhs), std::move(rhs)});
}

inline void instantiate_schema(const Schema& sc, Letter A, std::size_t L,
                               std::vector<Equation>& out) {
  switch (sc.kind) {
    case SchemaKind::LmtFinCollapse:
      if (sc.n == 0) return;
      for (std::uint64_t m = sc.n; m < A; ++m)
        emit(out, {static_cast<Letter>(sc.n - 1)}, {static_cast<Letter>(m)}, L);
      return;
    case SchemaKind::FinIdempotent:
      for (std::uint64_t m = 0; m < std::min<std::uint64_t>(sc.n, A); ++m)
        emit(out, {static_cast<Letter>(m), static_cast<Letter>(m)}, {static_cast<Letter>(m)}, L);
      return;
    case SchemaKind::Idempotent:
      for (Letter m = 0; m < A; ++m) emit(out, {m, m}, {m}, L);
      return;
    case SchemaKind::DescendingCollapse:
      for (std::size_t len = 2; len <= L; ++len)
        for_each_word(len, A, [&](const Word& w) {
          const Letter last = w.back();
          if (*std::min_element(w.begin(), w.end() - 1) > last) emit(out, w, {last}, L);
        });
      return;
    case SchemaKind::AscendingInsert:
      for (Letter a = 0; a < A; ++a)
        for (Letter b = a + 1; b < A; ++b) {
          Word rhs(b - a + 1);
          std::iota(rhs.begin(), rhs.end(), a);
          emit(out, {a, b}, rhs, L);
        }
      return;
    case SchemaKind::AscendingToTop:
      for (std::size_t len = 2; len <= L; ++len)
        for_each_word(len, A, [&](const Word& w) {
          const Letter top = w.back();
          if (*std::max_element(w.begin(), w.end() - 1) < top) emit(out, w, Word(len, top), L);
        });
      return;
    case SchemaKind::ConsecutiveRun:
      for (std::size_t len = 1; len <= L; ++len)
        for_each_word(len, A, [&](const Word& w) {
          const std::uint64_t s = len - 1;
          if (w.front() + s > w.back()) return;
          Word rhs(len);
          std::iota(rhs.begin(), rhs.end(), w.front());
          emit(out, w, rhs, L);
        });
      return;
    case SchemaKind::PlateauRun:
      for (std::size_t len = 3; len <= L; ++len)
        for_each_word(len, A, [&](const Word& w) {
          const std::uint64_t s = len - 1;
          if (w.back() <= w.front()) return;
          const std::uint64_t t = w.back() - w.front();
          if (!(t > 0 && s > t)) return;
          if (sc.reading == PlateauReading::Strict && !(w.front() + s > w.back())) return;
          Word rhs(len, w.back());
          std::iota(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(t + 1), w.front());
          emit(out, w, rhs, L);
        });
      return;
  }
}

}  // namespace detail

// Ground instances with both sides of length <= L over {0..A-1}; schemas
// in order, each in shortlex order of its left side. Trivial u = u
// instances are dropped.
inline std::vector<Equation> instantiate(const IdentitySystem& sys, Letter A, std::size_t L) {
  std::vector<Equation> out;
  if (A == 0 || L == 0) return out;
  for (const auto& sc : sys.schemas) detail::instantiate_schema(sc, A, L, out);
  for (const auto& e : sys.extra) {
    const auto in_alphabet = [&](const Word& w) {
      return std::all_of(w.begin(), w.end(), [&](Letter l) { return l < A; });
    };
    if (e.lhs.empty() || e.rhs.empty()) throw Error("identity sides must be nonempty");
    if (in_alphabet(e.lhs) && in_alphabet(e.rhs)) detail::emit(out, e.lhs, e.rhs, L);
  }
  return out;
}

// Words of length 1..L over A letters, numbered shortlex.
class WordIndex {
 public:
  WordIndex(Letter A, std::size_t L, std::uint64_t budget = kDefaultWordBudget) : A_(A), L_(L) {
    if (A == 0 || L == 0) throw Error("alphabet and length bound must be positive");
    offset_.push_back(0);
    std::uint64_t layer = 1;
    for (std::size_t len = 1; len <= L; ++len) {
      if (layer > budget / A) throw budget_error(budget);
      layer *= A;
      offset_.push_back(offset_.back() + layer);
      if (offset_.back() > budget) throw budget_error(budget);
    }
  }

  Letter alphabet() const noexcept { return A_; }
  std::size_t max_len() const noexcept { return L_; }
  std::uint64_t size() const noexcept { return offset_.back(); }

  std::uint64_t index(const Word& w) const {
    if (w.empty() || w.size() > L_) throw Error("word length outside 1.." + std::to_string(L_));
    std::uint64_t v = 0;
    for (Letter l : w) {
      if (l >= A_) throw Error("letter " + std::to_string(l) + " outside the alphabet");
      v = v * A_ + l;
    }
    return offset_[w.size() - 1] + v;
  }

  Word word(std::uint64_t idx) const {
    std::size_t len = 1;
    while (idx >= offset_[len]) ++len;
    std::uint64_t v = idx - offset_[len - 1];
    Word w(len);
    for (std::size_t i = len; i-- > 0;) {
      w[i] = static_cast<Letter>(v % A_);
      v /= A_;
    }
    return w;
  }

 private:
  static Error budget_error(std::uint64_t budget) {
    return Error("word count exceeds the budget of " + std::to_string(budget));
  }

  Letter A_;
  std::size_t L_;
  std::vector<std::uint64_t> offset_;  // offset_[k] = number of words shorter than k+1
};

// Congruence classes of bounded words under a set of ground equations.
class Congruence {
 public:
  Congruence(const std::vector<Equation>& eqs, Letter A, std::size_t L,
             std::uint64_t budget = kDefaultWordBudget)
      : words_(A, L, budget), parent_(words_.size()) {
    std::iota(parent_.begin(), parent_.end(), std::uint64_t{0});
    // side -> other sides, keyed by word index
    std::unordered_map<std::uint64_t, std::vector<Word>> rules;
    for (const auto& e : eqs) {
      if (e.lhs.size() > L || e.rhs.size() > L) continue;
      rules[words_.index(e.lhs)].push_back(e.rhs);
      rules[words_.index(e.rhs)].push_back(e.lhs);
    }
    if (!rules.empty()) saturate(rules);
    // Root of each class is its shortlex-least member, which is also the
    // least index; find() leaves that invariant intact.
    for (std::uint64_t i = 0; i < parent_.size(); ++i) parent_[i] = find(i);
  }

  const WordIndex& words() const noexcept { return words_; }

  std::uint64_t class_count() const {
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < parent_.size(); ++i) c += parent_[i] == i;
    return c;
  }

  // Shortlex-least members of all classes, ascending.
  std::vector<Word> representatives() const {
    std::vector<Word> out;
    for (std::uint64_t i = 0; i < parent_.size(); ++i)
      if (parent_[i] == i) out.push_back(words_.word(i));
    return out;
  }

  Word normal_form(const Word& w) const {
    if (w.size() > words_.max_len())
      throw Error("word longer than the bound " + std::to_string(words_.max_len()));
    return words_.word(parent_[words_.index(w)]);
  }

  bool same_class(const Word& a, const Word& b) const {
    return parent_[words_.index(a)] == parent_[words_.index(b)];
  }

 private:
  std::uint64_t find(std::uint64_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void unite(std::uint64_t a, std::uint64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

  void saturate(const std::unordered_map<std::uint64_t, std::vector<Word>>& rules) {
    const std::size_t L = words_.max_len();
    for (std::uint64_t id = 0; id < words_.size(); ++id) {
      const Word w = words_.word(id);
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j <= w.size(); ++j) {
          const Word mid(w.begin() + static_cast<std::ptrdiff_t>(i),
                         w.begin() + static_cast<std::ptrdiff_t>(j));
          auto it = rules.find(words_.index(mid));
          if (it == rules.end()) continue;
          for (const auto& other : it->second) {
            const std::size_t len = w.size() - mid.size() + other.size();
            if (len > L) continue;
            Word v(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            v.insert(v.end(), other.begin(), other.end());
            v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(j), w.end());
            unite(id, words_.index(v));
          }
        }
    }
  }

  WordIndex words_;
  std::vector<std::uint64_t> parent_;
};

struct ClassCount {
  std::uint64_t count = 0;
  std::vector<Word> representatives;
};

inline ClassCount count_classes(const IdentitySystem& sys, Letter A, std::size_t L,
                                std::uint64_t budget = kDefaultWordBudget) {
  const Congruence c(instantiate(sys, A, L), A, L, budget);
  return {c.class_count(), c.representatives()};
}

inline Word normal_form(const IdentitySystem& sys, const Word& w, std::size_t L, Letter A) {
  if (w.empty()) throw Error("normal_form of an empty word");
  if (w.size() > L)
    throw Error("word of length " + std::to_string(w.size()) + " exceeds the bound " +
                std::to_string(L));
  const Congruence c(instantiate(sys, A, L), A, L);
  return c.normal_form(w);
}

// Alphabet defaults to the least one containing the letters of w.
inline Word normal_form(const IdentitySystem& sys, const Word& w, std::size_t L) {
  Letter A = 1;
  for (Letter l : w) A = std::max(A, l + 1);
  return normal_form(sys, w, L, A);
}

}  // namespace rkbench
