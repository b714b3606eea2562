#pragma once

// Exhaustive congruence oracle for the limit-model identities. Equations are
// generated here from the identity lists themselves, and classes are merged
// by relabelling a std::map until no context step changes anything.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Word = std::vector<std::uint32_t>;
using Eq = std::pair<Word, Word>;

inline std::vector<Word> all_words(std::uint32_t A, std::size_t L) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= L; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (std::uint32_t a = 0; a < A; ++a) {
        Word v = w;
        v.push_back(a);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline Word run(std::uint32_t from, std::uint32_t to) {
  Word w;
  for (std::uint32_t x = from; x <= to; ++x) w.push_back(x);
  return w;
}

enum class Family { LmtFinite, LmtOmega, LmsFinite, LmsOmega };

// Identities, each tested directly against every candidate left side.
inline std::vector<Eq> identities(Family fam, std::uint32_t n, std::uint32_t A, std::size_t L,
                                  bool strict_plateau = true) {
  std::set<Eq> eqs;
  const auto add = [&](const Word& l, const Word& r) {
    if (l != r && l.size() <= L && r.size() <= L) eqs.insert({l, r});
  };
  const bool finite = fam == Family::LmtFinite || fam == Family::LmsFinite;
  if (finite && n >= 1)
    for (std::uint32_t m = n; m < A; ++m) add({n - 1}, {m});
  for (const Word& w : all_words(A, L)) {
    const std::size_t s = w.size() - 1;
    const std::uint32_t first = w.front(), last = w.back();
    const std::uint32_t min_init = s ? *std::min_element(w.begin(), w.end() - 1) : 0;
    const std::uint32_t max_init = s ? *std::max_element(w.begin(), w.end() - 1) : 0;
    switch (fam) {
      case Family::LmtFinite:
        if (w.size() == 2 && w[0] == w[1] && w[0] < n) add(w, {w[0]});
        if (s >= 1 && min_init > last) add(w, {last});
        break;
      case Family::LmtOmega:
        if (w.size() == 2 && w[0] == w[1]) add(w, {w[0]});
        if (s >= 1 && min_init > last) add(w, {last});
        if (w.size() == 2 && w[0] < w[1]) add(w, run(w[0], w[1]));
        break;
      case Family::LmsFinite:
        if (s >= 1 && max_init < last) add(w, Word(w.size(), last));
        break;
      case Family::LmsOmega: {
        if (s >= 1 && max_init < last) add(w, Word(w.size(), last));
        if (first + s <= last) add(w, run(first, first + static_cast<std::uint32_t>(s)));
        if (last > first) {
          const std::uint32_t t = last - first;
          if (t > 0 && s > t && (!strict_plateau || first + s > last)) {
            Word r = run(first, last);
            while (r.size() < w.size()) r.push_back(last);
            add(w, r);
          }
        }
        break;
      }
    }
  }
  return {eqs.begin(), eqs.end()};
}

// Number of classes of nonempty words of length <= L under the congruence
// generated by `eqs`, following only steps whose both ends fit in L.
inline std::size_t count_classes(const std::vector<Eq>& eqs, std::uint32_t A, std::size_t L) {
  const auto words = all_words(A, L);
  std::map<Word, std::size_t> label;
  for (std::size_t i = 0; i < words.size(); ++i) label[words[i]] = i;
  const auto relabel = [&](std::size_t from, std::size_t to) {
    for (auto& [w, l] : label)
      if (l == from) l = to;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [lhs, rhs] : eqs)
      for (int dir = 0; dir < 2; ++dir) {
        const Word& u = dir ? rhs : lhs;
        const Word& v = dir ? lhs : rhs;
        // contexts x, y with |x u y| <= L and |x v y| <= L
        const std::size_t room = L - std::max(u.size(), v.size());
        for (std::size_t lx = 0; lx <= room; ++lx)
          for (std::size_t ly = 0; lx + ly <= room; ++ly) {
            std::vector<Word> xs = lx ? std::vector<Word>{} : std::vector<Word>{Word{}};
            std::vector<Word> ys = ly ? std::vector<Word>{} : std::vector<Word>{Word{}};
            for (const auto& w : all_words(A, lx))
              if (w.size() == lx) xs.push_back(w);
            for (const auto& w : all_words(A, ly))
              if (w.size() == ly) ys.push_back(w);
            for (const auto& x : xs)
              for (const auto& y : ys) {
                Word a = x, b = x;
                a.insert(a.end(), u.begin(), u.end());
                a.insert(a.end(), y.begin(), y.end());
                b.insert(b.end(), v.begin(), v.end());
                b.insert(b.end(), y.begin(), y.end());
                const std::size_t la = label.at(a), lb = label.at(b);
                if (la != lb) {
                  relabel(std::max(la, lb), std::min(la, lb));
                  changed = true;
                }
              }
          }
      }
  }
  std::set<std::size_t> distinct;
  for (const auto& [w, l] : label) distinct.insert(l);
  return distinct.size();
}

}  // namespace oracle
