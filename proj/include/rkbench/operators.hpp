#pragma once

// Theory-building operators on finite structure specifications.
//
// "Infinitely many" witnesses in an axiom scheme become a fan-out of F
// fresh elements per required class. Every operator appends a log entry
// with the parameters verify_schemes needs to re-derive the expected
// allocation, so a single added, removed or moved tuple is caught.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/domination.hpp"
#include "rkbench/error.hpp"
#include "rkbench/limitcount.hpp"
#include "rkbench/report.hpp"
#include "rkbench/typespace.hpp"

namespace rkbench {

using Elem = std::uint32_t;
using Pair = std::pair<Elem, Elem>;
using Triple = std::array<Elem, 3>;

inline constexpr unsigned kDefaultFanout = 3;
inline constexpr unsigned kOperatorDepthLimit = 12;

struct OperatorConfig {
  unsigned fanout = kDefaultFanout;
  std::uint64_t seed = 0;  // permutes fresh elements among parts
};

struct AppliedOp {
  std::string tag;  // icp, css, bu, pred, link, lmt, lms, free
  std::size_t index = 0;
  std::map<std::string, std::string> args;

  const std::string& arg(const std::string& k) const {
    auto it = args.find(k);
    if (it == args.end()) throw Error("log entry " + tag + " lacks argument '" + k + "'");
    return it->second;
  }
  std::uint64_t num(const std::string& k) const { return std::stoull(arg(k)); }

  friend bool operator==(const AppliedOp&, const AppliedOp&) = default;
};

struct AttachedSystem {
  std::vector<std::string> nodes;  // the type or the sequence
  IdentitySystem system;
  friend bool operator==(const AttachedSystem&, const AttachedSystem&) = default;
};

struct StructSpec {
  std::size_t universe = 0;
  std::map<std::string, std::vector<Elem>> unary;  // sorted extents
  std::map<Elem, Color> coloring;
  std::map<std::string, std::set<Pair>> binary;
  std::map<std::string, std::set<Triple>> ternary;
  DominationGraph registry;
  std::vector<AppliedOp> log;
  std::vector<AttachedSystem> systems;

  const std::vector<Elem>& extent(const std::string& name) const {
    auto it = unary.find(name);
    if (it == unary.end()) throw Error("unknown predicate '" + name + "'");
    return it->second;
  }

  friend bool operator==(const StructSpec&, const StructSpec&) = default;
};

inline std::string rel_name(const std::string& tag, std::size_t index, std::size_t i) {
  return tag + std::to_string(index) + ".R" + std::to_string(i);
}

namespace detail {

inline void require_token(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(" \t\n,=:#") != std::string::npos)
    throw Error(std::string(what) + " '" + s + "' must be a token without spaces or any of ,=:#");
}

inline Elem fresh(StructSpec& s) {
  if (s.universe >= 0xffffffffu) throw Error("universe too large");
  return static_cast<Elem>(s.universe++);
}

inline Color color_of(const StructSpec& s, Elem e) {
  auto it = s.coloring.find(e);
  if (it == s.coloring.end()) throw Error("element " + std::to_string(e) + " has no color");
  return it->second;
}

// Colors count as their index; the infinite color counts as the depth.
inline unsigned effective(Color c, unsigned depth) {
  return c.is_infinite() ? depth : c.value();
}

inline unsigned check_colored_sub(const StructSpec& s, const std::string& sub, unsigned depth,
                                  const char* op) {
  const auto& ext = s.extent(sub);
  if (ext.empty()) throw Error(std::string(op) + ": predicate '" + sub + "' is empty");
  bool has_inf = false;
  unsigned maxc = 0;
  for (Elem e : ext) {
    const Color c = color_of(s, e);
    has_inf |= c.is_infinite();
    if (!c.is_infinite()) maxc = std::max(maxc, c.value());
  }
  if (!has_inf)
    throw Error(std::string(op) + ": predicate '" + sub + "' realizes no infinite color");
  if (depth < maxc)
    throw Error(std::string(op) + ": depth " + std::to_string(depth) +
                " is below the largest color " + std::to_string(maxc) + " of '" + sub + "'");
  return maxc;
}

// Each part gets `fanout`, extras are dealt round-robin over all parts.
inline std::vector<std::vector<std::uint64_t>> allocate(const std::vector<unsigned>& bits,
                                                        unsigned fanout, std::uint64_t total,
                                                        const char* op, const char* pool) {
  std::vector<std::vector<std::uint64_t>> sizes;
  std::uint64_t parts = 0;
  for (unsigned b : bits) {
    sizes.emplace_back(std::uint64_t{1} << b, fanout);
    parts += std::uint64_t{1} << b;
  }
  const std::uint64_t needed = parts * fanout;
  if (total < needed)
    throw Error(std::string(op) + ": " + pool + " has " + std::to_string(total) +
                " elements, the splits need " + std::to_string(needed));
  std::uint64_t extra = total - needed;
  while (extra > 0)
    for (auto& v : sizes)
      for (auto& x : v)
        if (extra > 0) {
          ++x;
          --extra;
        }
  return sizes;
}

inline std::vector<Elem> fresh_block(StructSpec& s, std::uint64_t count, const std::string& pred,
                                     std::uint64_t seed) {
  std::vector<Elem> block;
  for (std::uint64_t i = 0; i < count; ++i) block.push_back(fresh(s));
  s.unary[pred] = block;
  std::mt19937_64 rng(seed);
  std::shuffle(block.begin(), block.end(), rng);
  return block;
}

inline std::uint64_t needed_pool(const std::vector<unsigned>& bits, unsigned fanout) {
  std::uint64_t n = 0;
  for (unsigned b : bits) n += (std::uint64_t{1} << b) * fanout;
  return n;
}

inline std::string bits_string(std::uint64_t b, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if (b >> i & 1) s[i] = '1';
  return s;
}

inline AppliedOp& log_op(StructSpec& s, std::string tag) {
  AppliedOp op;
  op.tag = std::move(tag);
  op.index = s.log.size();
  s.log.push_back(std::move(op));
  return s.log.back();
}

}  // namespace detail

// A colored unary predicate with one element per listed color, and a
// registry node for its non-principal limit type.
inline StructSpec add_predicate(StructSpec s, const std::string& name,
                                const std::vector<Color>& colors) {
  detail::require_token(name, "predicate name");
  if (s.unary.contains(name)) throw Error("predicate '" + name + "' already exists");
  if (colors.empty()) throw Error("predicate '" + name + "' needs at least one color");
  std::vector<Elem> ext;
  for (Color c : colors) {
    const Elem e = detail::fresh(s);
    s.coloring[e] = c;
    ext.push_back(e);
  }
  s.unary[name] = ext;
  TypeNode n;
  n.id = name;
  n.prime = true;
  s.registry.add_node(n);
  auto& op = detail::log_op(s, "pred");
  op.args["name"] = name;
  std::string cs;
  for (std::size_t i = 0; i < colors.size(); ++i) cs += (i ? "," : "") + to_string(colors[i]);
  op.args["colors"] = cs;
  return s;
}

// Q-link from `lower` to `upper`: pairs (x, y) with x in lower, y in upper
// and color(x) >= color(y), so the coloring is Q-ordered. `upper`
// dominates `lower`; a non-principal link records domination without an
// isolating witness.
inline StructSpec add_link(StructSpec s, const std::string& lower, const std::string& upper,
                           bool principal) {
  if (lower == upper) throw Error("link: a predicate cannot be linked to itself");
  const auto& lo = s.extent(lower);
  const auto& hi = s.extent(upper);
  std::string name = "Q." + lower + "." + upper;
  if (s.binary.contains(name)) throw Error("link: " + lower + " -> " + upper + " already exists");
  auto& rel = s.binary[name];
  for (Elem x : lo)
    for (Elem y : hi)
      if (detail::color_of(s, y) <= detail::color_of(s, x)) rel.insert({x, y});
  s.registry.add_edge(upper, lower, name, principal);
  auto& op = detail::log_op(s, "link");
  op.args["lower"] = lower;
  op.args["upper"] = upper;
  op.args["principal"] = principal ? "1" : "0";
  return s;
}

// Continual partition of `sub` over `y_count` fresh elements (nullopt: the
// exact number the splits need).
inline StructSpec icp(StructSpec s, const std::string& sub, std::optional<std::uint64_t> y_count,
                      unsigned depth, const OperatorConfig& cfg = {}) {
  if (depth > kOperatorDepthLimit)
    throw Error("icp: depth " + std::to_string(depth) + " exceeds " +
                std::to_string(kOperatorDepthLimit));
  if (cfg.fanout == 0) throw Error("icp: fan-out must be positive");
  detail::check_colored_sub(s, sub, depth, "icp");
  s.registry.index_of(sub);
  const auto ext = s.extent(sub);
  std::vector<unsigned> bits;
  for (Elem x : ext) bits.push_back(detail::effective(detail::color_of(s, x), depth));
  const std::uint64_t total = y_count.value_or(detail::needed_pool(bits, cfg.fanout));
  const auto sizes = detail::allocate(bits, cfg.fanout, total, "icp", "Y");

  const std::size_t k = s.log.size();
  const std::string ypred = "icp" + std::to_string(k) + ".Y";
  const std::uint64_t y_begin = s.universe;
  auto pool = detail::fresh_block(s, total, ypred, cfg.seed ^ k);
  std::size_t next = 0;
  auto& r0 = s.binary[rel_name("icp", k, 0)];
  for (unsigned i = 1; i <= depth; ++i) s.binary[rel_name("icp", k, i)];
  for (std::size_t xi = 0; xi < ext.size(); ++xi)
    for (std::uint64_t part = 0; part < sizes[xi].size(); ++part)
      for (std::uint64_t c = 0; c < sizes[xi][part]; ++c) {
        const Elem y = pool[next++];
        r0.insert({ext[xi], y});
        for (unsigned i = 1; i <= bits[xi]; ++i)
          if (part >> (i - 1) & 1) s.binary[rel_name("icp", k, i)].insert({ext[xi], y});
      }

  s.registry.node(sub).prime = false;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << depth); ++b) {
    TypeNode stub;
    stub.id = sub + ".q" + detail::bits_string(b, depth);
    stub.kind = NodeKind::Stub;
    stub.origin = sub;
    s.registry.add_node(stub);
    s.registry.add_edge(stub.id, sub, rel_name("icp", k, 0), true);
  }
  auto& op = detail::log_op(s, "icp");
  op.args = {{"sub", sub},
             {"y_begin", std::to_string(y_begin)},
             {"y_count", std::to_string(total)},
             {"depth", std::to_string(depth)},
             {"fanout", std::to_string(cfg.fanout)},
             {"seed", std::to_string(cfg.seed)}};
  return s;
}

// Allocation for a countable subset: realizes exactly the stubs in q over
// `sub`. With `linked` the subset is tied to sub's type, which bans
// downward movement (bd).
inline StructSpec css(StructSpec s, const std::vector<std::string>& q, const std::string& sub,
                      bool linked = false, const OperatorConfig& cfg = {}) {
  if (q.empty()) throw Error("css: the subset of types is empty");
  if (cfg.fanout == 0) throw Error("css: fan-out must be positive");
  std::set<std::string> seen;
  for (const auto& id : q) {
    if (!s.registry.contains(id) || s.registry.node(id).kind != NodeKind::Stub)
      throw Error("css: '" + id + "' is not a continuation type produced by icp");
    if (!seen.insert(id).second) throw Error("css: '" + id + "' listed twice");
  }
  const auto ext = s.extent(sub);
  s.registry.index_of(sub);
  unsigned kmax = 0;
  bool has_inf = false;
  for (Elem x : ext) {
    const Color c = detail::color_of(s, x);
    has_inf |= c.is_infinite();
    if (!c.is_infinite()) kmax = std::max(kmax, c.value());
  }
  if (!has_inf) throw Error("css: predicate '" + sub + "' realizes no infinite color");

  const std::size_t k = s.log.size();
  const std::string img = "css" + std::to_string(k) + ".img";
  const std::uint64_t begin = s.universe;
  std::vector<Elem> all;
  for (std::size_t j = 0; j < q.size(); ++j) {
    auto& rel = s.binary[rel_name("css", k, j)];
    for (Elem x : ext) {
      const Color c = detail::color_of(s, x);
      std::vector<Color> targets;
      if (c.is_infinite()) {
        targets.push_back(Color::infinite());
      } else {
        for (unsigned kk = c.value(); kk <= kmax; ++kk) targets.push_back(Color::finite(kk));
      }
      for (Color t : targets)
        for (unsigned f = 0; f < cfg.fanout; ++f) {
          const Elem y = detail::fresh(s);
          s.coloring[y] = t;
          rel.insert({x, y});
          all.push_back(y);
        }
    }
  }
  s.unary[img] = all;

  auto& node = s.registry.node(sub);
  node.prime = true;
  node.realizes = q;
  node.linked = node.linked || linked;
  // Recorded as realization only: an edge sub -> q_j would close the
  // partitioned type below every allocated predicate.
  for (const auto& id : q) s.registry.node(id).realized = true;
  auto& op = detail::log_op(s, "css");
  std::string qs;
  for (std::size_t j = 0; j < q.size(); ++j) qs += (j ? "," : "") + q[j];
  op.args = {{"sub", sub},
             {"q", qs},
             {"kmax", std::to_string(kmax)},
             {"img_begin", std::to_string(begin)},
             {"img_count", std::to_string(all.size())},
             {"linked", linked ? "1" : "0"},
             {"fanout", std::to_string(cfg.fanout)}};
  return s;
}

inline StructSpec bd(StructSpec s, const std::vector<std::string>& q, const std::string& sub,
                     const OperatorConfig& cfg = {}) {
  return css(std::move(s), q, sub, true, cfg);
}

// Ban for upward movement: joint types over sub1 x sub2 lose prime models.
inline StructSpec bu(StructSpec s, const std::string& sub1, const std::string& sub2,
                     std::optional<std::uint64_t> z_count, unsigned depth,
                     const OperatorConfig& cfg = {}) {
  if (depth > kOperatorDepthLimit)
    throw Error("bu: depth " + std::to_string(depth) + " exceeds " +
                std::to_string(kOperatorDepthLimit));
  if (cfg.fanout == 0) throw Error("bu: fan-out must be positive");
  detail::check_colored_sub(s, sub1, depth, "bu");
  detail::check_colored_sub(s, sub2, depth, "bu");
  s.registry.index_of(sub1);
  s.registry.index_of(sub2);
  const auto e1 = s.extent(sub1), e2 = s.extent(sub2);
  for (Elem a : e1)
    if (std::binary_search(e2.begin(), e2.end(), a))
      throw Error("bu: predicates '" + sub1 + "' and '" + sub2 + "' overlap");
  std::vector<Pair> pairs;
  std::vector<unsigned> bits;
  for (Elem a : e1)
    for (Elem b : e2) {
      pairs.push_back({a, b});
      bits.push_back(std::min(detail::effective(detail::color_of(s, a), depth),
                              detail::effective(detail::color_of(s, b), depth)));
    }
  const std::uint64_t total = z_count.value_or(detail::needed_pool(bits, cfg.fanout));
  const auto sizes = detail::allocate(bits, cfg.fanout, total, "bu", "Z");

  const std::size_t k = s.log.size();
  const std::uint64_t z_begin = s.universe;
  auto pool = detail::fresh_block(s, total, "bu" + std::to_string(k) + ".Z", cfg.seed ^ k);
  std::size_t next = 0;
  auto& r0 = s.ternary[rel_name("bu", k, 0)];
  for (unsigned i = 1; i <= depth; ++i) s.ternary[rel_name("bu", k, i)];
  for (std::size_t pi = 0; pi < pairs.size(); ++pi)
    for (std::uint64_t part = 0; part < sizes[pi].size(); ++part)
      for (std::uint64_t c = 0; c < sizes[pi][part]; ++c) {
        const Elem z = pool[next++];
        const Triple t{pairs[pi].first, pairs[pi].second, z};
        r0.insert(t);
        for (unsigned i = 1; i <= bits[pi]; ++i)
          if (part >> (i - 1) & 1) s.ternary[rel_name("bu", k, i)].insert(t);
      }

  TypeNode joint;
  joint.id = sub1 + "*" + sub2;
  if (s.registry.contains(joint.id)) joint.id += "#" + std::to_string(k);
  joint.kind = NodeKind::Joint;
  joint.origin = sub1 + "*" + sub2;
  const std::string jid = joint.id;
  s.registry.add_node(joint);
  s.registry.add_edge(jid, sub1, rel_name("bu", k, 0), true);
  s.registry.add_edge(jid, sub2, rel_name("bu", k, 0), true);
  auto& op = detail::log_op(s, "bu");
  op.args = {{"sub1", sub1},
             {"sub2", sub2},
             {"joint", jid},
             {"z_begin", std::to_string(z_begin)},
             {"z_count", std::to_string(total)},
             {"depth", std::to_string(depth)},
             {"fanout", std::to_string(cfg.fanout)},
             {"seed", std::to_string(cfg.seed)}};
  return s;
}

// Identity families for limit models; see limitcount.
inline IdentitySystem lmt(const std::string& p, Cardinal lambda) {
  detail::require_token(p, "type id");
  return lmt_system(lambda);
}

inline IdentitySystem lms(std::size_t q_len, Cardinal lambda,
                          PlateauReading reading = PlateauReading::Strict) {
  if (q_len == 0) throw Error("lms: the sequence is empty");
  return lms_system(q_len, lambda, reading);
}

namespace detail {

inline void annotate_il(StructSpec& s, const std::string& p, Cardinal lambda) {
  auto& n = s.registry.node(p);
  n.il = card_sum(n.il.value_or(Cardinal::fin(0)), lambda);
}

}  // namespace detail

// Attaches lmt's system to node p; the realizations it adds never
// semi-isolate their base, which is recorded on the system only.
inline StructSpec apply_lmt(StructSpec s, const std::string& p, Cardinal lambda) {
  s.registry.index_of(p);
  s.systems.push_back({{p}, lmt(p, lambda)});
  detail::annotate_il(s, p, lambda);
  auto& op = detail::log_op(s, "lmt");
  op.args = {{"p", p}, {"lambda", to_string(lambda)}};
  return s;
}

inline StructSpec apply_free(StructSpec s, const std::string& p, Cardinal lambda) {
  s.registry.index_of(p);
  s.systems.push_back({{p}, free_system(lambda)});
  detail::annotate_il(s, p, lambda);
  auto& op = detail::log_op(s, "free");
  op.args = {{"p", p}, {"lambda", to_string(lambda)}};
  return s;
}

inline StructSpec apply_lms(StructSpec s, const std::vector<std::string>& q, Cardinal lambda,
                            PlateauReading reading = PlateauReading::Strict) {
  for (const auto& id : q) s.registry.index_of(id);
  s.systems.push_back({q, lms(q.size(), lambda, reading)});
  auto& op = detail::log_op(s, "lms");
  std::string qs;
  for (std::size_t j = 0; j < q.size(); ++j) qs += (j ? "," : "") + q[j];
  op.args = {{"q", qs}, {"lambda", to_string(lambda)}, {"reading", to_string(reading)}};
  return s;
}

// ---------------------------------------------------------------------------
// Ground re-evaluation of the schemes

namespace detail {

using SourceKey = std::vector<Elem>;                   // an element or a pair
using Graded = std::map<SourceKey, std::set<Elem>>;    // source -> images

inline Graded grade(const std::set<Pair>& rel) {
  Graded g;
  for (const auto& [x, y] : rel) g[{x}].insert(y);
  return g;
}

inline Graded grade(const std::set<Triple>& rel) {
  Graded g;
  for (const auto& t : rel) g[{t[0], t[1]}].insert(t[2]);
  return g;
}

inline std::string show(const SourceKey& k) {
  if (k.size() == 1) return std::to_string(k[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + ")";
}

inline bool has(const Graded& g, const SourceKey& k, Elem y) {
  auto it = g.find(k);
  return it != g.end() && it->second.contains(y);
}

// Schemes (1)-(3) of icp and bu: rels[0] is R0, rels[i] is R_i.
inline void check_partition(Report& r, const std::vector<SourceKey>& sources,
                            const std::vector<unsigned>& bits,
                            const std::vector<std::vector<std::uint64_t>>& expected,
                            const std::vector<Graded>& rels, const std::vector<Elem>& pool,
                            unsigned fanout) {
  const Graded& r0 = rels[0];
  const std::set<Elem> pool_set(pool.begin(), pool.end());
  const std::set<SourceKey> source_set(sources.begin(), sources.end());
  std::size_t bad_domain = 0;
  std::map<Elem, std::size_t> preimages;
  for (const auto& [src, img] : r0)
    for (Elem y : img) {
      if (!source_set.contains(src) || !pool_set.contains(y)) ++bad_domain;
      ++preimages[y];
    }
  r.check("domain", bad_domain == 0,
          std::to_string(bad_domain) + " R0 tuples outside sources x pool");
  std::size_t unhit = 0;
  for (Elem y : pool) unhit += !preimages.contains(y);
  r.check("range", unhit == 0, std::to_string(unhit) + " pool elements outside the R0 range");
  std::size_t shared = 0;
  for (const auto& [y, n] : preimages) shared += n > 1;
  r.check("scheme-2-disjoint", shared == 0,
          std::to_string(shared) + " elements in the images of two sources");
  std::size_t escaped = 0;
  for (std::size_t i = 1; i < rels.size(); ++i)
    for (const auto& [src, img] : rels[i])
      for (Elem y : img) escaped += !has(r0, src, y);
  r.check("Ri-in-R0", escaped == 0, std::to_string(escaped) + " R_i tuples outside R0");

  std::size_t thin = 0, wrong = 0, beyond = 0;
  std::string first;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const auto it = r0.find(sources[si]);
    const std::set<Elem> none;
    const auto& img = it == r0.end() ? none : it->second;
    if (img.size() < fanout) ++thin;
    std::map<std::uint64_t, std::uint64_t> parts;
    for (Elem y : img) {
      std::uint64_t sig = 0;
      for (unsigned i = 1; i <= bits[si] && i < rels.size(); ++i)
        if (has(rels[i], sources[si], y)) sig |= std::uint64_t{1} << (i - 1);
      ++parts[sig];
      for (std::size_t i = bits[si] + 1; i < rels.size(); ++i) beyond += has(rels[i], sources[si], y);
    }
    bool ok = parts.size() == expected[si].size();
    for (std::uint64_t b = 0; ok && b < expected[si].size(); ++b) {
      auto pt = parts.find(b);
      ok = pt != parts.end() && pt->second == expected[si][b] && pt->second >= fanout;
    }
    if (!ok && !wrong++) first = show(sources[si]);
  }
  r.check("scheme-1-infinite", thin == 0,
          std::to_string(thin) + " sources with fewer than F images");
  r.check("scheme-3-split", wrong == 0,
          wrong ? std::to_string(wrong) + " sources not split into 2^n parts as allocated, first " +
                      first
                : "every image splits into 2^n parts of the allocated sizes");
  r.check("scheme-3-no-higher", beyond == 0,
          std::to_string(beyond) + " R_i tuples with i above the source color");
}

inline std::vector<Elem> pool_of(const StructSpec& s, const std::string& pred) {
  auto it = s.unary.find(pred);
  return it == s.unary.end() ? std::vector<Elem>{} : it->second;
}

inline void verify_icp(Report& r, const StructSpec& s, const AppliedOp& op) {
  const unsigned depth = static_cast<unsigned>(op.num("depth"));
  const unsigned fanout = static_cast<unsigned>(op.num("fanout"));
  const auto& ext = s.extent(op.arg("sub"));
  std::vector<SourceKey> sources;
  std::vector<unsigned> bits;
  for (Elem x : ext) {
    sources.push_back({x});
    bits.push_back(effective(color_of(s, x), depth));
  }
  const auto expected = allocate(bits, fanout, op.num("y_count"), "icp", "Y");
  std::vector<Graded> rels;
  for (unsigned i = 0; i <= depth; ++i) {
    auto it = s.binary.find(rel_name("icp", op.index, i));
    rels.push_back(it == s.binary.end() ? Graded{} : grade(it->second));
  }
  check_partition(r, sources, bits, expected, rels,
                  pool_of(s, "icp" + std::to_string(op.index) + ".Y"), fanout);
  r.check("no-prime-over-sub", !s.registry.node(op.arg("sub")).prime ||
                                   !s.registry.node(op.arg("sub")).realizes.empty(),
          "the partitioned type keeps no prime model until css allocates a subset");
}

inline void verify_bu(Report& r, const StructSpec& s, const AppliedOp& op) {
  const unsigned depth = static_cast<unsigned>(op.num("depth"));
  const unsigned fanout = static_cast<unsigned>(op.num("fanout"));
  const auto& e1 = s.extent(op.arg("sub1"));
  const auto& e2 = s.extent(op.arg("sub2"));
  std::vector<SourceKey> sources;
  std::vector<unsigned> bits;
  for (Elem a : e1)
    for (Elem b : e2) {
      sources.push_back({a, b});
      bits.push_back(std::min(effective(color_of(s, a), depth), effective(color_of(s, b), depth)));
    }
  const auto expected = allocate(bits, fanout, op.num("z_count"), "bu", "Z");
  std::vector<Graded> rels;
  for (unsigned i = 0; i <= depth; ++i) {
    auto it = s.ternary.find(rel_name("bu", op.index, i));
    rels.push_back(it == s.ternary.end() ? Graded{} : grade(it->second));
  }
  check_partition(r, sources, bits, expected, rels,
                  pool_of(s, "bu" + std::to_string(op.index) + ".Z"), fanout);
  const auto& joint = s.registry.node(op.arg("joint"));
  r.check("joint-not-prime", !joint.prime, "joint type " + joint.id + " has no prime model");
}

inline void verify_css(Report& r, const StructSpec& s, const AppliedOp& op) {
  const unsigned fanout = static_cast<unsigned>(op.num("fanout"));
  const unsigned kmax = static_cast<unsigned>(op.num("kmax"));
  const auto& ext = s.extent(op.arg("sub"));
  std::vector<std::string> q;
  {
    std::string cur;
    for (char c : op.arg("q") + ",") {
      if (c == ',') {
        q.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  const auto img = pool_of(s, "css" + std::to_string(op.index) + ".img");
  const std::set<Elem> img_set(img.begin(), img.end());
  const std::set<Elem> ext_set(ext.begin(), ext.end());
  std::map<Elem, std::size_t> preimages;
  std::size_t bad_domain = 0, wrong_colors = 0, low = 0;
  std::string first;
  for (std::size_t j = 0; j < q.size(); ++j) {
    auto it = s.binary.find(rel_name("css", op.index, j));
    const Graded g = it == s.binary.end() ? Graded{} : grade(it->second);
    for (const auto& [src, ys] : g)
      for (Elem y : ys) {
        if (!ext_set.contains(src[0]) || !img_set.contains(y)) ++bad_domain;
        ++preimages[y];
      }
    for (Elem x : ext) {
      const Color c = color_of(s, x);
      std::map<Color, std::size_t> by_color;
      auto gi = g.find({x});
      if (gi != g.end())
        for (Elem y : gi->second) {
          auto ci = s.coloring.find(y);
          if (ci == s.coloring.end()) {
            ++wrong_colors;
            continue;
          }
          ++by_color[ci->second];
          if (!c.is_infinite() && !ci->second.is_infinite() && ci->second.value() < c.value())
            ++low;
        }
      std::map<Color, std::size_t> want;
      if (c.is_infinite()) {
        want[Color::infinite()] = fanout;
      } else {
        for (unsigned kk = c.value(); kk <= kmax; ++kk) want[Color::finite(kk)] = fanout;
      }
      if (by_color != want && !wrong_colors++) first = std::to_string(x) + " via " + q[j];
    }
  }
  r.check("domain", bad_domain == 0,
          std::to_string(bad_domain) + " R_j tuples outside sub x images");
  std::size_t shared = 0;
  for (const auto& [y, n] : preimages) shared += n > 1;
  std::size_t orphan = 0;
  for (Elem y : img) orphan += !preimages.contains(y);
  r.check("scheme-2-disjoint", shared == 0,
          std::to_string(shared) + " images shared by two sources");
  r.check("images-used", orphan == 0, std::to_string(orphan) + " image elements without a source");
  r.check("scheme-1-no-lower", low == 0,
          std::to_string(low) + " images with a color below the source color");
  r.check("scheme-1-every-higher", wrong_colors == 0,
          wrong_colors ? "image colors differ from F per color k >= i, first " + first
                       : "F images at every color k >= i");
  const auto& node = s.registry.node(op.arg("sub"));
  bool realized = node.prime;
  for (const auto& id : q)
    realized = realized && s.registry.node(id).realized &&
               std::find(node.realizes.begin(), node.realizes.end(), id) != node.realizes.end();
  r.check("prime-realizing-subset", realized,
          "prime model over " + node.id + " realizes the allocated subset");
}

}  // namespace detail

// Re-evaluates every ground instance of the named operator's schemes over
// all its applications in the log.
inline Report verify_schemes(const StructSpec& s, const std::string& op_tag) {
  const std::string tag = op_tag == "bd" ? "css" : op_tag;
  if (tag != "icp" && tag != "css" && tag != "bu")
    throw Error("verify_schemes: unknown operator '" + op_tag + "' (expected icp, css, bd or bu)");
  Report total;
  total.title = "verify " + op_tag;
  std::size_t runs = 0;
  for (const auto& op : s.log) {
    if (op.tag != tag) continue;
    ++runs;
    Report r;
    if (tag == "icp") detail::verify_icp(r, s, op);
    if (tag == "css") detail::verify_css(r, s, op);
    if (tag == "bu") detail::verify_bu(r, s, op);
    for (auto e : r.entries) {
      e.rule = tag + std::to_string(op.index) + "." + e.rule;
      total.entries.push_back(e);
    }
    if (!total.find_fact("fanout")) total.fact("fanout", op.arg("fanout"));
  }
  total.fact("applications", std::to_string(runs));
  return total;
}

// All three operator families.
inline Report verify_all(const StructSpec& s) {
  Report r;
  r.title = "verify";
  for (const char* tag : {"icp", "css", "bu"}) {
    const Report part = verify_schemes(s, tag);
    r.entries.insert(r.entries.end(), part.entries.begin(), part.entries.end());
  }
  return r;
}

}  // namespace rkbench
