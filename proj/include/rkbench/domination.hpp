#pragma once

// Witness-based Rudin-Keisler domination graphs.
//
// An edge q -> p records a (q,p)-formula: p is dominated by q, p <=_RK q.
// Nothing is inferred from type contents; every edge carries its label.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/error.hpp"
#include "rkbench/preorder.hpp"

namespace rkbench {

// Realizations of one type; edge (from, to) describes tp(to / from).
struct RealizationEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  bool principal = false;
  bool semi_isolates = false;

  friend bool operator==(const RealizationEdge&, const RealizationEdge&) = default;
};

class RealizationDigraph {
 public:
  RealizationDigraph() = default;
  explicit RealizationDigraph(std::size_t n) : n_(n) {}

  std::size_t size() const noexcept { return n_; }
  const std::vector<RealizationEdge>& edges() const noexcept { return edges_; }

  // A principal edge always semi-isolates.
  void add(std::size_t from, std::size_t to, bool principal, bool semi_isolates) {
    if (from >= n_ || to >= n_)
      throw Error("realization edge " + std::to_string(from) + "->" + std::to_string(to) +
                  " out of range for " + std::to_string(n_) + " realizations");
    edges_.push_back({from, to, principal, semi_isolates || principal});
  }

  bool semi_isolates(std::size_t from, std::size_t to) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const RealizationEdge& e) {
      return e.from == from && e.to == to && e.semi_isolates;
    });
  }

  friend bool operator==(const RealizationDigraph&, const RealizationDigraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<RealizationEdge> edges_;
};

// Isolation is not symmetric: some tp(b/a) is principal while b does not
// semi-isolate a.
inline bool limit_exists_over(const RealizationDigraph& r, bool has_prime_model) {
  if (!has_prime_model)
    throw Error("limit_exists_over: the type has no prime model over its realizations");
  for (const auto& e : r.edges())
    if (e.principal && !r.semi_isolates(e.to, e.from)) return true;
  return false;
}

enum class NodeKind { Type, Stub, Joint };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Type: return "type";
    case NodeKind::Stub: return "stub";
    case NodeKind::Joint: return "joint";
  }
  return "?";
}

struct TypeNode {
  std::string id;
  bool principal = false;
  bool prime = false;  // a prime model over a realization exists
  NodeKind kind = NodeKind::Type;
  std::string origin;  // stub: the type it continues; joint: "a*b"
  bool realized = false;
  bool linked = false;
  std::optional<Cardinal> il;  // limit models over the node's class
  std::vector<std::string> realizes;
  std::optional<RealizationDigraph> realizations;

  friend bool operator==(const TypeNode&, const TypeNode&) = default;
};

struct DomEdge {
  std::string q;  // dominating
  std::string p;  // dominated
  std::string label;
  bool principal = false;

  friend bool operator==(const DomEdge&, const DomEdge&) = default;
};

class DominationGraph {
 public:
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<TypeNode>& nodes() const noexcept { return nodes_; }
  const std::vector<DomEdge>& edges() const noexcept { return edges_; }

  bool contains(const std::string& id) const { return index_.contains(id); }

  std::size_t index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("unknown type node '" + id + "'");
    return it->second;
  }

  const TypeNode& node(const std::string& id) const { return nodes_[index_of(id)]; }
  TypeNode& node(const std::string& id) { return nodes_[index_of(id)]; }

  // A principal type is realized in every model, so its prime model exists.
  TypeNode& add_node(TypeNode n) {
    if (n.id.empty() || n.id.find_first_of(" \t\n") != std::string::npos)
      throw Error("type node id must be a nonempty token, got '" + n.id + "'");
    if (contains(n.id)) throw Error("duplicate type node '" + n.id + "'");
    if (n.principal) n.prime = true;
    index_.emplace(n.id, nodes_.size());
    nodes_.push_back(std::move(n));
    return nodes_.back();
  }

  void add_edge(const std::string& q, const std::string& p, const std::string& label,
                bool principal) {
    index_of(q);
    index_of(p);
    if (label.empty() || label.find_first_of(" \t\n") != std::string::npos)
      throw Error("edge label must be a nonempty token");
    edges_.push_back({q, p, label, principal});
  }

  friend bool operator==(const DominationGraph& a, const DominationGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<TypeNode> nodes_;
  std::vector<DomEdge> edges_;
  std::map<std::string, std::size_t> index_;
};

// p <= q iff p is dominated by q; indices follow g.nodes().
inline Preorder rk_preorder(const DominationGraph& g) {
  Preorder p(g.size());
  for (const auto& e : g.edges()) p.add(g.index_of(e.p), g.index_of(e.q));
  return close(p);
}

inline Preorder rkt_structure(const DominationGraph& g) { return rk_preorder(g); }

namespace detail {

inline std::size_t uf_find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Classes of the equivalence generated by pairs joined with principal
// witnesses in both directions.
inline std::vector<std::size_t> strong_classes(const DominationGraph& g) {
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const auto& e : g.edges()) {
    if (!e.principal || e.p == e.q) continue;
    const bool back = std::any_of(g.edges().begin(), g.edges().end(), [&](const DomEdge& f) {
      return f.principal && f.q == e.p && f.p == e.q;
    });
    if (back) parent[uf_find(parent, g.index_of(e.p))] = uf_find(parent, g.index_of(e.q));
  }
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = uf_find(parent, i);
  return parent;
}

}  // namespace detail

// p ==_RK q: principal witnesses in both directions, closed under
// transitivity. For prime nodes this means M_p and M_q are isomorphic.
inline bool strong_equiv(const DominationGraph& g, const std::string& p, const std::string& q) {
  const auto i = g.index_of(p), j = g.index_of(q);
  if (i == j) return true;
  const auto cls = detail::strong_classes(g);
  return cls[i] == cls[j];
}

// RK(T): isomorphism types of prime models over realizations of nodes,
// ordered by domination.
struct RkStructure {
  std::vector<std::string> nodes;                  // prime nodes, graph order
  std::vector<std::vector<std::string>> iso_types;  // strong_equiv groups
  Preorder order;                                   // on iso_types
  QuotientPoset quotient;                           // ~-classes of iso_types

  // Number of isomorphism types in the ~-class `c` of the quotient.
  std::size_t iso_count(std::size_t c) const { return quotient.classes.at(c).size(); }
};

inline RkStructure rk_structure(const DominationGraph& g) {
  const Preorder full = rk_preorder(g);
  const auto strong = detail::strong_classes(g);
  RkStructure out;
  std::vector<std::size_t> rep_of_group;  // graph index of first member
  std::map<std::size_t, std::size_t> group_of_root;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.nodes()[i].prime) continue;
    out.nodes.push_back(g.nodes()[i].id);
    auto [it, fresh] = group_of_root.emplace(strong[i], out.iso_types.size());
    if (fresh) {
      out.iso_types.emplace_back();
      rep_of_group.push_back(i);
    }
    out.iso_types[it->second].push_back(g.nodes()[i].id);
  }
  out.order = Preorder(out.iso_types.size());
  for (std::size_t a = 0; a < rep_of_group.size(); ++a)
    for (std::size_t b = 0; b < rep_of_group.size(); ++b)
      if (full.le(rep_of_group[a], rep_of_group[b])) out.order.add(a, b);
  out.quotient = sim_quotient(out.order);
  return out;
}

}  // namespace rkbench
