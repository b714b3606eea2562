#pragma once

// Line-oriented text formats. Every parser reports errors as
// ParseError(source, line, expected production). '#' starts a comment.
//
// preorder        elements: <n> / <i> <= <j>
// type space      family: iup|sdup|colored / m: <k> / depth: <d>
// model spec      type space lines / cap: <k> / base: all|none /
//                 + <cell> [count] / - <cell>
// premodel        size: / directed: yes|no / lower-cone: / class: /
//                 height: / upper-cone: <cone> <complement> equals-x|proper
// graph           type <id> [flags] / <q> dominates <p> via <label> [principal] /
//                 realizations <id> <n> / realization-edge <id> <a> <b> [principal] [semi]
// struct spec     universe: / colors: / unary|binary|ternary <name>: / graph lines /
//                 log <tag> <index> k=v... / system ...
// distribution    preorder lines / mode: / class: / growth: / partition: /
//                 f: class <e> = <card> / f: seq <prefix> | <cycle>|gen = <card>

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/distribution.hpp"
#include "rkbench/domination.hpp"
#include "rkbench/error.hpp"
#include "rkbench/limitcount.hpp"
#include "rkbench/models.hpp"
#include "rkbench/operators.hpp"
#include "rkbench/preorder.hpp"
#include "rkbench/typespace.hpp"

namespace rkbench {

namespace text {

struct Line {
  std::size_t number = 0;
  std::string raw;
  std::vector<std::string> words;
};

// Nonblank lines with comments stripped, split on whitespace.
inline std::vector<Line> lines_of(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::istringstream ws(raw.substr(0, raw.find('#')));
    Line l{n, raw, {}};
    std::string w;
    while (ws >> w) l.words.push_back(w);
    if (!l.words.empty()) out.push_back(std::move(l));
  }
  return out;
}

// "key:" followed by exactly `count` words.
inline bool is_key(const Line& l, const char* key) { return l.words.front() == key; }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const Line& l, const std::string& expected) const {
    throw ParseError(source_, l.number, expected, l.raw);
  }

  void arity(const Line& l, std::size_t n, const std::string& expected) const {
    if (l.words.size() != n) fail(l, expected);
  }

  std::uint64_t number(const Line& l, const std::string& w, const std::string& expected,
                       std::uint64_t max = UINT32_MAX) const {
    if (w.empty() || w.size() > 10 || w.find_first_not_of("0123456789") != std::string::npos)
      fail(l, expected);
    const auto v = std::stoull(w);
    if (v > max) fail(l, expected);
    return v;
  }

  Cardinal cardinal(const Line& l, const std::string& w, const std::string& expected) const {
    auto c = try_parse_cardinal(w);
    if (!c) fail(l, expected);
    return *c;
  }

  bool yes_no(const Line& l, const std::string& w, const std::string& expected) const {
    if (w == "yes") return true;
    if (w == "no") return false;
    fail(l, expected);
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace text

// ---------------------------------------------------------------------------
// Preorder

inline std::string preorder_to_text(const Preorder& p) {
  std::string out = "elements: " + std::to_string(p.size()) + "\n";
  for (auto [i, j] : p.pairs()) out += std::to_string(i) + " <= " + std::to_string(j) + "\n";
  return out;
}

namespace detail {

// Consumes preorder lines; returns false for lines it does not own.
struct PreorderBuilder {
  std::optional<Preorder> p;
  std::vector<std::pair<std::size_t, std::size_t>> pending;
  std::vector<std::size_t> pending_lines;

  bool take(const text::Reader& rd, const text::Line& l) {
    if (text::is_key(l, "elements:")) {
      rd.arity(l, 2, "elements: <count>");
      if (p) rd.fail(l, "a single elements: line");
      p = Preorder(rd.number(l, l.words[1], "elements: <count>", 4096));
      return true;
    }
    if (l.words.size() == 3 && l.words[1] == "<=") {
      pending.emplace_back(rd.number(l, l.words[0], "<i> <= <j>"), rd.number(l, l.words[2], "<i> <= <j>"));
      pending_lines.push_back(l.number);
      return true;
    }
    return false;
  }

  Preorder finish(const text::Reader& rd) {
    if (!p) throw ParseError(rd.source(), 1, "an elements: line");
    for (std::size_t k = 0; k < pending.size(); ++k) {
      auto [i, j] = pending[k];
      if (i >= p->size() || j >= p->size())
        throw ParseError(rd.source(), pending_lines[k],
                         "element indices below " + std::to_string(p->size()));
      p->add(i, j);
    }
    return close(*p);
  }
};

}  // namespace detail

// The file's pairs generate the preorder; the result is closed.
inline Preorder parse_preorder(const std::string& content, const std::string& source = "<preorder>") {
  text::Reader rd(source);
  detail::PreorderBuilder b;
  for (const auto& l : text::lines_of(content))
    if (!b.take(rd, l)) rd.fail(l, "elements: <n> or <i> <= <j>");
  return b.finish(rd);
}

// ---------------------------------------------------------------------------
// Premodel profile

inline std::string premodel_to_text(const PremodelProfile& p) {
  std::string out;
  out += "size: " + to_string(p.size) + "\n";
  out += std::string("directed: ") + (p.directed ? "yes" : "no") + "\n";
  out += "lower-cone: " + to_string(p.lower_cone_card) + "\n";
  out += "class: " + to_string(p.class_card) + "\n";
  out += "height: " + to_string(p.height) + "\n";
  for (const auto& c : p.joint_upper_cone_cases)
    out += "upper-cone: " + to_string(c.cone_card) + " " + to_string(c.complement_card) + " " +
           (c.equals_x ? "equals-x" : "proper") + "\n";
  return out;
}

inline PremodelProfile parse_premodel(const std::string& content,
                                      const std::string& source = "<premodel>") {
  text::Reader rd(source);
  PremodelProfile p;
  for (const auto& l : text::lines_of(content)) {
    const auto& k = l.words.front();
    if (k == "size:" || k == "lower-cone:" || k == "class:" || k == "height:") {
      const std::string prod = k + " <cardinal>";
      rd.arity(l, 2, prod);
      const Cardinal c = rd.cardinal(l, l.words[1], prod);
      (k == "size:" ? p.size : k == "lower-cone:" ? p.lower_cone_card : k == "class:" ? p.class_card : p.height) = c;
    } else if (k == "directed:") {
      rd.arity(l, 2, "directed: yes|no");
      p.directed = rd.yes_no(l, l.words[1], "directed: yes|no");
    } else if (k == "upper-cone:") {
      const std::string prod = "upper-cone: <cone> <complement> equals-x|proper";
      rd.arity(l, 4, prod);
      JointUpperConeCase c;
      c.cone_card = rd.cardinal(l, l.words[1], prod);
      c.complement_card = rd.cardinal(l, l.words[2], prod);
      if (l.words[3] != "equals-x" && l.words[3] != "proper") rd.fail(l, prod);
      c.equals_x = l.words[3] == "equals-x";
      p.joint_upper_cone_cases.push_back(c);
    } else {
      rd.fail(l, "size:, directed:, lower-cone:, class:, height: or upper-cone:");
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Type spaces and model specs

inline std::string type_space_to_text(const TypeSpace& ts) {
  std::string out = std::string("family: ") + to_string(ts.family) + "\n";
  if (ts.family == Family::Colored) out += "m: " + std::to_string(ts.m) + "\n";
  out += "depth: " + std::to_string(ts.depth) + "\n";
  return out;
}

namespace detail {

struct SpaceBuilder {
  std::optional<Family> family;
  std::optional<unsigned> m, depth;

  bool take(const text::Reader& rd, const text::Line& l) {
    if (text::is_key(l, "family:")) {
      rd.arity(l, 2, "family: iup|sdup|colored");
      if (family) rd.fail(l, "a single family: line");
      for (Family f : {Family::Iup, Family::Sdup, Family::Colored})
        if (l.words[1] == to_string(f)) family = f;
      if (!family) rd.fail(l, "family: iup|sdup|colored");
      return true;
    }
    if (text::is_key(l, "m:")) {
      rd.arity(l, 2, "m: <count>");
      m = static_cast<unsigned>(rd.number(l, l.words[1], "m: <count>", 1u << 20));
      return true;
    }
    if (text::is_key(l, "depth:")) {
      rd.arity(l, 2, "depth: <d>");
      depth = static_cast<unsigned>(rd.number(l, l.words[1], "depth: <d>", 1024));
      return true;
    }
    return false;
  }

  TypeSpace finish(const text::Reader& rd, std::size_t line) const {
    if (!family) throw ParseError(rd.source(), line, "a family: line");
    if (!depth) throw ParseError(rd.source(), line, "a depth: line");
    if (*family == Family::Colored && !m) throw ParseError(rd.source(), line, "an m: line for colored");
    if (*family != Family::Colored && m) throw ParseError(rd.source(), line, "m: only for colored");
    TypeSpace ts{*family, m.value_or(0), *depth};
    try {
      check_space(ts);
    } catch (const Error& e) {
      throw ParseError(rd.source(), line, std::string("a type space within limits (") + e.what() + ")");
    }
    return ts;
  }
};

}  // namespace detail

inline TypeSpace parse_type_space(const std::string& content,
                                  const std::string& source = "<types>") {
  text::Reader rd(source);
  detail::SpaceBuilder b;
  std::size_t last = 1;
  for (const auto& l : text::lines_of(content)) {
    if (!b.take(rd, l)) rd.fail(l, "family:, m: or depth:");
    last = l.number;
  }
  return b.finish(rd, last);
}

inline std::string model_spec_to_text(const ModelSpec& spec) {
  ModelSpec m = spec;
  m.normalize();
  std::string out = type_space_to_text(m.space);
  out += "cap: " + std::to_string(m.cap) + "\n";
  out += std::string("base: ") + (m.base == Base::All ? "all" : "none") + "\n";
  for (const auto& [id, c] : m.counts)
    out += c.is_zero() ? "- " + to_string(id) + "\n" : "+ " + to_string(id) + " " + to_string(c) + "\n";
  return out;
}

// "+ <cell>" without a count adds one realization to the baseline.
inline ModelSpec parse_model_spec(const std::string& content,
                                  const std::string& source = "<model>") {
  text::Reader rd(source);
  detail::SpaceBuilder sb;
  std::optional<Base> base;
  std::optional<unsigned> cap;
  std::vector<text::Line> edits;
  std::size_t last = 1;
  for (const auto& l : text::lines_of(content)) {
    last = l.number;
    if (sb.take(rd, l)) continue;
    if (text::is_key(l, "base:")) {
      rd.arity(l, 2, "base: all|none");
      if (l.words[1] != "all" && l.words[1] != "none") rd.fail(l, "base: all|none");
      base = l.words[1] == "all" ? Base::All : Base::None;
    } else if (text::is_key(l, "cap:")) {
      rd.arity(l, 2, "cap: <count>");
      cap = static_cast<unsigned>(rd.number(l, l.words[1], "cap: <count>", 1u << 20));
    } else if (l.words[0] == "+" || l.words[0] == "-") {
      edits.push_back(l);
    } else {
      rd.fail(l, "family:, m:, depth:, cap:, base:, + <cell> [count] or - <cell>");
    }
  }
  ModelSpec m;
  m.space = sb.finish(rd, last);
  if (!base) throw ParseError(source, last, "a base: line");
  m.base = *base;
  if (cap) m.cap = *cap;
  for (const auto& l : edits) {
    const bool plus = l.words[0] == "+";
    const std::string prod = plus ? "+ <cell> [count]" : "- <cell>";
    if (l.words.size() < 2 || l.words.size() > (plus ? 3u : 2u)) rd.fail(l, prod);
    auto id = try_parse_type_id(m.space.family, l.words[1]);
    if (!id || !valid_at(m.space, *id, m.space.depth))
      rd.fail(l, std::string("a ") + to_string(m.space.family) + " cell of depth " +
                     std::to_string(m.space.depth));
    if (m.counts.contains(*id)) rd.fail(l, "each cell edited once");
    Cardinal c = Cardinal::fin(0);
    if (plus) {
      c = l.words.size() == 3 ? rd.cardinal(l, l.words[2], prod)
                              : Cardinal::fin(m.baseline().value() + 1);
      if (!valid_count(c, m.cap)) rd.fail(l, "a count in 0.." + std::to_string(m.cap) + " or w");
    }
    m.counts[*id] = c;
  }
  m.normalize();
  return m;
}

// ---------------------------------------------------------------------------
// Domination graphs

namespace detail {

inline std::string node_line(const TypeNode& n) {
  std::string out = "type " + n.id;
  if (n.principal) out += " principal";
  if (n.prime && !n.principal) out += " prime";
  if (n.kind != NodeKind::Type) out += std::string(" kind=") + to_string(n.kind);
  if (!n.origin.empty()) out += " origin=" + n.origin;
  if (n.realized) out += " realized";
  if (n.linked) out += " linked";
  if (n.il) out += " il=" + to_string(*n.il);
  if (!n.realizes.empty()) out += " realizes=" + text::join(n.realizes, ",");
  return out + "\n";
}

inline std::string graph_lines(const DominationGraph& g) {
  std::string out;
  for (const auto& n : g.nodes()) out += node_line(n);
  for (const auto& e : g.edges())
    out += e.q + " dominates " + e.p + " via " + e.label + (e.principal ? " principal" : "") + "\n";
  for (const auto& n : g.nodes()) {
    if (!n.realizations) continue;
    out += "realizations " + n.id + " " + std::to_string(n.realizations->size()) + "\n";
    for (const auto& e : n.realizations->edges())
      out += "realization-edge " + n.id + " " + std::to_string(e.from) + " " + std::to_string(e.to) +
             (e.principal ? " principal" : "") + (e.semi_isolates ? " semi" : "") + "\n";
  }
  return out;
}

struct GraphBuilder {
  DominationGraph g;

  bool take(const text::Reader& rd, const text::Line& l) {
    const auto& k = l.words.front();
    try {
      if (k == "type" || k == "node") return node(rd, l), true;
      if (l.words.size() >= 5 && l.words[1] == "dominates" && l.words[3] == "via") {
        const std::string prod = "<q> dominates <p> via <label> [principal]";
        if (l.words.size() > 6 || (l.words.size() == 6 && l.words[5] != "principal")) rd.fail(l, prod);
        g.add_edge(l.words[0], l.words[2], l.words[4], l.words.size() == 6);
        return true;
      }
      if (k == "edge") {
        const std::string prod = "edge <q> <p> <label> [principal]";
        if (l.words.size() < 4 || l.words.size() > 5) rd.fail(l, prod);
        if (l.words.size() == 5 && l.words[4] != "principal") rd.fail(l, prod);
        g.add_edge(l.words[1], l.words[2], l.words[3], l.words.size() == 5);
        return true;
      }
      if (k == "realizations") {
        rd.arity(l, 3, "realizations <id> <count>");
        auto& n = g.node(l.words[1]);
        if (n.realizations) rd.fail(l, "one realizations line per node");
        n.realizations = RealizationDigraph(rd.number(l, l.words[2], "realizations <id> <count>", 4096));
        return true;
      }
      if (k == "realization-edge") {
        const std::string prod = "realization-edge <id> <from> <to> [principal] [semi]";
        if (l.words.size() < 4 || l.words.size() > 6) rd.fail(l, prod);
        auto& n = g.node(l.words[1]);
        if (!n.realizations) rd.fail(l, "a realizations line before its edges");
        bool principal = false, semi = false;
        for (std::size_t i = 4; i < l.words.size(); ++i) {
          if (l.words[i] == "principal") principal = true;
          else if (l.words[i] == "semi") semi = true;
          else rd.fail(l, prod);
        }
        n.realizations->add(rd.number(l, l.words[2], prod), rd.number(l, l.words[3], prod), principal, semi);
        return true;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      rd.fail(l, std::string("a consistent graph line (") + e.what() + ")");
    }
    return false;
  }

  void node(const text::Reader& rd, const text::Line& l) {
    const std::string prod = "type <id> [principal] [prime] [kind=stub|joint] [origin=<id>] "
                             "[realized] [linked] [il=<card>] [realizes=<ids>]";
    if (l.words.size() < 2) rd.fail(l, prod);
    TypeNode n;
    n.id = l.words[1];
    for (std::size_t i = 2; i < l.words.size(); ++i) {
      const auto& w = l.words[i];
      const auto eq = w.find('=');
      const std::string key = w.substr(0, eq), val = eq == std::string::npos ? "" : w.substr(eq + 1);
      if (w == "principal") n.principal = true;
      else if (w == "prime") n.prime = true;
      else if (w == "realized") n.realized = true;
      else if (w == "linked") n.linked = true;
      else if (key == "kind" && val == "stub") n.kind = NodeKind::Stub;
      else if (key == "kind" && val == "joint") n.kind = NodeKind::Joint;
      else if (key == "origin" && !val.empty()) n.origin = val;
      else if (key == "il" && try_parse_cardinal(val)) n.il = parse_cardinal(val);
      else if (key == "realizes" && !val.empty()) n.realizes = text::split(val, ',');
      else rd.fail(l, prod);
    }
    g.add_node(n);
  }
};

}  // namespace detail

inline std::string graph_to_text(const DominationGraph& g) { return detail::graph_lines(g); }

inline DominationGraph parse_graph(const std::string& content, const std::string& source = "<graph>") {
  text::Reader rd(source);
  detail::GraphBuilder b;
  for (const auto& l : text::lines_of(content))
    if (!b.take(rd, l)) rd.fail(l, "type, dominates, realizations or realization-edge line");
  return b.g;
}

// ---------------------------------------------------------------------------
// Identity systems and structure specs

namespace detail {

inline std::string word_token(const Word& w) {
  std::vector<std::string> parts;
  for (Letter l : w) parts.push_back(std::to_string(l));
  return text::join(parts, ".");
}

inline std::optional<Word> parse_word_token(const std::string& s) {
  Word w;
  for (const auto& p : text::split(s, '.')) {
    if (p.empty() || p.size() > 9 || p.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    w.push_back(static_cast<Letter>(std::stoul(p)));
  }
  return w;
}

inline std::optional<SchemaKind> parse_schema_kind(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(SchemaKind::PlateauRun); ++k)
    if (s == to_string(static_cast<SchemaKind>(k))) return static_cast<SchemaKind>(k);
  return std::nullopt;
}

}  // namespace detail

// One line: system nodes=<ids> origin=<o> target=<card> q_len=<n>
// [schemas=<kind>/<n>/<reading>,...] [extra=<word>/<word>,...]
inline std::string system_to_line(const AttachedSystem& a) {
  const auto& s = a.system;
  std::string out = "system nodes=" + text::join(a.nodes, ",") + " origin=" + to_string(s.origin) +
                    " target=" + to_string(s.target) + " q_len=" + std::to_string(s.q_len);
  std::vector<std::string> sc, ex;
  for (const auto& x : s.schemas)
    sc.push_back(std::string(to_string(x.kind)) + "/" + std::to_string(x.n) + "/" + to_string(x.reading));
  for (const auto& e : s.extra) ex.push_back(detail::word_token(e.lhs) + "/" + detail::word_token(e.rhs));
  if (!sc.empty()) out += " schemas=" + text::join(sc, ",");
  if (!ex.empty()) out += " extra=" + text::join(ex, ",");
  return out;
}

inline AttachedSystem parse_system_line(const text::Reader& rd, const text::Line& l) {
  const std::string prod =
      "system nodes=<ids> origin=<lmt|lms|free|custom> target=<card> q_len=<n> [schemas=...] [extra=...]";
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < l.words.size(); ++i) {
    const auto eq = l.words[i].find('=');
    if (eq == std::string::npos || !kv.emplace(l.words[i].substr(0, eq), l.words[i].substr(eq + 1)).second)
      rd.fail(l, prod);
  }
  for (const char* k : {"nodes", "origin", "target", "q_len"})
    if (!kv.contains(k)) rd.fail(l, prod);
  AttachedSystem a;
  a.nodes = text::split(kv["nodes"], ',');
  bool found = false;
  for (SystemOrigin o : {SystemOrigin::Lmt, SystemOrigin::Lms, SystemOrigin::Free, SystemOrigin::Custom})
    if (kv["origin"] == to_string(o)) a.system.origin = o, found = true;
  if (!found) rd.fail(l, prod);
  a.system.target = rd.cardinal(l, kv["target"], prod);
  a.system.q_len = rd.number(l, kv["q_len"], prod);
  if (kv.contains("schemas"))
    for (const auto& item : text::split(kv["schemas"], ',')) {
      const auto parts = text::split(item, '/');
      if (parts.size() != 3) rd.fail(l, "schema <kind>/<n>/<reading>");
      auto kind = detail::parse_schema_kind(parts[0]);
      if (!kind || (parts[2] != "strict" && parts[2] != "literal")) rd.fail(l, "schema <kind>/<n>/<reading>");
      a.system.schemas.push_back({*kind, rd.number(l, parts[1], "schema count"),
                                  parts[2] == "strict" ? PlateauReading::Strict : PlateauReading::Literal});
    }
  if (kv.contains("extra"))
    for (const auto& item : text::split(kv["extra"], ',')) {
      const auto parts = text::split(item, '/');
      if (parts.size() != 2) rd.fail(l, "equation <word>/<word>");
      auto lhs = detail::parse_word_token(parts[0]), rhs = detail::parse_word_token(parts[1]);
      if (!lhs || !rhs) rd.fail(l, "equation <word>/<word>");
      a.system.extra.push_back({*lhs, *rhs});
    }
  return a;
}

inline std::string struct_spec_to_text(const StructSpec& s) {
  std::string out = "universe: " + std::to_string(s.universe) + "\n";
  out += "colors:";
  for (const auto& [e, c] : s.coloring) out += " " + std::to_string(e) + ":" + to_string(c);
  out += "\n";
  for (const auto& [name, ext] : s.unary) {
    out += "unary " + name + ":";
    for (Elem e : ext) out += " " + std::to_string(e);
    out += "\n";
  }
  for (const auto& [name, rel] : s.binary) {
    out += "binary " + name + ":";
    for (auto [a, b] : rel) out += " " + std::to_string(a) + "," + std::to_string(b);
    out += "\n";
  }
  for (const auto& [name, rel] : s.ternary) {
    out += "ternary " + name + ":";
    for (const auto& t : rel)
      out += " " + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]);
    out += "\n";
  }
  out += graph_to_text(s.registry);
  for (const auto& op : s.log) {
    out += "log " + op.tag + " " + std::to_string(op.index);
    for (const auto& [k, v] : op.args) out += " " + k + "=" + v;
    out += "\n";
  }
  for (const auto& a : s.systems) out += system_to_line(a) + "\n";
  return out;
}

inline StructSpec parse_struct_spec(const std::string& content,
                                    const std::string& source = "<structure>") {
  text::Reader rd(source);
  StructSpec s;
  detail::GraphBuilder gb;
  bool have_universe = false;
  for (const auto& l : text::lines_of(content)) {
    const auto& k = l.words.front();
    auto elem = [&](const std::string& w, const std::string& prod) {
      const auto v = rd.number(l, w, prod);
      if (!have_universe || v >= s.universe) rd.fail(l, "elements below the universe size");
      return static_cast<Elem>(v);
    };
    if (l.words.size() >= 5 && l.words[1] == "dominates" && l.words[3] == "via") {
      gb.take(rd, l);
    } else if (k == "universe:") {
      rd.arity(l, 2, "universe: <n>");
      s.universe = rd.number(l, l.words[1], "universe: <n>");
      have_universe = true;
    } else if (k == "colors:") {
      for (std::size_t i = 1; i < l.words.size(); ++i) {
        const auto parts = text::split(l.words[i], ':');
        const std::string prod = "colors: <elem>:<color> ...";
        if (parts.size() != 2) rd.fail(l, prod);
        auto c = try_parse_color(parts[1]);
        if (!c) rd.fail(l, prod);
        s.coloring[elem(parts[0], prod)] = *c;
      }
    } else if ((k == "unary" || k == "binary" || k == "ternary") && l.words.size() >= 2) {
      const std::string prod = k + " <name>: <tuples>";
      std::string name = l.words[1];
      if (name.size() < 2 || name.back() != ':') rd.fail(l, prod);
      name.pop_back();
      const std::size_t arity = k == "unary" ? 1 : k == "binary" ? 2 : 3;
      std::vector<std::vector<Elem>> tuples;
      for (std::size_t i = 2; i < l.words.size(); ++i) {
        const auto parts = text::split(l.words[i], ',');
        if (parts.size() != arity) rd.fail(l, prod);
        std::vector<Elem> t;
        for (const auto& p : parts) t.push_back(elem(p, prod));
        tuples.push_back(t);
      }
      if (s.unary.contains(name) || s.binary.contains(name) || s.ternary.contains(name))
        rd.fail(l, "each relation once");
      if (arity == 1) {
        auto& ext = s.unary[name];
        for (const auto& t : tuples) ext.push_back(t[0]);
        if (!std::is_sorted(ext.begin(), ext.end()) ||
            std::adjacent_find(ext.begin(), ext.end()) != ext.end())
          rd.fail(l, "a strictly increasing extent");
      } else if (arity == 2) {
        auto& rel = s.binary[name];
        for (const auto& t : tuples) rel.insert({t[0], t[1]});
      } else {
        auto& rel = s.ternary[name];
        for (const auto& t : tuples) rel.insert({t[0], t[1], t[2]});
      }
    } else if (k == "log") {
      const std::string prod = "log <tag> <index> key=value...";
      if (l.words.size() < 3) rd.fail(l, prod);
      AppliedOp op;
      op.tag = l.words[1];
      op.index = rd.number(l, l.words[2], prod);
      for (std::size_t i = 3; i < l.words.size(); ++i) {
        const auto eq = l.words[i].find('=');
        if (eq == std::string::npos || eq == 0) rd.fail(l, prod);
        op.args[l.words[i].substr(0, eq)] = l.words[i].substr(eq + 1);
      }
      s.log.push_back(op);
    } else if (k == "system") {
      s.systems.push_back(parse_system_line(rd, l));
    } else if (!gb.take(rd, l)) {
      rd.fail(l, "universe:, colors:, unary, binary, ternary, type, dominates, log or system");
    }
  }
  s.registry = gb.g;
  return s;
}

// ---------------------------------------------------------------------------
// Distribution specs

inline std::string distribution_to_text(const DistributionSpec& s) {
  std::string out = preorder_to_text(s.x);
  out += std::string("mode: ") + to_string(s.mode) + "\n";
  out += std::string("class: ") + to_string(s.cls) + "\n";
  if (s.growth.kind != GrowthKind::None) {
    out += std::string("growth: ") + to_string(s.growth.kind);
    if (s.growth.kind == GrowthKind::ChainAbove) out += " " + std::to_string(s.growth.anchor);
    out += "\n";
  }
  if (s.partition) {
    out += "partition:";
    for (Label l : *s.partition) out += l == Label::P ? " P" : " NPL";
    out += "\n";
  }
  for (const auto& [k, v] : s.class_f) out += "f: class " + std::to_string(k) + " = " + to_string(v) + "\n";
  for (const auto& [y, v] : s.seq_f) {
    out += "f: seq";
    for (auto e : y.prefix) out += " " + std::to_string(e);
    out += " |";
    if (y.generated) out += " gen";
    for (auto e : y.cycle) out += " " + std::to_string(e);
    out += " = " + to_string(v) + "\n";
  }
  return out;
}

inline DistributionSpec parse_distribution(const std::string& content,
                                           const std::string& source = "<distribution>") {
  text::Reader rd(source);
  detail::PreorderBuilder pb;
  DistributionSpec s;
  std::vector<std::pair<text::Line, std::pair<std::size_t, Cardinal>>> class_lines;
  std::size_t last = 1;
  for (const auto& l : text::lines_of(content)) {
    last = l.number;
    if (pb.take(rd, l)) continue;
    const auto& k = l.words.front();
    if (k == "mode:") {
      rd.arity(l, 2, "mode: finite|countable");
      if (l.words[1] != "finite" && l.words[1] != "countable") rd.fail(l, "mode: finite|countable");
      s.mode = l.words[1] == "finite" ? SpecMode::Finite : SpecMode::Countable;
    } else if (k == "class:") {
      rd.arity(l, 2, "class: small|tc");
      if (l.words[1] != "small" && l.words[1] != "tc") rd.fail(l, "class: small|tc");
      s.cls = l.words[1] == "small" ? TheoryClass::Small : TheoryClass::Tc;
    } else if (k == "growth:") {
      const std::string prod = "growth: none|chain-above <e>|antichain|continual-antichain";
      if (l.words.size() < 2) rd.fail(l, prod);
      bool ok = false;
      for (GrowthKind g : {GrowthKind::None, GrowthKind::ChainAbove, GrowthKind::Antichain,
                           GrowthKind::ContinualAntichain})
        if (l.words[1] == to_string(g)) s.growth.kind = g, ok = true;
      if (!ok) rd.fail(l, prod);
      rd.arity(l, s.growth.kind == GrowthKind::ChainAbove ? 3 : 2, prod);
      if (s.growth.kind == GrowthKind::ChainAbove) s.growth.anchor = rd.number(l, l.words[2], prod);
    } else if (k == "partition:") {
      std::vector<Label> labels;
      for (std::size_t i = 1; i < l.words.size(); ++i) {
        if (l.words[i] != "P" && l.words[i] != "NPL") rd.fail(l, "partition: P|NPL ...");
        labels.push_back(l.words[i] == "P" ? Label::P : Label::NPL);
      }
      s.partition = labels;
    } else if (k == "f:") {
      const std::string prod = "f: class <e> = <card> or f: seq <prefix> | <cycle>|gen = <card>";
      if (l.words.size() < 5 || l.words[l.words.size() - 2] != "=") rd.fail(l, prod);
      const Cardinal v = rd.cardinal(l, l.words.back(), prod);
      if (l.words[1] == "class") {
        rd.arity(l, 5, prod);
        class_lines.push_back({l, {rd.number(l, l.words[2], prod), v}});
      } else if (l.words[1] == "seq") {
        FSequence y;
        std::size_t i = 2;
        for (; i < l.words.size() - 2 && l.words[i] != "|"; ++i) y.prefix.push_back(rd.number(l, l.words[i], prod));
        if (i >= l.words.size() - 2) rd.fail(l, prod);
        for (++i; i < l.words.size() - 2; ++i) {
          if (l.words[i] == "gen") y.generated = true;
          else y.cycle.push_back(rd.number(l, l.words[i], prod));
        }
        s.seq_f.push_back({y, v});
      } else {
        rd.fail(l, prod);
      }
    } else {
      rd.fail(l, "preorder lines, mode:, class:, growth:, partition: or f:");
    }
  }
  s.x = pb.finish(rd);
  for (const auto& [l, kv] : class_lines) {
    if (kv.first >= s.size()) rd.fail(l, "an element of X");
    const auto key = class_key(s.x, kv.first);
    if (s.class_f.contains(key)) rd.fail(l, "one f value per class");
    if (kv.second.is_zero()) continue;
    s.class_f[key] = kv.second;
  }
  try {
    check_well_formed(s);
  } catch (const Error& e) {
    throw ParseError(source, last, std::string("a well-formed spec (") + e.what() + ")");
  }
  return s;
}

inline std::string blueprint_to_text(const TheoryBlueprint& b) {
  std::string out = std::string("# variant ") + to_string(b.variant) + "\n";
  out += "# predicted triple " + to_string(b.predicted) + "\n";
  return out + to_text(b.plan);
}

}  // namespace rkbench
