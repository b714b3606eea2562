#pragma once

// Operator pipelines: one invocation per line, `name key=value ... flag`.
//
//   pred name=P0 colors=0,inf
//   link lower=P0 upper=P1 [nonprincipal]
//   icp sub=P0 depth=1 [y=auto|<n>]
//   css sub=P1 q=P0.q0,P0.q1 [linked]
//   bd sub=P1 q=P0.q0
//   bu sub1=P0 sub2=P1 depth=1 [z=auto|<n>]
//   lmt p=P0 lambda=2
//   lms q=P0,P1 lambda=w [reading=strict|literal]
//   free p=P0 lambda=c          (or q=a,b)
//
// '#' starts a comment. Fan-out and seed come from the OperatorConfig.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rkbench/cardinal.hpp"
#include "rkbench/error.hpp"
#include "rkbench/operators.hpp"

namespace rkbench {

struct PipelineOp {
  std::string name;
  std::map<std::string, std::string> args;
  std::set<std::string> flags;
  std::size_t line = 0;  // 0 when built in code

  bool has(const std::string& k) const { return args.contains(k); }
  const std::string& arg(const std::string& k) const {
    auto it = args.find(k);
    if (it == args.end()) throw Error(name + ": missing argument '" + k + "'");
    return it->second;
  }

  friend bool operator==(const PipelineOp& a, const PipelineOp& b) {
    return a.name == b.name && a.args == b.args && a.flags == b.flags;
  }
};

struct Pipeline {
  std::vector<PipelineOp> ops;
  friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

namespace detail {

struct OpGrammar {
  const char* name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> flags;
};

inline const std::vector<OpGrammar>& op_grammar() {
  static const std::vector<OpGrammar> g = {
      {"pred", {"name", "colors"}, {}, {}},
      {"link", {"lower", "upper"}, {}, {"nonprincipal"}},
      {"icp", {"sub", "depth"}, {"y"}, {}},
      {"css", {"sub", "q"}, {}, {"linked"}},
      {"bd", {"sub", "q"}, {}, {}},
      {"bu", {"sub1", "sub2", "depth"}, {"z"}, {}},
      {"lmt", {"p", "lambda"}, {}, {}},
      {"lms", {"q", "lambda"}, {"reading"}, {}},
      {"free", {"lambda"}, {"p", "q"}, {}},
  };
  return g;
}

inline const OpGrammar* find_grammar(const std::string& name) {
  for (const auto& g : op_grammar())
    if (name == g.name) return &g;
  return nullptr;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (cur.empty()) throw Error("empty item in list '" + s + "'");
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

inline std::string join_list(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

inline std::uint64_t parse_count(const std::string& s, const char* what) {
  if (s.empty() || s.size() > 18 || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(std::string(what) + " must be a nonnegative integer, got '" + s + "'");
  return std::stoull(s);
}

inline std::optional<std::uint64_t> parse_auto(const std::string& s, const char* what) {
  if (s == "auto") return std::nullopt;
  return parse_count(s, what);
}

inline std::vector<Color> parse_colors(const std::string& s) {
  std::vector<Color> out;
  for (const auto& t : split_list(s)) {
    auto c = try_parse_color(t);
    if (!c) throw Error("bad color '" + t + "' (expected a number or inf)");
    out.push_back(*c);
  }
  return out;
}

inline PlateauReading parse_reading(const std::string& s) {
  if (s == "strict") return PlateauReading::Strict;
  if (s == "literal") return PlateauReading::Literal;
  throw Error("reading must be strict or literal, got '" + s + "'");
}

}  // namespace detail

// Checks an op against the grammar; throws Error naming the problem.
inline void check_op(const PipelineOp& op) {
  const auto* g = detail::find_grammar(op.name);
  if (!g) throw Error("unknown operator '" + op.name + "'");
  for (const auto& k : g->required)
    if (!op.has(k)) throw Error(op.name + ": missing argument '" + k + "'");
  for (const auto& [k, v] : op.args) {
    if (!detail::contains(g->required, k) && !detail::contains(g->optional, k))
      throw Error(op.name + ": unknown argument '" + k + "'");
    if (v.empty() || v.find_first_of(" \t#") != std::string::npos)
      throw Error(op.name + ": argument '" + k + "' needs a nonempty value");
  }
  for (const auto& f : op.flags)
    if (!detail::contains(g->flags, f)) throw Error(op.name + ": unknown flag '" + f + "'");
  if (op.name == "free" && op.has("p") == op.has("q"))
    throw Error("free: give exactly one of p= and q=");
}

inline std::string to_text(const PipelineOp& op) {
  std::string out = op.name;
  const auto* g = detail::find_grammar(op.name);
  std::vector<std::string> order;
  if (g) {
    order = g->required;
    order.insert(order.end(), g->optional.begin(), g->optional.end());
  }
  for (const auto& k : order)
    if (op.has(k)) out += " " + k + "=" + op.arg(k);
  for (const auto& [k, v] : op.args)
    if (!detail::contains(order, k)) out += " " + k + "=" + v;
  for (const auto& f : op.flags) out += " " + f;
  return out;
}

inline std::string to_text(const Pipeline& p) {
  std::string out;
  for (const auto& op : p.ops) out += to_text(op) + "\n";
  return out;
}

inline Pipeline parse_pipeline(const std::string& text, const std::string& source = "<pipeline>") {
  Pipeline p;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::istringstream words(raw.substr(0, hash));
    PipelineOp op;
    op.line = lineno;
    if (!(words >> op.name)) continue;
    std::string w;
    while (words >> w) {
      const auto eq = w.find('=');
      if (eq == std::string::npos) {
        op.flags.insert(w);
      } else {
        if (eq == 0) throw ParseError(source, lineno, "key=value", w);
        if (!op.args.emplace(w.substr(0, eq), w.substr(eq + 1)).second)
          throw ParseError(source, lineno, "each argument once", w);
      }
    }
    try {
      check_op(op);
    } catch (const Error& e) {
      throw ParseError(source, lineno, "operator invocation (" + std::string(e.what()) + ")",
                       raw);
    }
    p.ops.push_back(std::move(op));
  }
  return p;
}

inline StructSpec apply_op(StructSpec s, const PipelineOp& op, const OperatorConfig& cfg = {}) {
  using namespace detail;
  check_op(op);
  const auto lambda = [&] { return parse_cardinal(op.arg("lambda")); };
  const auto depth = [&] {
    return static_cast<unsigned>(parse_count(op.arg("depth"), "depth"));
  };
  if (op.name == "pred") return add_predicate(std::move(s), op.arg("name"), parse_colors(op.arg("colors")));
  if (op.name == "link")
    return add_link(std::move(s), op.arg("lower"), op.arg("upper"), !op.flags.contains("nonprincipal"));
  if (op.name == "icp")
    return icp(std::move(s), op.arg("sub"), op.has("y") ? parse_auto(op.arg("y"), "y") : std::nullopt,
               depth(), cfg);
  if (op.name == "css")
    return css(std::move(s), split_list(op.arg("q")), op.arg("sub"), op.flags.contains("linked"), cfg);
  if (op.name == "bd") return bd(std::move(s), split_list(op.arg("q")), op.arg("sub"), cfg);
  if (op.name == "bu")
    return bu(std::move(s), op.arg("sub1"), op.arg("sub2"),
              op.has("z") ? parse_auto(op.arg("z"), "z") : std::nullopt, depth(), cfg);
  if (op.name == "lmt") return apply_lmt(std::move(s), op.arg("p"), lambda());
  if (op.name == "lms")
    return apply_lms(std::move(s), split_list(op.arg("q")), lambda(),
                     op.has("reading") ? parse_reading(op.arg("reading")) : PlateauReading::Strict);
  // free
  if (op.has("p")) return apply_free(std::move(s), op.arg("p"), lambda());
  const auto q = split_list(op.arg("q"));
  for (const auto& id : q) s.registry.index_of(id);
  s.systems.push_back({q, free_system(lambda())});
  auto& entry = detail::log_op(s, "free");
  entry.args = {{"q", op.arg("q")}, {"lambda", op.arg("lambda")}};
  return s;
}

// Runs every op in order. Errors carry the op's line when it has one.
inline StructSpec run_pipeline(const Pipeline& p, const OperatorConfig& cfg = {},
                               StructSpec start = {}) {
  for (const auto& op : p.ops) {
    try {
      start = apply_op(std::move(start), op, cfg);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (op.line == 0) throw;
      throw Error("line " + std::to_string(op.line) + " (" + op.name + "): " + e.what());
    }
  }
  return start;
}

}  // namespace rkbench
