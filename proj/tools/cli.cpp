#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rkbench/rkbench.hpp"

namespace rkbench::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

void emit(const Report& r, bool machine, std::ostream& out) {
  out << (machine ? r.to_machine() : r.to_text());
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::string join_ids(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// --- preorder --------------------------------------------------------------

struct PreorderArgs {
  std::string in, premodel;
  bool quotient = false, height = false, width = false, directed = false, dot = false;
  bool machine = false;
};

int cmd_preorder(const PreorderArgs& a, std::ostream& out) {
  if (!a.premodel.empty()) {
    const auto prof = parse_premodel(read_file(a.premodel), a.premodel);
    emit(check_premodel(prof), a.machine, out);
    if (a.in.empty()) return kExitOk;
  }
  if (a.in.empty()) throw Error("preorder: --in is required unless --premodel is given");
  const Preorder p = parse_preorder(read_file(a.in), a.in);
  const auto q = sim_quotient(p);
  if (a.dot) {
    out << to_dot(q);
    return kExitOk;
  }
  const bool all = !a.quotient && !a.height && !a.width && !a.directed;
  Report r;
  r.title = "preorder " + a.in;
  r.fact("elements", std::to_string(p.size()));
  if (all || a.quotient) {
    r.fact("classes", std::to_string(q.size()));
    for (std::size_t c = 0; c < q.size(); ++c) r.fact("class." + std::to_string(c), join_ids(q.classes[c]));
    std::string covers;
    for (auto [c, d] : q.covers()) covers += (covers.empty() ? "" : " ") + std::to_string(c) + "<" + std::to_string(d);
    r.fact("covers", covers.empty() ? "none" : covers);
  }
  if (all || a.height) r.fact("height", std::to_string(height(p)));
  if (all || a.width) {
    if (q.size() <= kWidthClassLimit) r.fact("width", std::to_string(width(p)));
    else r.fact("width", "unavailable (more than " + std::to_string(kWidthClassLimit) + " classes)");
  }
  if (all || a.directed) r.fact("directed", is_upward_directed(p) ? "yes" : "no");
  emit(r, a.machine, out);
  return kExitOk;
}

// --- types -----------------------------------------------------------------

struct TypesArgs {
  std::string space, family, model, classify, perturb;
  unsigned m = 0, depth = 0;
  bool depth_given = false, enumerate = false, machine = false;
};

int cmd_types(const TypesArgs& a, std::ostream& out) {
  std::optional<ModelSpec> model;
  TypeSpace ts;
  if (!a.model.empty()) {
    model = parse_model_spec(read_file(a.model), a.model);
    ts = model->space;
  } else if (!a.space.empty()) {
    ts = parse_type_space(read_file(a.space), a.space);
  } else {
    if (a.family.empty() || !a.depth_given)
      throw Error("types: give --space, --model, or --family with --depth");
    std::optional<Family> f;
    for (Family x : {Family::Iup, Family::Sdup, Family::Colored})
      if (a.family == to_string(x)) f = x;
    if (!f) throw Error("types: --family must be iup, sdup or colored");
    ts = TypeSpace{*f, a.m, a.depth};
    check_space(ts);
  }
  Report r;
  r.title = std::string("type space ") + to_string(ts.family) + " depth " + std::to_string(ts.depth);
  const auto cells = enumerate_types(ts);
  std::size_t principal = 0;
  for (const auto& c : cells) principal += c.principal;
  r.fact("cells", std::to_string(cells.size()));
  r.fact("isolated", std::to_string(principal));
  r.fact("has-prime-model", has_prime_model(ts) ? "yes" : "no");
  if (a.enumerate)
    for (const auto& c : cells)
      r.fact("cell." + to_string(c.id), c.principal ? "isolated" : "non-isolated");
  if (!a.classify.empty()) {
    auto f = try_parse_formula(a.classify);
    if (!f) throw Error("types: cannot parse formula '" + a.classify + "'");
    if (!is_consistent(ts, *f)) {
      r.fact("formula", "inconsistent");
    } else {
      r.fact("formula", to_string(classify_formula(ts, *f)));
    }
  }
  if (model) {
    validate(*model);
    r.check("dense", is_dense(*model), "support refines every depth cell");
    r.fact("support", std::to_string(support(*model).size()));
    if (!a.perturb.empty()) {
      if (a.perturb != "up" && a.perturb != "down") throw Error("types: --perturb takes up or down");
      const ModelSpec next = perturb(*model, a.perturb == "up" ? Direction::Up : Direction::Down);
      r.check("strict-neighbour",
              a.perturb == "up" ? cm_dominates(*model, next) && !cm_dominates(next, *model)
                                : cm_dominates(next, *model) && !cm_dominates(*model, next),
              "perturbed model is strictly " + std::string(a.perturb == "up" ? "above" : "below"));
      if (!a.machine) out << model_spec_to_text(next);
    }
  }
  emit(r, a.machine, out);
  return kExitOk;
}

// --- dominate ----------------------------------------------------------------

struct DominateArgs {
  std::string graph, strong, limit, sequence, witnesses;
  bool dot = false, machine = false;
};

int cmd_dominate(const DominateArgs& a, std::ostream& out) {
  const DominationGraph g = parse_graph(read_file(a.graph), a.graph);
  const RkStructure rk = rk_structure(g);
  if (a.dot) {
    out << to_dot(rk.quotient, "rk");
    return kExitOk;
  }
  Report r;
  r.title = "domination " + a.graph;
  r.fact("nodes", std::to_string(g.size()));
  r.fact("prime-nodes", std::to_string(rk.nodes.size()));
  r.fact("iso-types", std::to_string(rk.iso_types.size()));
  for (std::size_t t = 0; t < rk.iso_types.size(); ++t) {
    std::string ids;
    for (const auto& id : rk.iso_types[t]) ids += (ids.empty() ? "" : ",") + id;
    r.fact("iso." + std::to_string(t), ids);
  }
  r.fact("classes", std::to_string(rk.quotient.size()));
  for (std::size_t c = 0; c < rk.quotient.size(); ++c)
    r.fact("class." + std::to_string(c), join_ids(rk.quotient.classes[c]));
  std::string covers;
  for (auto [c, d] : rk.quotient.covers())
    covers += (covers.empty() ? "" : " ") + std::to_string(c) + "<" + std::to_string(d);
  r.fact("covers", covers.empty() ? "none" : covers);
  if (!a.strong.empty()) {
    const auto ids = split_commas(a.strong);
    if (ids.size() != 2) throw Error("dominate: --strong takes two ids a,b");
    r.fact("strong-equiv", strong_equiv(g, ids[0], ids[1]) ? "yes" : "no");
  }
  if (!a.limit.empty()) {
    const auto& n = g.node(a.limit);
    if (!n.realizations) throw Error("dominate: node '" + a.limit + "' has no realizations listed");
    if (!n.prime) {
      r.fact("limit-exists", "undefined (no prime model over the type)");
    } else {
      r.fact("limit-exists", limit_exists_over(*n.realizations, true) ? "yes" : "no");
    }
  }
  if (!a.sequence.empty()) {
    RkSequence q{split_commas(a.sequence), split_commas(a.witnesses)};
    r.merge(check_sequence(q, g));
  }
  emit(r, a.machine, out);
  return kExitOk;
}

// --- apply -------------------------------------------------------------------

struct ApplyArgs {
  std::string pipeline, structure, out_path, tag;
  unsigned fanout = kDefaultFanout;
  std::uint64_t seed = 0;
  bool emit = false, machine = false;
};

int cmd_apply(const ApplyArgs& a, std::ostream& out) {
  StructSpec s;
  if (!a.structure.empty()) s = parse_struct_spec(read_file(a.structure), a.structure);
  if (!a.pipeline.empty()) {
    const Pipeline p = parse_pipeline(read_file(a.pipeline), a.pipeline);
    s = run_pipeline(p, OperatorConfig{a.fanout, a.seed}, std::move(s));
  } else if (a.structure.empty()) {
    throw Error("apply: give --pipeline, --structure or both");
  }
  Report r = a.tag.empty() ? verify_all(s) : verify_schemes(s, a.tag);
  r.title = "apply";
  r.fact("universe", std::to_string(s.universe));
  r.fact("operations", std::to_string(s.log.size()));
  r.fact("registry-nodes", std::to_string(s.registry.size()));
  if (!a.out_path.empty()) write_file(a.out_path, struct_spec_to_text(s));
  if (a.emit) out << struct_spec_to_text(s);
  emit(r, a.machine, out);
  return kExitOk;
}

// --- limits ------------------------------------------------------------------

struct LimitsArgs {
  std::string system = "lmt", n = "1", reading = "strict", normal;
  std::size_t q_len = 1, len = 4;
  unsigned alphabet = 3;
  std::uint64_t budget = kDefaultWordBudget;
  bool reps = false, machine = false;
};

int cmd_limits(const LimitsArgs& a, std::ostream& out) {
  const Cardinal lambda = parse_cardinal(a.n);
  PlateauReading reading = PlateauReading::Strict;
  if (a.reading == "literal") reading = PlateauReading::Literal;
  else if (a.reading != "strict") throw Error("limits: --reading takes strict or literal");
  IdentitySystem sys;
  if (a.system == "lmt") sys = lmt_system(lambda);
  else if (a.system == "lms") sys = lms_system(a.q_len, lambda, reading);
  else if (a.system == "free") sys = free_system(lambda);
  else throw Error("limits: --system takes lmt, lms or free");
  if (a.alphabet == 0) throw Error("limits: --alphabet must be positive");
  const auto cc = count_classes(sys, a.alphabet, a.len, a.budget);
  Report r;
  r.title = "limits " + a.system + " n=" + a.n;
  r.fact("alphabet", std::to_string(a.alphabet));
  r.fact("length", std::to_string(a.len));
  r.fact("equations", std::to_string(instantiate(sys, a.alphabet, a.len).size()));
  r.fact("classes", std::to_string(cc.count));
  r.fact("bound", "rewrites through words longer than " + std::to_string(a.len) + " are not followed");
  try {
    const auto next = count_classes(sys, a.alphabet, a.len + 1, a.budget);
    r.fact("classes-next", std::to_string(next.count));
    r.fact("stable", next.count == cc.count ? "yes" : "no");
  } catch (const Error&) {
    r.fact("classes-next", "unavailable (budget)");
  }
  r.fact("target", to_string(sys.target));
  if (a.system == "lms") r.fact("reading", a.reading);
  if (a.reps)
    for (std::size_t i = 0; i < cc.representatives.size(); ++i)
      r.fact("rep." + std::to_string(i), to_string(cc.representatives[i]));
  if (!a.normal.empty()) {
    auto w = try_parse_word(a.normal);
    if (!w) throw Error("limits: cannot parse word '" + a.normal + "'");
    r.fact("normal-form", to_string(normal_form(sys, *w, a.len, a.alphabet)));
  }
  emit(r, a.machine, out);
  return kExitOk;
}

// --- classify ----------------------------------------------------------------

struct ClassifyArgs {
  std::string triple;
  bool tc = false, small = false, no_ch = false, machine = false;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  auto t = try_parse_triple(a.triple);
  if (!t) throw Error("classify: --triple takes p,l,npl with cardinal tokens (digits, w, w1, c)");
  if (a.tc && a.small) throw Error("classify: --tc and --small are exclusive");
  const TheoryClass cls = a.small ? TheoryClass::Small : TheoryClass::Tc;
  const Verdict v = classify_triple(*t, cls, !a.no_ch);
  if (a.machine) {
    out << "triple=" << to_string(*t) << "\n";
    out << "class=" << to_string(cls) << "\n";
    out << "admissible=" << (v.admissible() ? 1 : 0) << "\n";
    if (v.kind == VerdictKind::AdmissibleTc) out << "family=" << v.which << "\n";
    if (v.kind == VerdictKind::AdmissibleSmall) out << "case=" << v.which << "\n";
    if (!v.admissible()) out << "reason=" << to_string(v.reason) << "\n";
    out << "realization_unknown=" << v.realization_unknown << "\n";
    out << "outside_ch=" << v.outside_ch << "\n";
    out << "verdict=" << to_string(v) << "\n";
  } else {
    out << "(" << to_string(*t) << ") " << to_string(cls) << ": " << to_string(v) << "\n";
  }
  return kExitOk;
}

// --- build -------------------------------------------------------------------

struct BuildArgs {
  std::string spec, variant, corollary, params, out_path;
  unsigned fanout = 1;
  std::uint64_t seed = 0;
  bool replay = false, validate_only = false, machine = false;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  DistributionSpec spec;
  std::optional<Variant> variant;
  Report r;
  if (!a.corollary.empty()) {
    auto k = try_parse_corollary(a.corollary);
    if (!k) throw Error("build: --corollary takes c78, c85 or c93");
    std::vector<Cardinal> ps;
    for (const auto& tok : split_commas(a.params)) ps.push_back(parse_cardinal(tok));
    const auto cs = realize_corollary(*k, ps);
    spec = cs.spec;
    variant = cs.variant;
    r.fact("target", to_string(cs.target));
    r.fact("target-verdict", to_string(classify_triple(cs.target, TheoryClass::Tc)));
  } else if (!a.spec.empty()) {
    spec = parse_distribution(read_file(a.spec), a.spec);
  } else {
    throw Error("build: give --spec or --corollary");
  }
  if (!a.variant.empty()) {
    variant = try_parse_variant(a.variant);
    if (!variant) throw Error("build: --variant takes t77, t84, t91 or t92");
  }
  r.merge(validate_f(spec));
  r.title = "build";
  if (a.validate_only || !r.passed()) {
    emit(r, a.machine, out);
    return kExitOk;
  }
  if (!variant) variant = spec.mode == SpecMode::Finite ? Variant::T77 : Variant::T84;
  const TheoryBlueprint b = build_blueprint(spec, *variant);
  r.fact("variant", to_string(b.variant));
  r.fact("predicted", to_string(b.predicted));
  r.fact("predicted-verdict", to_string(classify_triple(b.predicted, TheoryClass::Tc)));
  r.fact("operations", std::to_string(b.plan.ops.size()));
  if (a.replay) {
    const StructSpec built = replay(b, OperatorConfig{a.fanout, a.seed});
    r.merge(check_roundtrip(spec, b, built));
  }
  if (!a.out_path.empty()) write_file(a.out_path, blueprint_to_text(b));
  else if (!a.machine) out << blueprint_to_text(b);
  emit(r, a.machine, out);
  return kExitOk;
}

// --- decompose ---------------------------------------------------------------

struct DecomposeArgs {
  std::string rk, il, npl = "0";
  bool tc = false, no_ch = false, machine = false;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  std::vector<Cardinal> il;
  for (const auto& tok : split_commas(a.il)) il.push_back(parse_cardinal(tok));
  const auto d = decompose(parse_cardinal(a.rk), il, parse_cardinal(a.npl), a.tc, !a.no_ch);
  Report r;
  r.title = "decompose";
  r.fact("total", to_string(d.total));
  if (d.tc_checked) r.check("tc-continuum", d.tc_ok, "a tc theory has continuum many countable models");
  emit(r, a.machine, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rkbench: Rudin-Keisler preorders, operators and model distributions at desk scale",
               "rkbench"};
  app.require_subcommand(1);

  PreorderArgs pa;
  auto* sp = app.add_subcommand("preorder", "Quotient, height, width and premodel checks");
  sp->add_option("--in", pa.in, "preorder file");
  sp->add_option("--premodel", pa.premodel, "premodel profile file");
  sp->add_flag("--quotient", pa.quotient, "list ~-classes and covers");
  sp->add_flag("--height", pa.height, "longest chain of classes");
  sp->add_flag("--width", pa.width, "largest antichain of classes");
  sp->add_flag("--directed", pa.directed, "upward directedness");
  sp->add_flag("--dot", pa.dot, "DOT of the quotient");
  sp->add_flag("--machine", pa.machine, "key=value output");

  TypesArgs ta;
  auto* st = app.add_subcommand("types", "Type-space enumeration, formula classes and models");
  st->add_option("--space", ta.space, "type space file");
  st->add_option("--model", ta.model, "model spec file");
  st->add_option("--family", ta.family, "iup, sdup or colored");
  st->add_option("--m", ta.m, "colored: number of parts");
  auto* dopt = st->add_option("--depth", ta.depth, "depth");
  st->add_option("--classify", ta.classify, "literal conjunction, e.g. \"P0 & !P1\"");
  st->add_option("--perturb", ta.perturb, "up or down (needs --model)");
  st->add_flag("--enumerate", ta.enumerate, "list every cell");
  st->add_flag("--machine", ta.machine, "key=value output");

  DominateArgs da;
  auto* sd = app.add_subcommand("dominate", "RK structure of a domination graph");
  sd->add_option("--graph", da.graph, "graph file")->required();
  sd->add_option("--strong", da.strong, "a,b: strong RK-equivalence");
  sd->add_option("--limit", da.limit, "node: limit model over its realizations");
  sd->add_option("--sequence", da.sequence, "ids of an RK-sequence");
  sd->add_option("--witnesses", da.witnesses, "edge labels of the sequence");
  sd->add_flag("--dot", da.dot, "DOT of the RK quotient");
  sd->add_flag("--machine", da.machine, "key=value output");

  ApplyArgs aa;
  auto* sa = app.add_subcommand("apply", "Run an operator pipeline and verify its schemes");
  sa->add_option("--pipeline", aa.pipeline, "pipeline file");
  sa->add_option("--structure", aa.structure, "structure file to start from or verify");
  sa->add_option("--out", aa.out_path, "write the structure here");
  sa->add_option("--verify", aa.tag, "only this operator: icp, css, bd or bu");
  sa->add_option("--fanout", aa.fanout, "witnesses per part")->check(CLI::PositiveNumber);
  sa->add_option("--seed", aa.seed, "permutation seed");
  sa->add_flag("--emit", aa.emit, "print the structure");
  sa->add_flag("--machine", aa.machine, "key=value output");

  LimitsArgs la;
  auto* sl = app.add_subcommand("limits", "Count congruence classes of an identity system");
  sl->add_option("--system", la.system, "lmt, lms or free");
  sl->add_option("--n", la.n, "number of limit models (cardinal token)");
  sl->add_option("--q-len", la.q_len, "lms: sequence length");
  sl->add_option("--reading", la.reading, "lms plateau reading: strict or literal");
  sl->add_option("--alphabet", la.alphabet, "letters 0..A-1");
  sl->add_option("--len", la.len, "maximum word length");
  sl->add_option("--budget", la.budget, "maximum number of words");
  sl->add_option("--normal-form", la.normal, "print the normal form of this word");
  sl->add_flag("--representatives", la.reps, "list class representatives");
  sl->add_flag("--machine", la.machine, "key=value output");

  ClassifyArgs ca;
  auto* sc = app.add_subcommand("classify", "Admissibility of a distribution triple");
  sc->add_option("--triple", ca.triple, "p,l,npl")->required();
  sc->add_flag("--tc", ca.tc, "class T_c (default)");
  sc->add_flag("--small", ca.small, "small theories");
  sc->add_flag("--no-ch", ca.no_ch, "drop the continuum hypothesis");
  sc->add_flag("--machine", ca.machine, "key=value output");

  BuildArgs ba;
  auto* sb = app.add_subcommand("build", "Validate f and emit a theory blueprint");
  sb->add_option("--spec", ba.spec, "distribution spec file");
  sb->add_option("--variant", ba.variant, "t77, t84, t91 or t92");
  sb->add_option("--corollary", ba.corollary, "c78, c85 or c93");
  sb->add_option("--params", ba.params, "corollary parameters, comma separated");
  sb->add_option("--out", ba.out_path, "write the pipeline here");
  sb->add_option("--fanout", ba.fanout, "replay fan-out")->check(CLI::PositiveNumber);
  sb->add_option("--seed", ba.seed, "replay seed");
  sb->add_flag("--replay", ba.replay, "replay the plan and check the round trip");
  sb->add_flag("--validate", ba.validate_only, "only validate f");
  sb->add_flag("--machine", ba.machine, "key=value output");

  DecomposeArgs xa;
  auto* sx = app.add_subcommand("decompose", "Decomposition formula for I(T, w)");
  sx->add_option("--rk", xa.rk, "|RK(T)|")->required();
  sx->add_option("--il", xa.il, "IL values, comma separated");
  sx->add_option("--npl", xa.npl, "NPL(T)");
  sx->add_flag("--tc", xa.tc, "check the total is the continuum");
  sx->add_flag("--no-ch", xa.no_ch, "drop the continuum hypothesis");
  sx->add_flag("--machine", xa.machine, "key=value output");

  std::vector<std::string> argv_store{"rkbench"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rkbench: " << e.what() << "\n";
    return kExitInput;
  }
  ta.depth_given = dopt->count() > 0;

  try {
    if (sp->parsed()) return cmd_preorder(pa, out);
    if (st->parsed()) return cmd_types(ta, out);
    if (sd->parsed()) return cmd_dominate(da, out);
    if (sa->parsed()) return cmd_apply(aa, out);
    if (sl->parsed()) return cmd_limits(la, out);
    if (sc->parsed()) return cmd_classify(ca, out);
    if (sb->parsed()) return cmd_build(ba, out);
    if (sx->parsed()) return cmd_decompose(xa, out);
  } catch (const ParseError& e) {
    err << "rkbench: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "rkbench: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace rkbench::cli
