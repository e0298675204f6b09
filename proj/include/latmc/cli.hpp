#pragma once

// The `latmc` command line. run_command is the whole program; main() only
// forwards argv. Exit codes: 0 success, 1 property violation, 2 usage or
// validation error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latmc/corpus.hpp"
#include "latmc/ctl_eval.hpp"
#include "latmc/fml_eval.hpp"
#include "latmc/oracle.hpp"
#include "latmc/suites.hpp"
#include "latmc/transfer.hpp"

namespace latmc::cli {

using nlohmann::json;

struct Options {
  std::uint64_t seed = 1;
  std::size_t max_iters = 0;
  std::size_t materialize_bound = 4096;

  IterationLimits limits() const {
    IterationLimits l;
    if (max_iters) l.max_iters = max_iters;
    l.materialize_bound = materialize_bound;
    return l;
  }
};

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadDocument, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadDocument, "'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Inline JSON text or a path to a JSON file.
inline json json_arg(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::BadDocument, std::string("inline JSON: ") + e.what());
    }
  }
  return read_json(text);
}

inline ModelPtr load_model_file(const std::string& path, const Options& o) {
  try {
    return std::make_shared<const Model>(load_model(read_json(path), o.limits()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadDocument, "'" + path + "': " + e.what());
  }
}

inline Lattice lattice_arg(const std::string& text) {
  if (std::filesystem::exists(text)) return load_lattice(read_json(text));
  return Lattice::builtin(text);
}

inline ModelPtr as_continuation(const ModelPtr& m) {
  if (m->kind == MonadKind::Continuation) return m;
  return std::make_shared<const Model>(to_continuation(*m));
}

/// "min", "max" or "powerset-max"; empty picks powerset-max on Kripke structures, max otherwise.
inline TemporalModel temporal_model(const ModelPtr& m, std::string exec, const Options& o) {
  if (exec.empty()) exec = m->is_powerset() ? "powerset-max" : "max";
  if (exec == "powerset-max") {
    if (!m->is_powerset()) throw Error(ErrorCode::UnsupportedSource, "--exec powerset-max needs a powerset model");
    return {ExecutionMapHandle::powerset_maximal(m)};
  }
  if (exec == "powerset-min") {
    if (m->kind != MonadKind::Powerset) throw Error(ErrorCode::UnsupportedSource, "--exec powerset-min needs a powerset model");
    return {ExecutionMapHandle::powerset_minimal(m)};
  }
  const ExecPolarity pol = exec == "min" ? ExecPolarity::Min : ExecPolarity::Max;
  return {ExecutionMapHandle::continuation(as_continuation(m), pol, o.limits())};
}

inline json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

inline json report_json(const std::string& suite, const std::string& name, const oracle::Report& r) {
  return {{"suite", suite}, {"case", name}, {"pass", r.pass}, {"checks", r.checks}, {"failures", r.failures}};
}

inline json interval_json(const Model& m, const Predicate& lo, const Predicate& hi) {
  json j = json::object();
  for (StateId x = 0; x < m.size(); ++x) j[m.states[x]] = {m.lat().element_name(lo[x]), m.lat().element_name(hi[x])};
  return j;
}

template <class F>
std::set<std::string> atoms_of(const F& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

struct CheckArgs {
  std::string model, formula, logic = "fml", exec, env;
  std::size_t depth = 4;
};

inline int cmd_check(const CheckArgs& a, const Options& o, std::ostream& out, std::ostream& err) {
  const ModelPtr m = load_model_file(a.model, o);
  if (a.logic == "fml") {
    Environment env;
    std::set<std::string> free;
    if (!a.env.empty()) {
      const json bindings = json_arg(a.env);
      for (const auto& [name, pred] : bindings.items()) {
        env[name] = predicate_from_json(*m, pred);
        free.insert(name);
      }
    }
    EvalStats stats;
    const Predicate p = eval_fml(*m, parse_fml(a.formula, free), env, o.limits(), &stats);
    out << predicate_to_json(*m, p).dump() << "\n";
    err << json{{"iterations", stats.iterations}}.dump() << "\n";
    return 0;
  }
  if (a.logic != "ctl" && a.logic != "ctlstar") throw CLI::ValidationError("--logic", "expected fml, ctl or ctlstar");
  const CtlFormula f = parse_ctl(a.formula);
  if (f.fragment == FragmentClass::GeneralCtlStar) {
    if (a.logic == "ctl") throw Error(ErrorCode::NotCtlFragment, "'" + to_string(f.root) + "' is not in the CTL fragment");
    const ModelPtr c = as_continuation(m);
    const auto flavour = c->affine ? oracle::BracketFlavour::Affine : oracle::BracketFlavour::Plain;
    const auto [lo, hi] = oracle::ctlstar_bracket(*c, f.root, a.depth, flavour);
    out << interval_json(*c, lo, hi).dump() << "\n";
    err << json{{"depth", a.depth}, {"class", std::string(to_string(f.fragment))}}.dump() << "\n";
    return 0;
  }
  const TemporalModel tm = temporal_model(m, a.exec, o);
  const Predicate p = eval_ctl(tm, f.root);
  out << predicate_to_json(*m, p).dump() << "\n";
  const std::size_t iters = tm.exec.table() ? tm.exec.table()->iterations() : 0;
  err << json{{"iterations", iters}, {"class", std::string(to_string(f.fragment))}}.dump() << "\n";
  return 0;
}

inline int cmd_encode(const std::string& formula, std::ostream& out) {
  const CtlFormula f = parse_ctl(formula);
  out << to_string(encode_ctl(f.root)) << "\n";
  return 0;
}

struct EquivArgs {
  std::string dir, formulas;
  std::size_t count = 20;
  bool fault = false;
};

/// Wraps every successor so that the first state is never seen; a deliberate semantic bug.
inline ModelPtr inject_fault(const ModelPtr& c) {
  Model m = *c;
  for (auto& h : m.cont) {
    const Evaluator inner = h;
    const Elem bot = m.lat().bottom();
    h = Evaluator::lifted([inner, bot](const Predicate& k) {
      Predicate k2 = k;
      k2[0] = bot;
      return inner(k2);
    });
  }
  return std::make_shared<const Model>(std::move(m));
}

inline int cmd_equiv(const EquivArgs& a, const Options& o, std::ostream& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(a.dir)) throw Error(ErrorCode::BadDocument, "'" + a.dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<std::string> fml_lines, ctl_lines;
  std::string ffile = a.formulas.empty() ? (fs::path(a.dir) / "formulas.txt").string() : a.formulas;
  if (fs::exists(ffile)) {
    std::ifstream in(ffile);
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      if (line.rfind("ctl ", 0) == 0) ctl_lines.push_back(line.substr(4));
      else if (line.rfind("fml ", 0) == 0) fml_lines.push_back(line.substr(4));
      else fml_lines.push_back(line);
    }
  }

  corpus::Generator g(o.seed);
  std::size_t total = 0;
  for (const auto& path : files) {
    ModelPtr m;
    try {
      m = load_model_file(path.string(), o);
    } catch (const Error& e) {
      json j = error_json(e);
      j["model"] = path.filename().string();
      out << j.dump() << "\n";
      return 2;
    }
    if (m->kind == MonadKind::Continuation) {
      out << json{{"model", path.filename().string()}, {"skipped", "continuation-native model"}}.dump() << "\n";
      continue;
    }
    ModelPtr c = as_continuation(m);
    if (a.fault) c = inject_fault(c);
    std::vector<FmlPtr> formulas;
    for (const auto& s : fml_lines) formulas.push_back(parse_fml(s));
    if (fml_lines.empty())
      for (std::size_t i = 0; i < a.count; ++i) formulas.push_back(g.fml(1 + g.below(5), m->lat().has_involution()));
    std::size_t checked = 0;
    auto mismatch = [&](const std::string& logic, const std::string& text, StateId x, const Predicate& lhs, const Predicate& rhs,
                        const char* lname, const char* rname) {
      out << json{{"model", path.filename().string()}, {"logic", logic}, {"formula", text}, {"state", m->states[x]},
                  {lname, m->lat().element_name(lhs[x])}, {rname, m->lat().element_name(rhs[x])}, {"pass", false}}
                 .dump()
          << "\n";
      return 1;
    };
    std::size_t skipped = 0;
    auto labeled = [&](const std::set<std::string>& atoms) {
      for (const auto& a : atoms)
        if (!m->labels.count(a)) return false;
      return true;
    };
    for (const auto& f : formulas) {
      if (!labeled(atoms_of(f))) {
        ++skipped;
        continue;
      }
      const Predicate lhs = eval_fml(*m, f, {}, o.limits());
      const Predicate rhs = eval_fml(*c, f, {}, o.limits());
      ++checked;
      for (StateId x = 0; x < m->size(); ++x)
        if (lhs[x] != rhs[x]) return mismatch("fml", to_string(f), x, lhs, rhs, "coalgebraic", "continuation");
    }
    if (m->is_powerset() && m->lat().size() == 2) {
      std::vector<CtlPtr> ctls;
      for (const auto& s : ctl_lines) ctls.push_back(parse_ctl(s).root);
      if (ctl_lines.empty()) ctls = corpus::ctl_corpus(a.count, o.seed);
      ExecutionMapHandle h = ExecutionMapHandle::powerset_maximal(m);
      if (a.fault) h = ExecutionMapHandle::custom(c, h.as_map());
      const TemporalModel tm{h};
      for (const auto& f : ctls) {
        if (!labeled(atoms_of(f))) {
          ++skipped;
          continue;
        }
        const Predicate lhs = eval_ctl_classical(*m, f);
        const Predicate rhs = eval_ctl(tm, f);
        ++checked;
        for (StateId x = 0; x < m->size(); ++x)
          if (lhs[x] != rhs[x]) return mismatch("ctl", to_string(f), x, lhs, rhs, "classical", "continuation");
      }
    }
    total += checked;
    out << json{{"model", path.filename().string()}, {"checked", checked}, {"skipped", skipped}, {"pass", true}}.dump() << "\n";
  }
  out << json{{"models", files.size()}, {"checked", total}, {"pass", true}}.dump() << "\n";
  return 0;
}

struct ExecMapArgs {
  std::string model, polarity = "max", query;
};

inline int cmd_exec_map(const ExecMapArgs& a, const Options& o, std::ostream& out) {
  const ModelPtr m = load_model_file(a.model, o);
  std::string text = a.query, state;
  if (const auto at = text.rfind('@'); at != std::string::npos) {
    state = text.substr(at + 1);
    text = text.substr(0, at);
  }
  const CtlFormula f = parse_ctl(text);
  if (f.root->kind != CtlKind::E && f.root->kind != CtlKind::A)
    throw Error(ErrorCode::BadDocument, "query must be a quantified path formula, e.g. E(p U q)@s0");
  if (f.fragment == FragmentClass::GeneralCtlStar) throw Error(ErrorCode::NotCtlFragment, "query is not in the CTL fragment");
  const TemporalModel tm = temporal_model(m, a.polarity, o);
  const Lattice& l = tm.model().lat();
  const bool universal = f.root->kind == CtlKind::A;
  Shape s = ctl_path_shape(tm, f.root->left);
  if (universal) s = negate_shape(l, s);
  std::vector<StateId> states;
  if (state.empty()) {
    for (StateId x = 0; x < m->size(); ++x) states.push_back(x);
  } else {
    states.push_back(m->state(state));
  }
  for (StateId x : states) {
    const Elem raw = tm.exec.value(x, s);
    json j{{"state", m->states[x]}, {"shape", to_string(l, s)}, {"value", l.element_name(universal ? l.neg(raw) : raw)}};
    if (universal) j["map_value"] = l.element_name(raw);
    if (const ShapeTable* t = tm.exec.table()) {
      j["orbit"] = t->orbit_size(s);
      j["entries"] = t->entry_count();
      j["iterations"] = t->iterations();
    }
    out << j.dump() << "\n";
  }
  return 0;
}

struct CharfixArgs {
  std::string model, formula, exec = "max";
  bool skip_cl = false;
};

inline int cmd_charfix(const CharfixArgs& a, const Options& o, std::ostream& out) {
  const ModelPtr m = as_continuation(load_model_file(a.model, o));
  const TemporalModel tm = temporal_model(m, a.exec, o);
  const CtlFormula f = parse_ctl(a.formula);
  const CharReport r = check_weak_fixpoint_char(tm, f.root, !a.skip_cl, o.limits());
  json j{{"formula", to_string(f.root)},
         {"encoding", to_string(encode_ctl(f.root))},
         {"class", std::string(to_string(r.fragment))},
         {"relation", std::string(to_string(r.relation))},
         {"lhs", predicate_to_json(*m, r.lhs)},
         {"rhs", predicate_to_json(*m, r.rhs)},
         {"lhs_leq_rhs", r.lhs_leq_rhs},
         {"rhs_leq_lhs", r.rhs_leq_lhs},
         {"holds", r.holds ? json(*r.holds) : json(nullptr)}};
  const CtlPtr& q = f.root;
  if ((q->kind == CtlKind::E || q->kind == CtlKind::A) &&
      (q->left->kind == CtlKind::Until || q->left->kind == CtlKind::WUntil)) {
    const ConditionReport c = check_fixpoint_char_condition(tm, q->left->left->left, q->left->right->left, false, o.limits());
    j["condition"] = {{"until_lhs", predicate_to_json(*m, c.until_lhs)}, {"until_rhs", predicate_to_json(*m, c.until_rhs)},
                      {"until_holds", c.until_holds},   {"wuntil_lhs", predicate_to_json(*m, c.wuntil_lhs)},
                      {"wuntil_rhs", predicate_to_json(*m, c.wuntil_rhs)}, {"wuntil_holds", c.wuntil_holds}};
  }
  out << j.dump() << "\n";
  return r.holds && !*r.holds ? 1 : 0;
}

inline MorphismKind morphism_arg(const std::string& s) {
  if (s == "beta") return MorphismKind::beta();
  if (s == "identity") return MorphismKind::identity();
  if (s.rfind("iota-", 0) == 0) {
    std::string kind = s.substr(5);
    std::replace(kind.begin(), kind.end(), '-', '_');
    return MorphismKind::iota(monad_kind_from_string(kind));
  }
  throw CLI::ValidationError("--morphism", "expected iota-<kind>, beta or identity");
}

inline json law_json(const std::string& morphism, const Lattice& l, const LawReport& r) {
  return {{"morphism", morphism}, {"lattice", l.name()}, {"pass", r.pass}, {"checks", r.checks},
          {"failures", r.failures}, {"skipped", r.skipped}};
}

inline int cmd_laws(const std::string& morphism, const std::string& lattice, std::size_t max_states, const Options& o,
                    std::ostream& out) {
  const Lattice l = lattice_arg(lattice);
  const LawReport r = check_morphism_laws(morphism_arg(morphism), l, max_states, o.seed);
  out << law_json(morphism, l, r).dump() << "\n";
  return r.pass ? 0 : 1;
}

inline int cmd_oracle(const std::string& suite, std::size_t max_states, std::size_t max_lattice, const Options& o,
                      std::ostream& out) {
  bool pass = true;
  auto emit = [&](const std::string& name, const oracle::Report& r, json extra = json::object()) {
    json j = report_json(suite, name, r);
    j.update(extra);
    out << j.dump() << "\n";
    pass = pass && r.pass;
  };
  std::vector<std::string> lats{"bool2"};
  for (std::size_t k = 3; k <= max_lattice; ++k) lats.push_back("chain" + std::to_string(k));
  if (suite == "trinity") {
    for (const auto& name : lats) {
      const Lattice l = Lattice::builtin(name);
      for (auto [monad, mname] : {std::pair{oracle::TrinityMonad::Powerset, "powerset"},
                                  std::pair{oracle::TrinityMonad::Weighted, "weighted"}})
        for (std::size_t nx = 1; nx <= max_states; ++nx)
          for (std::size_t ny = 1; ny <= max_states; ++ny)
            emit(std::string(mname) + "/" + name + "/" + std::to_string(nx) + "x" + std::to_string(ny),
                 oracle::check_trinity(monad, l, nx, ny));
    }
  } else if (suite == "bracket") {
    std::size_t closed = 0;
    const auto models = suites::tiny_continuation_models(24, o.seed, std::max<std::size_t>(1, max_states));
    const oracle::Report rep = suites::bracket_soundness(models, 6, o.seed + 1, &closed);
    emit("tiny-models", rep, {{"closed", closed}});
  } else if (suite == "extrema") {
    std::size_t closed = 0;
    const oracle::Report rep = suites::extremum_agreement(o.seed, 100, &closed);
    emit("path-extremum", rep, {{"closed", closed}});
  } else if (suite == "laws") {
    for (const auto& name : lats) {
      const Lattice l = Lattice::builtin(name);
      for (const char* mname : {"iota-powerset", "iota-nonempty-powerset", "iota-weighted", "iota-affine-weighted",
                                "iota-neighborhood", "beta", "identity"}) {
        const LawReport r = check_morphism_laws(morphism_arg(mname), l, max_states, o.seed);
        out << law_json(mname, l, r).dump() << "\n";
        pass = pass && r.pass;
      }
    }
  } else {
    throw CLI::ValidationError("--suite", "expected trinity, bracket, extrema or laws");
  }
  return pass ? 0 : 1;
}

inline int cmd_lint(const std::vector<std::string>& files, const Options& o, std::ostream& out) {
  int rc = 0;
  for (const auto& f : files) {
    try {
      const json doc = read_json(f);
      if (doc.is_object() && !doc.contains("states")) {
        const Lattice l = load_lattice(doc);
        out << json{{"file", f}, {"ok", true}, {"lattice", l.name()}, {"elements", l.size()}, {"involution", l.has_involution()}}
                   .dump()
            << "\n";
        continue;
      }
      const Model m = load_model(doc, o.limits());
      out << json{{"file", f},
                  {"ok", true},
                  {"kind", std::string(to_string(m.kind))},
                  {"lattice", m.lat().name()},
                  {"states", m.size()},
                  {"affine", m.kind == MonadKind::Continuation ? json(m.affine) : json(nullptr)},
                  {"monotonicity_verified", m.monotonicity_verified},
                  {"notes", m.notes}}
                 .dump()
          << "\n";
    } catch (const Error& e) {
      json j = error_json(e);
      j["file"] = f;
      j["ok"] = false;
      out << j.dump() << "\n";
      rc = 2;
    } catch (const json::exception& e) {
      out << json{{"file", f}, {"ok", false}, {"error", "BadDocument"}, {"message", e.what()}}.dump() << "\n";
      rc = 2;
    }
  }
  return rc;
}

// ---------------------------------------------------------------------------

/// args excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice-valued model checking for fixpoint modal logic and CTL", "latmc"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Seed for randomized corpora");
  app.add_option("--max-iters", o.max_iters, "Override the fixpoint iteration cap");
  app.add_option("--materialize-bound", o.materialize_bound, "Tabulate evaluators when |Ω|^|X| is at most this");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Evaluate a formula on a model");
  c->add_option("--model", check.model)->required();
  c->add_option("--formula", check.formula)->required();
  c->add_option("--logic", check.logic)->check(CLI::IsMember({"fml", "ctl", "ctlstar"}));
  c->add_option("--exec", check.exec)->check(CLI::IsMember({"min", "max", "powerset-max", "powerset-min"}));
  c->add_option("--env", check.env, "JSON object (inline or file) binding free variables");
  c->add_option("--depth", check.depth, "Bracket depth for general CTL*");

  std::string enc_formula;
  auto* e = app.add_subcommand("encode", "Print the fixpoint encoding of a CTL formula");
  e->add_option("--formula", enc_formula)->required();

  EquivArgs equiv;
  auto* q = app.add_subcommand("equiv", "Coalgebraic vs continuation semantics on a model directory");
  q->add_option("--dir", equiv.dir)->required();
  q->add_option("--formulas", equiv.formulas);
  q->add_option("--count", equiv.count);
  q->add_flag("--inject-fault", equiv.fault, "Evaluate the continuation side with a deliberately broken successor");

  ExecMapArgs em;
  auto* x = app.add_subcommand("exec-map", "Solve an execution map at a query");
  x->add_option("--model", em.model)->required();
  x->add_option("--polarity", em.polarity)->check(CLI::IsMember({"min", "max", "powerset-max", "powerset-min"}));
  x->add_option("--query", em.query)->required();

  CharfixArgs cf;
  auto* h = app.add_subcommand("charfix", "Fixpoint characterization report");
  h->add_option("--model", cf.model)->required();
  h->add_option("--formula", cf.formula)->required();
  h->add_option("--exec", cf.exec)->check(CLI::IsMember({"min", "max"}));
  h->add_flag("--skip-constant-linear-check", cf.skip_cl);

  std::string suite;
  std::size_t ostates = 2, olattice = 3;
  auto* r = app.add_subcommand("oracle", "Brute-force reference suites");
  r->add_option("--suite", suite)->required();
  r->add_option("--max-states", ostates);
  r->add_option("--max-lattice", olattice);

  std::string morphism, lattice = "bool2";
  std::size_t lstates = 2;
  auto* w = app.add_subcommand("laws", "Monad-morphism laws by enumeration");
  w->add_option("--morphism", morphism)->required();
  w->add_option("--lattice", lattice);
  w->add_option("--max-states", lstates);

  std::vector<std::string> lint_files;
  auto* t = app.add_subcommand("lint", "Validate model and lattice files");
  t->add_option("files", lint_files)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& ex) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& ex) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << ex.what() << "\n";
    return 2;
  }

  try {
    if (*c) return cmd_check(check, o, out, err);
    if (*e) return cmd_encode(enc_formula, out);
    if (*q) return cmd_equiv(equiv, o, out);
    if (*x) return cmd_exec_map(em, o, out);
    if (*h) return cmd_charfix(cf, o, out);
    if (*r) return cmd_oracle(suite, ostates, olattice, o, out);
    if (*w) return cmd_laws(morphism, lattice, lstates, o, out);
    if (*t) return cmd_lint(lint_files, o, out);
  } catch (const Error& ex) {
    err << error_json(ex).dump() << "\n";
    return 2;
  } catch (const CLI::Error& ex) {
    err << ex.what() << "\n";
    return 2;
  } catch (const json::exception& ex) {
    err << json{{"error", "BadDocument"}, {"message", ex.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace latmc::cli
