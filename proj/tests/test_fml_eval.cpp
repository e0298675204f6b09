#include <gtest/gtest.h>

#include <deque>

#include <json.hpp>

#include "latmc/corpus.hpp"
#include "latmc/fml_eval.hpp"

using namespace latmc;
using nlohmann::json;

namespace {

Predicate pred(std::initializer_list<Elem> v) { return Predicate(std::vector<Elem>(v)); }

Model model_a() {
  return load_model(json::parse(R"({
    "lattice": "bool2", "states": ["s0", "s1"],
    "atoms": {"p": {"s0": "⊥", "s1": "⊤"}},
    "coalgebra": {"kind": "powerset", "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}})"));
}

/// States from which some p-state is reachable, by backward BFS.
std::vector<bool> reach(const Model& m, const std::string& atom) {
  const std::size_t n = m.size();
  std::vector<bool> seen(n, false);
  std::deque<StateId> queue;
  for (StateId x = 0; x < n; ++x)
    if (m.label(atom)[x]) {
      seen[x] = true;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    const StateId y = queue.front();
    queue.pop_front();
    for (StateId x = 0; x < n; ++x)
      if (!seen[x] && std::find(m.succ[x].begin(), m.succ[x].end(), y) != m.succ[x].end()) {
        seen[x] = true;
        queue.push_back(x);
      }
  }
  return seen;
}

/// States with an infinite p-path: repeatedly drop p-states with no p-successor left.
std::vector<bool> always(const Model& m, const std::string& atom) {
  const std::size_t n = m.size();
  std::vector<bool> keep(n);
  for (StateId x = 0; x < n; ++x) keep[x] = m.label(atom)[x] != 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId x = 0; x < n; ++x) {
      if (!keep[x]) continue;
      bool any = false;
      for (StateId y : m.succ[x]) any = any || keep[y];
      if (!any) {
        keep[x] = false;
        changed = true;
      }
    }
  }
  return keep;
}

std::vector<bool> as_bits(const Predicate& p) {
  std::vector<bool> out;
  for (Elem v : p.values) out.push_back(v != 0);
  return out;
}

}  // namespace

TEST(FmlEval, ModelA) {
  const Model m = model_a();
  EXPECT_EQ(eval_fml(m, parse_fml("mu u. p \\/ <> u")), pred({1, 1}));
  EXPECT_EQ(eval_fml(m, parse_fml("nu u. p /\\ <> u")), pred({0, 1}));
  EXPECT_EQ(eval_fml(m, parse_fml("tt")), pred({1, 1}));
  EXPECT_EQ(eval_fml(m, parse_fml("ff")), pred({0, 0}));
  EXPECT_EQ(eval_fml(m, parse_fml("~p")), pred({1, 0}));
  EXPECT_EQ(eval_fml(m, parse_fml("[] p")), pred({0, 1}));
}

TEST(FmlEval, ReachabilityAgainstBfs) {
  corpus::Generator g(11);
  for (int i = 0; i < 200; ++i) {
    const Model m = g.model(i % 2 ? MonadKind::Powerset : MonadKind::NonemptyPowerset, g.lattice("bool2"), 1 + g.below(6));
    EXPECT_EQ(as_bits(eval_fml(m, parse_fml("mu u. p \\/ <> u"))), reach(m, "p"));
    EXPECT_EQ(as_bits(eval_fml(m, parse_fml("nu u. p /\\ <> u"))), always(m, "p"));
  }
}

TEST(FmlEval, KleeneFixpoint) {
  const Lattice l = Lattice::builtin("chain3");
  const auto id = kleene_fixpoint(l, 3, Extremity::Least, [](const Predicate& v) { return v; });
  EXPECT_EQ(id.value, Predicate(3, l.bottom()));
  const Predicate k0 = pred({1, 0, 2});
  const auto join = kleene_fixpoint(l, 3, Extremity::Least, [&](const Predicate& v) { return pointwise_join(l, v, k0); });
  EXPECT_EQ(join.value, k0);
  EXPECT_EQ(join.iterations, 2u);
  const auto top = kleene_fixpoint(l, 3, Extremity::Greatest, [](const Predicate& v) { return v; });
  EXPECT_EQ(top.value, Predicate(3, l.top()));
}

TEST(FmlEval, NonMonotoneDiverges) {
  const Lattice l = Lattice::builtin("bool2");
  try {
    kleene_fixpoint(l, 2, Extremity::Least, [&](const Predicate& v) { return pointwise_neg(l, v); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(FmlEval, FreeVariables) {
  const Model m = model_a();
  const FmlPtr f = parse_fml("<> u", {"u"});
  EXPECT_EQ(eval_fml(m, f, {{"u", pred({1, 0})}}), pred({1, 0}));
  EXPECT_EQ(eval_fml(m, f, {{"u", pred({0, 1})}}), pred({1, 1}));
  try {
    eval_fml(m, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundVariable);
  }
}

TEST(FmlEval, BoxNeedsInvolution) {
  const json lat = json::parse(R"({"kind": "explicit", "elements": ["0", "h", "1"], "leq": [["0", "h"], ["h", "1"]]})");
  json doc = json::parse(R"({"states": ["x"], "atoms": {"p": {"x": "h"}},
                             "coalgebra": {"kind": "powerset", "succ": {"x": ["x"]}}})");
  doc["lattice"] = lat;
  const Model m = load_model(doc);
  EXPECT_EQ(m.lat().element_name(eval_fml(m, parse_fml("nu u. p /\\ <> u"))[0]), "h");
  for (const char* s : {"[] p", "~p"}) {
    try {
      eval_fml(m, parse_fml(s));
      ADD_FAILURE() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoInvolution) << s;
    }
  }
}

TEST(FmlEval, NegationCoherence) {
  corpus::Generator g(12);
  for (int i = 0; i < 200; ++i) {
    const Model m = g.any_model();
    const FmlPtr f = g.fml(1 + g.below(4), true);
    const Predicate v = eval_fml(m, f);
    EXPECT_EQ(eval_fml(m, to_nnf(fml::negation(f))), pointwise_neg(m.lat(), v)) << to_string(f);
  }
}

TEST(FmlEval, MonotoneInEnvironment) {
  corpus::Generator g(13);
  for (int i = 0; i < 100; ++i) {
    const Model m = g.any_model();
    const Lattice& l = m.lat();
    const FmlPtr f = parse_fml(i % 2 ? "mu v. u \\/ p /\\ <> v" : "nu v. (u \\/ q) /\\ [] v \\/ <> u", {"u"});
    const Predicate a = detail::random_predicate(g.rng(), l.size(), m.size());
    const Predicate b = pointwise_join(l, a, detail::random_predicate(g.rng(), l.size(), m.size()));
    EXPECT_TRUE(pointwise_leq(l, eval_fml(m, f, {{"u", a}}), eval_fml(m, f, {{"u", b}})));
  }
}

TEST(FmlEval, TransferEquivalence) {
  corpus::Generator g(14);
  for (int i = 0; i < 200; ++i) {
    const Model m = g.any_model();
    const Model c = to_continuation(m);
    const FmlPtr f = g.fml(1 + g.below(5), m.lat().has_involution());
    EXPECT_EQ(eval_fml(m, f), eval_fml(c, f)) << to_string(f);
  }
}

TEST(FmlEval, DiamondIsEvaluation) {
  corpus::Generator g(15);
  for (int i = 0; i < 100; ++i) {
    const Model c = to_continuation(g.any_model());
    const FmlPtr theta = g.fml(1 + g.below(3), true);
    const Predicate inner = eval_fml(c, theta);
    const Predicate outer = eval_fml(c, fml::dia(theta));
    for (StateId x = 0; x < c.size(); ++x) EXPECT_EQ(outer[x], successor_eval(c, x, inner));
  }
}

TEST(FmlEval, IterationStats) {
  const Model m = model_a();
  EvalStats stats;
  eval_fml(m, parse_fml("mu u. p \\/ <> u"), {}, {}, &stats);
  EXPECT_GT(stats.iterations, 0u);
  IterationLimits tight;
  tight.max_iters = 0;
  EXPECT_THROW(eval_fml(m, parse_fml("mu u. p \\/ <> u"), {}, tight), Error);
}
