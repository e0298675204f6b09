#include <gtest/gtest.h>

#include <json.hpp>

#include "latmc/corpus.hpp"
#include "latmc/execution.hpp"
#include "latmc/oracle.hpp"
#include "latmc/suites.hpp"

using namespace latmc;
using nlohmann::json;

namespace {

Predicate pred(std::initializer_list<Elem> v) { return Predicate(std::vector<Elem>(v)); }

ModelPtr load(const char* text) { return std::make_shared<const Model>(load_model(json::parse(text))); }

ModelPtr model_a(const char* kind = "powerset") {
  json doc = json::parse(R"({
    "lattice": "bool2", "states": ["s0", "s1"],
    "atoms": {"p": {"s0": "⊥", "s1": "⊤"}},
    "coalgebra": {"succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}})");
  doc["coalgebra"]["kind"] = kind;
  return std::make_shared<const Model>(load_model(doc));
}

ModelPtr continuation(const ModelPtr& m) { return std::make_shared<const Model>(to_continuation(*m)); }

/// Exact value of a shape on the lasso seq[0..loop) seq[loop..)^ω.
Elem on_lasso(const Lattice& l, const Shape& s, const std::vector<StateId>& seq, std::size_t loop) {
  const auto v = oracle::eval_lasso(l, suites::shape_term(s), seq, loop)[0];
  EXPECT_EQ(v.lo, v.hi);
  return v.lo;
}

}  // namespace

TEST(Execution, ShiftExamples) {
  const Lattice l = Lattice::builtin("chain3");
  const Predicate k = pred({2, 1, 0}), hold = pred({2, 1, 1}), goal = pred({0, 0, 2});
  EXPECT_EQ(shift_shape(l, Shape::head(k), 1), Shape::constant(1));
  EXPECT_EQ(shift_shape(l, Shape::second(k), 1), Shape::head(k));
  EXPECT_EQ(shift_shape(l, Shape::constant(1), 0), Shape::constant(1));
  EXPECT_EQ(shift_shape(l, Shape::until_base(l, hold, goal), 2), Shape::until(goal[2], hold[2], hold, goal));
  EXPECT_EQ(shift_shape(l, Shape::until_base(l, hold, goal), 1), Shape::until(goal[1], hold[1], hold, goal));
}

TEST(Execution, ShiftMatchesPathSemantics) {
  // s(xπ) = shift(s, x)(π) on every lasso up to length 3, for every shape kind on chain3 and square2
  corpus::Generator g(21);
  for (const char* name : {"chain3", "square2"}) {
    const Lattice l = Lattice::builtin(name);
    const std::size_t n = 2;
    for (const Shape& base : suites::sample_shapes(g, l, n, 6)) {
      std::vector<Shape> shapes{base};
      if (base.kind == Shape::Kind::Until || base.kind == Shape::Kind::WUntil)
        for (Elem a : l.elements())
          for (Elem b : l.elements()) shapes.push_back({base.kind, a, b, base.p, base.q});
      for (const Shape& s : shapes)
        for (StateId x = 0; x < n; ++x)
          for (std::size_t len = 1; len <= 3; ++len)
            oracle::for_each_sequence(n, len, [&](const std::vector<StateId>& seq) {
              std::vector<StateId> longer{x};
              longer.insert(longer.end(), seq.begin(), seq.end());
              for (std::size_t loop = 0; loop < len; ++loop)
                EXPECT_EQ(on_lasso(l, s, longer, loop + 1), on_lasso(l, shift_shape(l, s, x), seq, loop)) << to_string(l, s);
            });
    }
  }
}

TEST(Execution, TwoStepShiftComposition) {
  const Lattice l = Lattice::builtin("chain3");
  const Predicate hold = pred({2, 1}), goal = pred({1, 2});
  for (Elem a : l.elements())
    for (Elem b : l.elements())
      for (StateId x = 0; x < 2; ++x)
        for (StateId y = 0; y < 2; ++y) {
          const Shape u = shift_shape(l, shift_shape(l, Shape::until(a, b, hold, goal), x), y);
          // composed closed form
          const Elem a1 = l.join(a, l.meet(b, goal[x])), b1 = l.meet(b, hold[x]);
          EXPECT_EQ(u, Shape::until(l.join(a1, l.meet(b1, goal[y])), l.meet(b1, hold[y]), hold, goal));
          const Shape w = shift_shape(l, shift_shape(l, Shape::wuntil(a, b, hold, goal), x), y);
          const Elem c1 = l.meet(a, l.join(b, hold[x])), d1 = l.join(b, goal[x]);
          EXPECT_EQ(w, Shape::wuntil(l.meet(c1, l.join(d1, hold[y])), l.join(d1, goal[y]), hold, goal));
        }
}

TEST(Execution, NegateShape) {
  corpus::Generator g(22);
  const Lattice l = Lattice::builtin("chain4");
  for (const Shape& s : suites::sample_shapes(g, l, 2, 5)) {
    EXPECT_EQ(negate_shape(l, negate_shape(l, s)), s);
    oracle::for_each_sequence(2, 3, [&](const std::vector<StateId>& seq) {
      for (std::size_t loop = 0; loop < 3; ++loop)
        EXPECT_EQ(on_lasso(l, negate_shape(l, s), seq, loop), l.neg(on_lasso(l, s, seq, loop)));
    });
  }
}

TEST(Execution, PathExtremum) {
  const Lattice b = Lattice::builtin("bool2");
  const Shape goal_never = Shape::until_base(b, pred({1, 1}), pred({0, 0}));
  EXPECT_EQ(path_extremum(b, goal_never, PathPolarity::Inf), 0);
  EXPECT_EQ(path_extremum(b, goal_never, PathPolarity::Sup), 0);
  const Shape reach_g = Shape::until_base(b, pred({1, 1}), pred({1, 0}));
  EXPECT_EQ(path_extremum(b, reach_g, PathPolarity::Inf), 0);
  EXPECT_EQ(path_extremum(b, reach_g, PathPolarity::Sup), 1);
  const Shape always = Shape::wuntil_base(b, pred({1, 1}), pred({0, 0}));
  EXPECT_EQ(path_extremum(b, always, PathPolarity::Inf), 1);
  EXPECT_EQ(path_extremum(b, always, PathPolarity::Sup), 1);
  EXPECT_THROW(path_extremum(b, Shape::constant(0), PathPolarity::Inf), Error);
}

TEST(Execution, PathExtremumAgainstBruteForce) {
  std::size_t closed = 0;
  const auto r = suites::extremum_agreement(23, 60, &closed);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(closed, 0u);
}

TEST(Execution, OperatorStep) {
  const ModelPtr c = continuation(model_a());
  const Lattice& l = c->lat();
  const ShapeMap bottom = [&](StateId, const Shape&) { return l.bottom(); };
  for (StateId x = 0; x < 2; ++x) EXPECT_EQ(exec_operator_step(*c, bottom, x, Shape::head(c->label("p"))), successor_eval(*c, x, Predicate(2, 0)));
  ShapeTable t(c, ExecPolarity::Min);
  const ShapeMap exact = [&](StateId y, const Shape& s) { return t.value(y, s); };
  EXPECT_EQ(exec_operator_step(*c, exact, 1, Shape::head(c->label("p"))), l.top());

  const ModelPtr a = continuation(model_a("nonempty_powerset"));
  const ShapeMap constant = [&](StateId, const Shape& s) { return s.a; };
  for (Elem v : l.elements()) EXPECT_EQ(exec_operator_step(*a, constant, 0, Shape::constant(v)), v);
}

TEST(Execution, MaximalValuesOnBooleanAffineModel) {
  const ModelPtr c = continuation(model_a("nonempty_powerset"));
  ASSERT_TRUE(c->affine);
  const Lattice& l = c->lat();
  const Predicate p = c->label("p");
  const auto ef = compute_execution_value(c, ExecPolarity::Max, {{0, Shape::until_base(l, Predicate(2, 1), p)}, {1, Shape::until_base(l, Predicate(2, 1), p)}});
  EXPECT_EQ(ef, (std::vector<Elem>{1, 1}));
  const auto eg = compute_execution_value(c, ExecPolarity::Max, {{0, Shape::wuntil_base(l, p, Predicate(2, 0))}, {1, Shape::wuntil_base(l, p, Predicate(2, 0))}});
  EXPECT_EQ(eg, (std::vector<Elem>{0, 1}));
}

TEST(Execution, PlainMinimalIsTrivial) {
  const ModelPtr c = continuation(load(R"({"lattice": "bool2", "states": ["x", "y"],
    "coalgebra": {"kind": "powerset", "succ": {"x": ["x", "y"], "y": []}}})"));
  ASSERT_FALSE(c->affine);
  ShapeTable lo(c, ExecPolarity::Min), hi(c, ExecPolarity::Max);
  for (StateId x = 0; x < 2; ++x) EXPECT_EQ(lo.value(x, Shape::constant(1)), 0);
  EXPECT_EQ(hi.value(0, Shape::constant(1)), 1);
  EXPECT_EQ(hi.value(1, Shape::constant(1)), 0);
}

TEST(Execution, TablesInvariants) {
  corpus::Generator g(24);
  const auto models = suites::tiny_continuation_models(24, 25);
  for (const auto& m : models) {
    const Lattice& l = m->lat();
    ShapeTable lo(m, ExecPolarity::Min), hi(m, ExecPolarity::Max);
    for (const Shape& s : suites::sample_shapes(g, l, m->size(), 2))
      for (StateId x = 0; x < m->size(); ++x) {
        EXPECT_TRUE(l.leq(lo.value(x, s), hi.value(x, s)));
        if (m->affine && s.kind == Shape::Kind::Head) {
          EXPECT_EQ(lo.value(x, s), s.p[x]);
          EXPECT_EQ(hi.value(x, s), s.p[x]);
        }
        if (m->affine && s.kind == Shape::Kind::Second) {
          EXPECT_EQ(lo.value(x, s), successor_eval(*m, x, s.p));
          EXPECT_EQ(hi.value(x, s), successor_eval(*m, x, s.p));
        }
      }
    EXPECT_TRUE(lo.satisfies_fixpoint_equation());
    EXPECT_TRUE(hi.satisfies_fixpoint_equation());
  }
}

TEST(Execution, BracketContainment) {
  const auto models = suites::tiny_continuation_models(10, 26);
  std::size_t closed = 0;
  const auto r = suites::bracket_soundness(models, 5, 27, &closed);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(closed, 0u);
}

TEST(Execution, ConstantLinearInheritance) {
  const auto models = suites::constant_linear_corpus(10, 28);
  const auto r = suites::constant_linear_inheritance(models, 29);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
}

TEST(Execution, TransferredPowersetMap) {
  const ModelPtr cycle = load(R"({"lattice": "chain3", "states": ["a", "b"],
    "coalgebra": {"kind": "powerset", "succ": {"a": ["b"], "b": ["a"]}}})");
  const Predicate k = pred({1, 2});
  EXPECT_EQ(transferred_execution_eval(cycle, 0, Shape::head(k)), 1);
  EXPECT_EQ(transferred_execution_eval(cycle, 0, Shape::second(k)), 2);

  const ModelPtr dead = load(R"({"lattice": "bool2", "states": ["x", "y"],
    "coalgebra": {"kind": "powerset", "succ": {"x": ["y"], "y": []}}})");
  const Lattice& b = dead->lat();
  for (const Shape& s : {Shape::constant(1), Shape::head(pred({1, 1})), Shape::second(pred({1, 1})),
                         Shape::until_base(b, pred({1, 1}), pred({1, 1})), Shape::wuntil_base(b, pred({1, 1}), pred({1, 1}))})
    for (StateId x = 0; x < 2; ++x) EXPECT_EQ(transferred_execution_eval(dead, x, s), 0) << to_string(b, s);

  const ModelPtr a = model_a();
  EXPECT_EQ(transferred_execution_eval(a, 0, Shape::until_base(a->lat(), Predicate(2, 1), a->label("p"))), 1);
  EXPECT_THROW(ExecutionMapHandle::powerset_maximal(continuation(a)), Error);
}

TEST(Execution, TransferredMapIsAFixpoint) {
  // the transferred maximal map solves the continuation execution equation
  corpus::Generator g(30);
  for (int i = 0; i < 30; ++i) {
    const ModelPtr m = std::make_shared<const Model>(g.model(i % 2 ? MonadKind::Powerset : MonadKind::NonemptyPowerset, g.lattice("bool2"), 1 + g.below(4)));
    const ModelPtr c = continuation(m);
    const ExecutionMapHandle h = ExecutionMapHandle::powerset_maximal(m);
    const ShapeMap u = h.as_map();
    for (const Shape& s : suites::sample_shapes(g, m->lat(), m->size(), 2))
      for (StateId x = 0; x < m->size(); ++x) EXPECT_EQ(exec_operator_step(*c, u, x, s), u(x, s)) << to_string(m->lat(), s);
  }
}
