#include <gtest/gtest.h>

#include <json.hpp>

#include "latmc/ctl_eval.hpp"
#include "latmc/oracle.hpp"
#include "latmc/suites.hpp"

using namespace latmc;
using nlohmann::json;
using oracle::Interval;
using oracle::PathTerm;

namespace {

Predicate pred(std::initializer_list<Elem> v) { return Predicate(std::vector<Elem>(v)); }

ModelPtr model_a(const char* kind) {
  json doc = json::parse(R"({
    "lattice": "bool2", "states": ["s0", "s1"],
    "atoms": {"p": {"s0": "⊥", "s1": "⊤"}},
    "coalgebra": {"succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}})");
  doc["coalgebra"]["kind"] = kind;
  return std::make_shared<const Model>(load_model(doc));
}

}  // namespace

TEST(Oracle, MonotoneCounts) {
  const Lattice b = Lattice::builtin("bool2");
  const auto one = oracle::enumerate_monotone(b, 1);
  EXPECT_EQ(one.tables.size(), 3u);
  EXPECT_EQ(one.affine_count(), 1u);
  // monotone boolean functions of two variables
  EXPECT_EQ(oracle::enumerate_monotone(b, 2).tables.size(), 6u);
  // order-preserving self-maps of a 3-chain
  const auto c = oracle::enumerate_monotone(Lattice::builtin("chain3"), 1);
  EXPECT_EQ(c.tables.size(), 10u);
  EXPECT_EQ(c.affine_count(), 1u);
}

TEST(Oracle, EnumerationCap) {
  EXPECT_THROW(oracle::enumerate_monotone(Lattice::builtin("chain3"), 3, 1000), Error);
}

TEST(Oracle, Trinity) {
  for (auto monad : {oracle::TrinityMonad::Powerset, oracle::TrinityMonad::Weighted, oracle::TrinityMonad::Continuation}) {
    const auto r = oracle::check_trinity(monad, Lattice::builtin("bool2"), 1, 2);
    EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_GT(r.checks, 0u);
  }
  const auto all = suites::trinity_suite(2, 3);
  EXPECT_TRUE(all.pass) << (all.failures.empty() ? "" : all.failures.front());
}

TEST(Oracle, LassoAndOpenPaths) {
  const Lattice l = Lattice::builtin("bool2");
  const PathTerm reach = PathTerm::until(PathTerm::constant(1), PathTerm::head(pred({0, 1})));
  // 0 1 1 1 ...
  EXPECT_EQ(oracle::eval_lasso(l, reach, {0, 1}, 1)[0], (Interval{1, 1}));
  // 0 0 0 ...
  EXPECT_EQ(oracle::eval_lasso(l, reach, {0}, 0)[0], (Interval{0, 0}));
  // an unseen tail leaves the value open
  EXPECT_EQ(oracle::eval_open(l, reach, {0, 0}), (Interval{0, 1}));
  EXPECT_EQ(oracle::eval_open(l, reach, {0, 1}), (Interval{1, 1}));
  const PathTerm always = PathTerm::wuntil(PathTerm::head(pred({1, 0})), PathTerm::constant(0));
  EXPECT_EQ(oracle::eval_lasso(l, always, {0}, 0)[0], (Interval{1, 1}));
  EXPECT_EQ(oracle::eval_open(l, always, {0, 0}), (Interval{0, 1}));
  EXPECT_EQ(oracle::eval_open(l, always, {0, 1}), (Interval{0, 0}));
}

TEST(Oracle, NegatedTermIsDual) {
  const Lattice l = Lattice::builtin("chain3");
  const PathTerm t = PathTerm::until(PathTerm::head(pred({2, 1})), PathTerm::next(PathTerm::head(pred({0, 2}))));
  const PathTerm nt = oracle::negate(l, t);
  oracle::for_each_sequence(2, 3, [&](const std::vector<StateId>& seq) {
    for (std::size_t loop = 0; loop < seq.size(); ++loop) {
      const Interval a = oracle::eval_lasso(l, t, seq, loop)[0];
      const Interval b = oracle::eval_lasso(l, nt, seq, loop)[0];
      EXPECT_EQ(b.lo, l.neg(a.hi));
      EXPECT_EQ(b.hi, l.neg(a.lo));
    }
  });
}

TEST(Oracle, BruteForcePathValues) {
  const Lattice l = Lattice::builtin("bool2");
  const PathTerm reach = PathTerm::until(PathTerm::constant(1), PathTerm::head(pred({0, 1})));
  const auto v = oracle::brute_force_path_values(l, 2, reach, 4);
  EXPECT_EQ(v.sup, (Interval{1, 1}));
  EXPECT_EQ(v.inf, (Interval{0, 0}));
  EXPECT_THROW(oracle::brute_force_path_values(l, 10, reach, 10, 1000), Error);
}

TEST(Oracle, PowersetPathJoin) {
  const ModelPtr m = model_a("powerset");
  const PathTerm reach = PathTerm::until(PathTerm::constant(1), PathTerm::head(m->label("p")));
  EXPECT_EQ(oracle::powerset_path_join(*m, 0, reach, 4), (Interval{1, 1}));
  const PathTerm avoid = PathTerm::wuntil(PathTerm::head(pred({1, 0})), PathTerm::constant(0));
  EXPECT_EQ(oracle::powerset_path_join(*m, 0, avoid, 4), (Interval{1, 1}));
  EXPECT_EQ(oracle::powerset_path_join(*m, 1, avoid, 4), (Interval{0, 0}));
}

TEST(Oracle, TextbookModelA) {
  const ModelPtr m = model_a("powerset");
  EXPECT_EQ(oracle::textbook_ctl(*m, parse_ctl("E(tt U p)").root), pred({1, 1}));
  EXPECT_EQ(oracle::textbook_ctl(*m, parse_ctl("A(tt U p)").root), pred({0, 1}));
  EXPECT_EQ(oracle::textbook_ctl(*m, parse_ctl("E(p W ff)").root), pred({0, 1}));
  EXPECT_EQ(oracle::textbook_ctl(*m, parse_ctl("AX p").root), pred({0, 1}));
}

TEST(Oracle, BracketSoundness) {
  const auto r = suites::bracket_soundness(suites::tiny_continuation_models(10, 5), 6, 6);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(r.checks, 0u);
}

TEST(Oracle, CtlStarBracket) {
  const ModelPtr c = std::make_shared<const Model>(to_continuation(*model_a("nonempty_powerset")));
  const Lattice& l = c->lat();
  const TemporalModel mx{ExecutionMapHandle::continuation(c, ExecPolarity::Max)};
  const TemporalModel mn{ExecutionMapHandle::continuation(c, ExecPolarity::Min)};
  for (const char* s : {"E(tt U p)", "A(p W ff)", "EX AX p"}) {
    const CtlPtr f = parse_ctl(s).root;
    const auto [lo, hi] = oracle::ctlstar_bracket(*c, f, 8, oracle::BracketFlavour::Affine);
    EXPECT_TRUE(pointwise_leq(l, lo, hi)) << s;
    EXPECT_TRUE(pointwise_leq(l, lo, eval_ctl(mn, f))) << s;
    EXPECT_TRUE(pointwise_leq(l, eval_ctl(mx, f), hi)) << s;
  }
  const auto [lo, hi] = oracle::ctlstar_bracket(*c, parse_ctl("E(X (tt U p))").root, 8, oracle::BracketFlavour::Affine);
  EXPECT_TRUE(pointwise_leq(l, lo, hi));
  EXPECT_EQ(hi, pred({1, 1}));
  EXPECT_THROW(oracle::ctlstar_bracket(*model_a("powerset"), parse_ctl("EX p").root, 4, oracle::BracketFlavour::Plain), Error);
}

TEST(Oracle, ExtremumAgreement) {
  std::size_t closed = 0;
  const auto r = suites::extremum_agreement(7, 60, &closed);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(closed, 0u);
}
