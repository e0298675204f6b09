#include <gtest/gtest.h>

#include <json.hpp>

#include "latmc/suites.hpp"
#include "latmc/transfer.hpp"

using namespace latmc;
using nlohmann::json;

namespace {

Predicate pred(std::initializer_list<Elem> v) { return Predicate(std::vector<Elem>(v)); }

ModelPtr model_a(const char* kind = "powerset") {
  json doc = json::parse(R"({
    "lattice": "bool2", "states": ["s0", "s1"],
    "atoms": {"p": {"s0": "⊥", "s1": "⊤"}},
    "coalgebra": {"succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}})");
  doc["coalgebra"]["kind"] = kind;
  return std::make_shared<const Model>(load_model(doc));
}

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::Internal;
}

}  // namespace

TEST(Transfer, BetaSwapsMeetAndJoin) {
  const Lattice l = Lattice::builtin("chain3");
  const Evaluator meet = Evaluator::lifted([&](const Predicate& k) { return l.meet(k[0], k[1]); });
  const Evaluator b = apply_beta(l, meet);
  PredicateSpace(l.size(), 2).for_each([&](const Predicate& k) { EXPECT_EQ(b(k), l.join(k[0], k[1])); });
}

TEST(Transfer, BetaIsInvolutive) {
  const Lattice l = Lattice::builtin("square4");
  std::mt19937_64 rng(3);
  const Predicate w = detail::random_predicate(rng, l.size(), 2);
  const Evaluator h = Evaluator::lifted([&](const Predicate& k) { return l.join(l.meet(w[0], k[0]), l.meet(w[1], k[1])); });
  const Evaluator twice = apply_beta(l, apply_beta(l, h));
  PredicateSpace(l.size(), 2).for_each([&](const Predicate& k) { EXPECT_EQ(twice(k), h(k)); });
}

TEST(Transfer, BetaFixesProjections) {
  const Lattice l = Lattice::builtin("bool2");
  const Evaluator proj = Evaluator::lifted([](const Predicate& k) { return k[1]; });
  const Evaluator b = apply_beta(l, proj);
  for (const Predicate& k : {pred({0, 0}), pred({0, 1}), pred({1, 0}), pred({1, 1})}) EXPECT_EQ(b(k), k[1]);
}

TEST(Transfer, BetaNeedsInvolution) {
  const json lat = json::parse(R"({"kind": "explicit", "elements": ["0", "h", "1"], "leq": [["0", "h"], ["h", "1"]]})");
  const Lattice l = load_lattice(lat);
  EXPECT_EQ(error_of([&] { apply_beta(l, Evaluator::lifted([](const Predicate& k) { return k[0]; })); }),
            ErrorCode::NoInvolution);
}

TEST(Transfer, IotaLaws) {
  for (const char* name : {"bool2", "chain3"})
    for (MonadKind kind : {MonadKind::Powerset, MonadKind::NonemptyPowerset, MonadKind::Weighted, MonadKind::AffineWeighted}) {
      const LawReport r = check_morphism_laws(MorphismKind::iota(kind), Lattice::builtin(name), 2);
      EXPECT_TRUE(r.pass) << name << " " << to_string(kind) << ": " << (r.failures.empty() ? "" : r.failures.front());
      EXPECT_GT(r.checks, 0u);
    }
  const LawReport nb = check_morphism_laws(MorphismKind::iota(MonadKind::Neighborhood), Lattice::builtin("bool2"), 2);
  EXPECT_TRUE(nb.pass) << (nb.failures.empty() ? "" : nb.failures.front());
  EXPECT_GT(nb.checks, 0u);
}

TEST(Transfer, BetaLaws) {
  const auto r = suites::beta_suite(5, 3);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(r.checks, 0u);
}

TEST(Transfer, ExecutionMapSources) {
  const ModelPtr m = model_a();
  const ExecutionMapHandle max = transfer_execution_map(MorphismKind::iota(MonadKind::Powerset), m, SourceMap::Maximal);
  const Shape ef = Shape::until_base(m->lat(), Predicate(2, 1), m->label("p"));
  EXPECT_EQ(max.value(0, ef), 1);
  EXPECT_EQ(max.value(1, ef), 1);
  const ExecutionMapHandle min = transfer_execution_map(MorphismKind::iota(MonadKind::Powerset), m, SourceMap::Minimal);
  EXPECT_EQ(min.value(0, ef), 0);
  EXPECT_EQ(min.value(1, ef), 0);

  EXPECT_EQ(error_of([&] { transfer_execution_map(MorphismKind::beta(), m, SourceMap::Maximal); }), ErrorCode::UnsupportedSource);
  EXPECT_EQ(error_of([&] { transfer_execution_map(MorphismKind::iota(MonadKind::NonemptyPowerset), m, SourceMap::Maximal); }),
            ErrorCode::UnsupportedSource);
  const ModelPtr ne = model_a("nonempty_powerset");
  EXPECT_EQ(error_of([&] { transfer_execution_map(MorphismKind::iota(MonadKind::NonemptyPowerset), ne, SourceMap::Minimal); }),
            ErrorCode::UnsupportedSource);
}

TEST(Transfer, IdentityOnContinuationHandles) {
  const ModelPtr c = std::make_shared<const Model>(to_continuation(*model_a("nonempty_powerset")));
  const ExecutionMapHandle u = ExecutionMapHandle::continuation(c, ExecPolarity::Max);
  const ExecutionMapHandle same = transfer_execution_map(MorphismKind::identity(), u);
  const Shape s = Shape::head(c->label("p"));
  for (StateId x = 0; x < c->size(); ++x) EXPECT_EQ(same.value(x, s), u.value(x, s));
  EXPECT_EQ(error_of([&] { transfer_execution_map(MorphismKind::beta(), u); }), ErrorCode::UnsupportedSource);
}

TEST(Transfer, Diagram) {
  std::size_t closed = 0;
  const auto r = suites::transfer_diagram(suites::kripke_corpus(20, 9, 3), 10, 6, &closed);
  EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(closed, 0u);
}
