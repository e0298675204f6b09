#pragma once

// Property suites over seeded corpora. Each returns an oracle::Report; the
// acceptance runner and the `oracle`/`equiv` subcommands print them.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "latmc/corpus.hpp"
#include "latmc/ctl_eval.hpp"
#include "latmc/execution.hpp"
#include "latmc/fml_eval.hpp"
#include "latmc/oracle.hpp"
#include "latmc/transfer.hpp"

namespace latmc::suites {

using oracle::Report;

inline std::string show(const Lattice& l, Elem a) { return l.element_name(a); }

/// The path continuation a shape denotes, as an oracle term.
inline oracle::PathTerm shape_term(const Shape& s) {
  using T = oracle::PathTerm;
  switch (s.kind) {
    case Shape::Kind::Const: return T::constant(s.a);
    case Shape::Kind::Head: return T::head(s.p);
    case Shape::Kind::Second: return T::next(T::head(s.p));
    case Shape::Kind::Until: return T::join(T::constant(s.a), T::meet(T::constant(s.b), T::until(T::head(s.p), T::head(s.q))));
    case Shape::Kind::WUntil: return T::meet(T::constant(s.a), T::join(T::constant(s.b), T::wuntil(T::head(s.p), T::head(s.q))));
  }
  return T::constant(0);
}

/// A few shapes of every kind with random parameters.
inline std::vector<Shape> sample_shapes(corpus::Generator& g, const Lattice& l, std::size_t n, std::size_t per_kind) {
  auto pred = [&] { return detail::random_predicate(g.rng(), l.size(), n); };
  auto elem = [&] { return static_cast<Elem>(g.below(l.size())); };
  std::vector<Shape> out;
  for (std::size_t i = 0; i < per_kind; ++i) {
    out.push_back(Shape::constant(elem()));
    out.push_back(Shape::head(pred()));
    out.push_back(Shape::second(pred()));
    out.push_back(Shape::until_base(l, pred(), pred()));
    out.push_back(Shape::wuntil_base(l, pred(), pred()));
    out.push_back(Shape::until(elem(), elem(), pred(), pred()));
    out.push_back(Shape::wuntil(elem(), elem(), pred(), pred()));
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Lattice axioms, distributivity and de Morgan laws, exhaustively.
inline Report lattice_laws(const Lattice& l) {
  Report r;
  const auto el = l.elements();
  for (Elem a : el) {
    r.expect(l.join(a, a) == a && l.meet(a, a) == a, l.name() + ": idempotence");
    r.expect(l.join(l.bottom(), a) == a && l.meet(l.top(), a) == a, l.name() + ": units");
    r.expect(l.leq(l.bottom(), a) && l.leq(a, l.top()), l.name() + ": bounds");
    if (l.has_involution()) r.expect(l.neg(l.neg(a)) == a, l.name() + ": involutive");
    for (Elem b : el) {
      r.expect(l.join(a, b) == l.join(b, a) && l.meet(a, b) == l.meet(b, a), l.name() + ": commutativity");
      r.expect(l.join(a, l.meet(a, b)) == a && l.meet(a, l.join(a, b)) == a, l.name() + ": absorption");
      r.expect(l.leq(a, b) == (l.join(a, b) == b) && l.leq(a, b) == (l.meet(a, b) == a), l.name() + ": order coherence");
      r.expect(l.leq(a, l.join(a, b)) && l.leq(l.meet(a, b), a), l.name() + ": bounds of join/meet");
      for (Elem c : el)
        if (l.leq(a, c) && l.leq(b, c)) r.expect(l.leq(l.join(a, b), c), l.name() + ": join is least");
      if (l.has_involution()) {
        r.expect(l.neg(l.join(a, b)) == l.meet(l.neg(a), l.neg(b)), l.name() + ": de Morgan ⊔");
        r.expect(l.neg(l.meet(a, b)) == l.join(l.neg(a), l.neg(b)), l.name() + ": de Morgan ⊓");
        if (l.leq(a, b)) r.expect(l.leq(l.neg(b), l.neg(a)), l.name() + ": antitone");
      }
      for (Elem c : el) {
        r.expect(l.join(a, l.join(b, c)) == l.join(l.join(a, b), c), l.name() + ": ⊔ associativity");
        r.expect(l.meet(a, l.meet(b, c)) == l.meet(l.meet(a, b), c), l.name() + ": ⊓ associativity");
        r.expect(l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)), l.name() + ": distributivity ⊓/⊔");
        r.expect(l.join(a, l.meet(b, c)) == l.meet(l.join(a, b), l.join(a, c)), l.name() + ": distributivity ⊔/⊓");
      }
    }
  }
  return r;
}

/// The diamond M3 as an explicit order table.
inline nlohmann::json m3_document() {
  return nlohmann::json::parse(R"({"kind":"explicit","name":"M3","elements":["0","a","b","c","1"],
    "leq":[["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]})");
}

inline Report lattice_suite(const std::vector<std::string>& names) {
  Report r;
  for (const auto& n : names) {
    const Report one = lattice_laws(Lattice::builtin(n));
    r.checks += one.checks;
    for (const auto& f : one.failures) r.expect(false, f);
  }
  bool rejected = false;
  try {
    (void)load_lattice(m3_document());
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::NotDistributive;
  }
  r.expect(rejected, "M3 must be rejected as NotDistributive");
  return r;
}

// ---------------------------------------------------------------------------

inline Report trinity_suite(std::size_t max_states = 2, std::size_t max_lattice = 3) {
  Report r;
  std::vector<std::string> lats{"bool2"};
  for (std::size_t k = 3; k <= max_lattice; ++k) lats.push_back("chain" + std::to_string(k));
  for (const auto& name : lats) {
    const Lattice l = Lattice::builtin(name);
    for (auto monad : {oracle::TrinityMonad::Powerset, oracle::TrinityMonad::Weighted})
      for (std::size_t nx = 1; nx <= max_states; ++nx)
        for (std::size_t ny = 1; ny <= max_states; ++ny) {
          const Report one = oracle::check_trinity(monad, l, nx, ny);
          r.checks += one.checks;
          for (const auto& f : one.failures) r.expect(false, name + ": " + f);
        }
    const Report c = oracle::check_trinity(oracle::TrinityMonad::Continuation, l, 1, 1);
    r.checks += c.checks;
    for (const auto& f : c.failures) r.expect(false, name + ": " + f);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct FmlInstance {
  ModelPtr model;
  ModelPtr cont;
  FmlPtr formula;
};

/// Seeded (model, closed formula) pairs over every concrete kind.
inline std::vector<FmlInstance> fml_corpus(std::size_t count, std::uint64_t seed) {
  corpus::Generator g(seed);
  static const MonadKind kinds[] = {MonadKind::Powerset, MonadKind::NonemptyPowerset, MonadKind::Weighted,
                                    MonadKind::AffineWeighted, MonadKind::Neighborhood};
  std::vector<FmlInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    const MonadKind k = kinds[i % 5];
    auto l = k == MonadKind::Neighborhood ? g.lattice("bool2") : g.any_lattice();
    auto m = std::make_shared<const Model>(g.model(k, l, 1 + g.below(g.knobs().max_states)));
    auto c = std::make_shared<const Model>(to_continuation(*m));
    out.push_back({m, c, g.fml(1 + g.below(g.knobs().max_depth), m->lat().has_involution())});
  }
  return out;
}

inline std::string instance_text(const FmlInstance& in) {
  return std::string(to_string(in.model->kind)) + "/" + in.model->lat().name() + "/" + std::to_string(in.model->size()) +
         " states: " + to_string(in.formula);
}

/// Coalgebraic and transferred-continuation semantics agree exactly.
inline Report fml_equivalence(const std::vector<FmlInstance>& corpus) {
  Report r;
  for (const auto& in : corpus) {
    const Predicate a = eval_fml(*in.model, in.formula);
    const Predicate b = eval_fml(*in.cont, in.formula);
    r.expect(a == b, instance_text(in) + " coalgebraic " + oracle::show(in.model->lat(), a) + " vs continuation " +
                         oracle::show(in.model->lat(), b));
  }
  return r;
}

/// ⟦◇θ⟧(x) = succ(x)(⟦θ⟧) on the transferred model, and equals the concrete lifting.
inline Report evaluation_by_evaluation(const std::vector<FmlInstance>& corpus) {
  Report r;
  for (const auto& in : corpus) {
    const Predicate inner = eval_fml(*in.cont, in.formula);
    const Predicate outer = eval_fml(*in.cont, fml::dia(in.formula));
    for (StateId x = 0; x < in.cont->size(); ++x) {
      r.expect(outer[x] == successor_eval(*in.cont, x, inner), instance_text(in) + " at " + in.cont->states[x]);
      r.expect(outer[x] == lift_eval(*in.model, Polarity::Dia, x, inner), instance_text(in) + " lifting at " + in.cont->states[x]);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

/// bool2 Kripke structures, half of them with dead ends.
inline std::vector<ModelPtr> kripke_corpus(std::size_t count, std::uint64_t seed, std::size_t max_states = 5) {
  corpus::Knobs knobs;
  knobs.max_states = max_states;
  corpus::Generator g(seed, knobs);
  std::vector<ModelPtr> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::make_shared<const Model>(
        g.model(i % 2 ? MonadKind::NonemptyPowerset : MonadKind::Powerset, g.lattice("bool2"), 1 + g.below(max_states))));
  return out;
}

/// eval_ctl over the transferred maximal map equals the classical labeling,
/// which in turn equals the textbook labeling.
inline Report ctl_recovery(const std::vector<ModelPtr>& models, const std::vector<CtlPtr>& formulas) {
  Report r;
  for (std::size_t i = 0; i < models.size(); ++i) {
    TemporalModel tm{ExecutionMapHandle::powerset_maximal(models[i])};
    for (const auto& f : formulas) {
      const Predicate a = eval_ctl(tm, f);
      const Predicate b = eval_ctl_classical(*models[i], f);
      const Predicate c = oracle::textbook_ctl(*models[i], f);
      const Lattice& l = models[i]->lat();
      r.expect(a == b, "model " + std::to_string(i) + ": " + to_string(f) + " transferred " + oracle::show(l, a) +
                           " classical " + oracle::show(l, b));
      r.expect(b == c, "model " + std::to_string(i) + ": " + to_string(f) + " classical " + oracle::show(l, b) +
                           " textbook " + oracle::show(l, c));
    }
  }
  return r;
}

/// Solved tables are fixpoints; min ⊑ classical ⊑ max for existential formulas.
inline Report execution_sandwich(const std::vector<ModelPtr>& models, const std::vector<CtlPtr>& formulas) {
  Report r;
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto cm = std::make_shared<const Model>(to_continuation(*models[i]));
    TemporalModel lo{ExecutionMapHandle::continuation(cm, ExecPolarity::Min)};
    TemporalModel hi{ExecutionMapHandle::continuation(cm, ExecPolarity::Max)};
    const Lattice& l = cm->lat();
    for (const auto& f : formulas) {
      const Predicate a = eval_ctl(lo, f), b = eval_ctl_classical(*models[i], f), c = eval_ctl(hi, f);
      r.expect(pointwise_leq(l, a, b) && pointwise_leq(l, b, c),
               "model " + std::to_string(i) + ": " + to_string(f) + " min " + oracle::show(l, a) + " classical " +
                   oracle::show(l, b) + " max " + oracle::show(l, c));
    }
    r.expect(lo.exec.table()->satisfies_fixpoint_equation(), "model " + std::to_string(i) + ": min table is not a fixpoint");
    r.expect(hi.exec.table()->satisfies_fixpoint_equation(), "model " + std::to_string(i) + ": max table is not a fixpoint");
    for (std::size_t s = 0; s < lo.exec.table()->shape_count(); ++s)
      for (StateId x = 0; x < cm->size(); ++x) {
        const Shape& sh = lo.exec.table()->shapes()[s];
        r.expect(l.leq(lo.exec.value(x, sh), hi.exec.value(x, sh)), "model " + std::to_string(i) + ": min ⋢ max");
      }
  }
  return r;
}

// ---------------------------------------------------------------------------

/// Small continuation models: transferred concrete ones and constant-linear ones.
inline std::vector<ModelPtr> tiny_continuation_models(std::size_t count, std::uint64_t seed, std::size_t max_states = 3) {
  corpus::Knobs knobs;
  knobs.max_states = max_states;
  knobs.lattices = {"bool2", "chain3"};
  corpus::Generator g(seed, knobs);
  static const MonadKind kinds[] = {MonadKind::Powerset, MonadKind::NonemptyPowerset, MonadKind::Weighted,
                                    MonadKind::AffineWeighted, MonadKind::Neighborhood};
  std::vector<ModelPtr> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 1 + g.below(max_states);
    if (i % 6 == 5) {
      out.push_back(std::make_shared<const Model>(g.constant_linear(g.any_lattice(), n)));
      continue;
    }
    const MonadKind k = kinds[i % 6];
    auto l = k == MonadKind::Neighborhood ? g.lattice("bool2") : g.any_lattice();
    out.push_back(std::make_shared<const Model>(to_continuation(g.model(k, l, n))));
  }
  return out;
}

/// Table values inside the Kleene brackets at every depth; equal when closed.
inline Report bracket_soundness(const std::vector<ModelPtr>& models, std::size_t max_depth, std::uint64_t seed,
                                std::size_t* closed_count = nullptr) {
  Report r;
  corpus::Generator g(seed);
  std::size_t closed = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Model& m = *models[i];
    const Lattice& l = m.lat();
    ExecutionMapHandle lo = ExecutionMapHandle::continuation(models[i], ExecPolarity::Min);
    ExecutionMapHandle hi = ExecutionMapHandle::continuation(models[i], ExecPolarity::Max);
    const std::size_t depth = m.size() <= 2 ? max_depth : std::min<std::size_t>(max_depth, 6);
    for (const Shape& s : sample_shapes(g, l, m.size(), 1)) {
      const auto t = shape_term(s);
      for (StateId x = 0; x < m.size(); ++x) {
        const Elem vmin = lo.value(x, s), vmax = hi.value(x, s);
        for (std::size_t d = 0; d <= depth; ++d) {
          std::vector<oracle::BracketFlavour> flavours{oracle::BracketFlavour::Plain};
          if (m.affine) flavours.push_back(oracle::BracketFlavour::Affine);
          for (auto fl : flavours) {
            const oracle::Interval b = oracle::bounded_bracket(m, x, {}, t, d, fl);
            const std::string where = "model " + std::to_string(i) + " " + to_string(l, s) + " at " + m.states[x] +
                                      " depth " + std::to_string(d) + (fl == oracle::BracketFlavour::Affine ? " affine" : " plain");
            r.expect(l.leq(b.lo, vmin) && l.leq(vmax, b.hi),
                     where + ": bracket [" + show(l, b.lo) + "," + show(l, b.hi) + "] min " + show(l, vmin) + " max " + show(l, vmax));
            if (b.lo == b.hi) {
              ++closed;
              r.expect(vmin == b.lo && vmax == b.lo, where + ": closed bracket disagrees");
            }
          }
        }
      }
    }
  }
  if (closed_count) *closed_count = closed;
  return r;
}

/// path_extremum inside the brute-force brackets; equal whenever they close.
inline Report extremum_agreement(std::uint64_t seed, std::size_t random_cases, std::size_t* closed_count = nullptr) {
  Report r;
  std::size_t closed = 0;
  auto check = [&](const Lattice& l, std::size_t n, const Shape& base, std::size_t h) {
    const auto t = shape_term(base);
    const auto pv = oracle::brute_force_path_values(l, n, t, h);
    for (auto pol : {PathPolarity::Inf, PathPolarity::Sup}) {
      const Elem v = shape_extremum(l, base, pol);
      const oracle::Interval b = pol == PathPolarity::Inf ? pv.inf : pv.sup;
      const std::string where = l.name() + " " + to_string(l, base) + (pol == PathPolarity::Inf ? " inf" : " sup");
      r.expect(l.leq(b.lo, v) && l.leq(v, b.hi), where + ": " + show(l, v) + " outside [" + show(l, b.lo) + "," + show(l, b.hi) + "]");
      if (b.lo == b.hi) {
        ++closed;
        r.expect(v == b.lo, where + ": closed bracket " + show(l, b.lo) + " vs " + show(l, v));
      }
    }
  };
  // exhaustive over bool2 and chain3 with two states
  for (const char* name : {"bool2", "chain3"}) {
    const Lattice l = Lattice::builtin(name);
    PredicateSpace ps(l.size(), 2);
    ps.for_each([&](const Predicate& p) {
      ps.for_each([&](const Predicate& q) {
        check(l, 2, Shape::until_base(l, p, q), 6);
        check(l, 2, Shape::wuntil_base(l, p, q), 6);
      });
    });
  }
  corpus::Generator g(seed);
  for (std::size_t i = 0; i < random_cases; ++i) {
    const auto lp = g.lattice(i % 2 ? "square2" : "chain4");
    const std::size_t n = 3;
    const Predicate p = detail::random_predicate(g.rng(), lp->size(), n), q = detail::random_predicate(g.rng(), lp->size(), n);
    check(*lp, n, Shape::until_base(*lp, p, q), 5);
    check(*lp, n, Shape::wuntil_base(*lp, p, q), 5);
  }
  if (closed_count) *closed_count = closed;
  return r;
}

// ---------------------------------------------------------------------------

inline std::vector<ModelPtr> constant_linear_corpus(std::size_t count, std::uint64_t seed, std::size_t max_states = 4) {
  corpus::Knobs knobs;
  knobs.max_states = max_states;
  corpus::Generator g(seed, knobs);
  std::vector<ModelPtr> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::make_shared<const Model>(g.constant_linear(g.any_lattice(), 1 + g.below(max_states))));
  return out;
}

/// Constant contexts commute with the min/max tables on every closed parameter orbit.
inline Report constant_linear_inheritance(const std::vector<ModelPtr>& models, std::uint64_t seed) {
  Report r;
  corpus::Generator g(seed);
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Model& m = *models[i];
    const Lattice& l = m.lat();
    const std::size_t n = m.size();
    const auto cl = check_constant_linear(m);
    r.expect(cl.pass, "model " + std::to_string(i) + " is not constant-linear");
    for (auto pol : {ExecPolarity::Min, ExecPolarity::Max}) {
      ShapeTable t(models[i], pol);
      const std::string tag = "model " + std::to_string(i) + (pol == ExecPolarity::Min ? " min" : " max");
      const Predicate hold = detail::random_predicate(g.rng(), l.size(), n), goal = detail::random_predicate(g.rng(), l.size(), n);
      const Predicate k = detail::random_predicate(g.rng(), l.size(), n);
      for (StateId x = 0; x < n; ++x) {
        r.expect(t.value(x, Shape::head(k)) == k[x], tag + ": head law at " + m.states[x]);
        r.expect(t.value(x, Shape::second(k)) == successor_eval(m, x, k), tag + ": step law at " + m.states[x]);
      }
      for (Elem a : l.elements()) {
        Predicate ka = k, kj = k;
        for (StateId y = 0; y < n; ++y) ka[y] = l.meet(a, k[y]), kj[y] = l.join(a, k[y]);
        for (StateId x = 0; x < n; ++x) {
          r.expect(t.value(x, Shape::second(ka)) == l.meet(a, t.value(x, Shape::second(k))), tag + ": ⊓ on Second");
          r.expect(t.value(x, Shape::second(kj)) == l.join(a, t.value(x, Shape::second(k))), tag + ": ⊔ on Second");
        }
        for (Elem a1 : l.elements())
          for (Elem b1 : l.elements())
            for (StateId x = 0; x < n; ++x) {
              const Elem u = t.value(x, Shape::until(a1, b1, hold, goal));
              const Elem w = t.value(x, Shape::wuntil(a1, b1, hold, goal));
              const std::string at = " a=" + show(l, a) + " a'=" + show(l, a1) + " b'=" + show(l, b1) + " at " + m.states[x];
              r.expect(t.value(x, Shape::until(l.meet(a, a1), l.meet(a, b1), hold, goal)) == l.meet(a, u), tag + ": ⊓ on Until" + at);
              r.expect(t.value(x, Shape::until(l.join(a, a1), l.join(a, b1), hold, goal)) == l.join(a, u), tag + ": ⊔ on Until" + at);
              r.expect(t.value(x, Shape::wuntil(l.meet(a, a1), l.meet(a, b1), hold, goal)) == l.meet(a, w), tag + ": ⊓ on WUntil" + at);
              r.expect(t.value(x, Shape::wuntil(l.join(a, a1), l.join(a, b1), hold, goal)) == l.join(a, w), tag + ": ⊔ on WUntil" + at);
            }
      }
    }
  }
  return r;
}

/// The one-sided characterization per fragment class, both polarities.
inline Report weak_characterization(const std::vector<ModelPtr>& models, const std::vector<CtlPtr>& formulas,
                                    std::size_t* asserted = nullptr) {
  Report r;
  std::size_t count = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (auto pol : {ExecPolarity::Min, ExecPolarity::Max}) {
      TemporalModel tm{ExecutionMapHandle::continuation(models[i], pol)};
      for (const auto& f : formulas) {
        const CharReport c = check_weak_fixpoint_char(tm, f, false);
        if (!c.holds) continue;
        ++count;
        const Lattice& l = models[i]->lat();
        r.expect(*c.holds, "model " + std::to_string(i) + (pol == ExecPolarity::Min ? " min " : " max ") + to_string(f) + " [" +
                               std::string(to_string(c.fragment)) + "] ⟦ψ⟧ " + oracle::show(l, c.lhs) + " ⟦εψ⟧ " +
                               oracle::show(l, c.rhs));
      }
    }
  }
  if (asserted) *asserted = count;
  return r;
}

/// A CTL corpus with every fragment class represented.
inline std::vector<CtlPtr> fragment_corpus(std::size_t per_class, std::uint64_t seed) {
  corpus::Generator g(seed);
  std::vector<CtlPtr> out;
  std::size_t counts[4] = {0, 0, 0, 0};
  std::size_t guard = 0;
  while ((counts[0] < per_class || counts[1] < per_class || counts[2] < per_class || counts[3] < per_class) && ++guard < 100000) {
    const bool u = g.coin(), w = g.coin();
    CtlPtr f = g.ctl(3, true, u, w);
    const auto c = static_cast<std::size_t>(classify_fragment(f));
    if (c < 4 && counts[c] < per_class) {
      ++counts[c];
      out.push_back(f);
    }
  }
  return out;
}

/// bool2 Kripke structures without dead ends, transferred: affine bool2 models.
inline std::vector<ModelPtr> boolean_affine_models(std::size_t count, std::uint64_t seed, std::size_t max_states = 4) {
  corpus::Knobs knobs;
  knobs.max_states = max_states;
  corpus::Generator g(seed, knobs);
  std::vector<ModelPtr> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::make_shared<const Model>(
        to_continuation(g.model(MonadKind::NonemptyPowerset, g.lattice("bool2"), 1 + g.below(max_states)))));
  return out;
}

struct FullCharOutcome {
  Report equality;       // ⟦ψ⟧ = ⟦εψ⟧ on the maximal map
  Report conditions;     // both inequalities
  Report transferred;    // ⟦ψ⟧ = ⟦εψ⟧ on the transferred powerset-maximal map
};

inline FullCharOutcome full_characterization(const std::vector<ModelPtr>& models, const std::vector<CtlPtr>& formulas) {
  FullCharOutcome out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Model& m = *models[i];
    const Lattice& l = m.lat();
    TemporalModel tm{ExecutionMapHandle::continuation(models[i], ExecPolarity::Max)};
    TemporalModel tp{ExecutionMapHandle::powerset_maximal(m.source)};
    for (const auto& f : formulas) {
      const CharReport c = check_weak_fixpoint_char(tm, f, false);
      out.equality.expect(c.lhs == c.rhs, "model " + std::to_string(i) + " " + to_string(f) + ": ⟦ψ⟧ " + oracle::show(l, c.lhs) +
                                              " ⟦εψ⟧ " + oracle::show(l, c.rhs));
      const Predicate e = eval_fml(m, encode_ctl(f));
      out.transferred.expect(eval_ctl(tp, f) == e, "model " + std::to_string(i) + " " + to_string(f));
    }
    for (const char* a : {"tt", "p", "q", "~p", "p /\\ q", "r \\/ ~q"})
      for (const char* b : {"ff", "p", "q", "~p", "r"}) {
        const auto first = parse_ctl(a).root, second = parse_ctl(b).root;
        const ConditionReport c = check_fixpoint_char_condition(tm, first, second, false);
        const std::string at = "model " + std::to_string(i) + " first=" + a + " second=" + b;
        out.conditions.expect(c.until_holds, at + ": U inequality, lhs " + oracle::show(l, c.until_lhs) + " rhs " +
                                                 oracle::show(l, c.until_rhs));
        out.conditions.expect(c.wuntil_holds, at + ": W inequality, lhs " + oracle::show(l, c.wuntil_lhs) + " rhs " +
                                                  oracle::show(l, c.wuntil_rhs));
      }
  }
  return out;
}

// ---------------------------------------------------------------------------

inline Report beta_suite(std::uint64_t seed, std::size_t max_lattice = 3) {
  Report r;
  std::vector<std::string> lats{"bool2"};
  for (std::size_t k = 3; k <= max_lattice; ++k) lats.push_back("chain" + std::to_string(k));
  for (const auto& name : lats) {
    const Lattice l = Lattice::builtin(name);
    const LawReport rep = check_morphism_laws(MorphismKind::beta(), l, 2, seed);
    r.checks += rep.checks;
    for (const auto& f : rep.failures) r.expect(false, name + ": " + f);
  }
  return r;
}

/// ι(Ɛ_S(u)(x))(w) from the Kripke paths against Ɛ_K(ι∘c)(ι∘u)(x)(w) from the transferred map.
inline Report transfer_diagram(const std::vector<ModelPtr>& kripke, std::uint64_t seed, std::size_t horizon,
                               std::size_t* closed_count = nullptr) {
  Report r;
  corpus::Generator g(seed);
  std::size_t closed = 0;
  for (std::size_t i = 0; i < kripke.size(); ++i) {
    const Model& m = *kripke[i];
    const Lattice& l = m.lat();
    const auto handle = ExecutionMapHandle::powerset_maximal(kripke[i]);
    const ShapeMap u = handle.as_map();
    for (const Shape& s : sample_shapes(g, l, m.size(), 2)) {
      const auto t = shape_term(s);
      for (StateId x = 0; x < m.size(); ++x) {
        const Elem right = exec_operator_step(handle.model(), u, x, s);
        const Elem direct = handle.value(x, s);
        const oracle::Interval left = oracle::powerset_path_join(m, x, t, horizon);
        const std::string where = "model " + std::to_string(i) + " " + to_string(l, s) + " at " + m.states[x];
        r.expect(right == direct, where + ": Ɛ(ι∘u) " + show(l, right) + " vs ι∘u " + show(l, direct));
        r.expect(l.leq(left.lo, right) && l.leq(right, left.hi),
                 where + ": " + show(l, right) + " outside path bracket [" + show(l, left.lo) + "," + show(l, left.hi) + "]");
        if (left.lo == left.hi) {
          ++closed;
          r.expect(right == left.lo, where + ": closed path bracket " + show(l, left.lo) + " vs " + show(l, right));
        }
      }
    }
  }
  if (closed_count) *closed_count = closed;
  return r;
}

}  // namespace latmc::suites
