#pragma once

#include <functional>
#include <map>
#include <string>

#include "latmc/fixpoint.hpp"
#include "latmc/models.hpp"
#include "latmc/syntax.hpp"

namespace latmc {

using Environment = std::map<std::string, Predicate>;

struct EvalStats {
  std::size_t iterations = 0;
};

namespace detail {
inline bool contains_kind(const FmlPtr& f, FmlKind k) {
  return f && (f->kind == k || contains_kind(f->left, k) || contains_kind(f->right, k));
}

class FmlEvaluator {
 public:
  FmlEvaluator(const Model& m, const IterationLimits& lim, EvalStats* stats) : m_(m), lim_(lim), stats_(stats) {}

  Predicate eval(const FmlPtr& f, Environment& env) {
    const Lattice& l = m_.lat();
    const std::size_t n = m_.size();
    switch (f->kind) {
      case FmlKind::Var: {
        auto it = env.find(f->name);
        if (it == env.end()) throw Error(ErrorCode::UnboundVariable, "variable '" + f->name + "' is not bound");
        return it->second;
      }
      case FmlKind::Atom: return m_.label(f->name);
      case FmlKind::NegAtom: return pointwise_neg(l, m_.label(f->name));
      case FmlKind::True: return constant_predicate(n, l.top());
      case FmlKind::False: return constant_predicate(n, l.bottom());
      case FmlKind::And: return pointwise_meet(l, eval(f->left, env), eval(f->right, env));
      case FmlKind::Or: return pointwise_join(l, eval(f->left, env), eval(f->right, env));
      case FmlKind::Dia:
      case FmlKind::Box: {
        const Predicate k = eval(f->left, env);
        const Polarity pol = f->kind == FmlKind::Dia ? Polarity::Dia : Polarity::Box;
        Predicate r(n, l.bottom());
        for (StateId x = 0; x < n; ++x) r[x] = lift_eval(m_, pol, x, k);
        return r;
      }
      case FmlKind::Mu:
      case FmlKind::Nu: {
        const Extremity ext = f->kind == FmlKind::Mu ? Extremity::Least : Extremity::Greatest;
        auto saved = env.find(f->name) != env.end() ? std::optional<Predicate>(env[f->name]) : std::nullopt;
        auto res = kleene_fixpoint(
            l, n, ext,
            [&](const Predicate& v) {
              env[f->name] = v;
              return eval(f->left, env);
            },
            lim_);
        if (saved) env[f->name] = *saved;
        else env.erase(f->name);
        if (stats_) stats_->iterations += res.iterations;
        return res.value;
      }
      case FmlKind::Not: return pointwise_neg(l, eval(f->left, env));
    }
    throw Error(ErrorCode::Internal, "bad FML node");
  }

 private:
  const Model& m_;
  const IterationLimits& lim_;
  EvalStats* stats_;
};
}  // namespace detail

/// ⟦f⟧ over the model; ◇ goes through lift_eval, which on continuation models
/// is plain evaluation of the successor.
inline Predicate eval_fml(const Model& m, const FmlPtr& f, const Environment& env = {}, const IterationLimits& lim = {},
                          EvalStats* stats = nullptr) {
  FmlPtr g = detail::contains_kind(f, FmlKind::Not) ? to_nnf(f) : f;
  if (!m.lat().has_involution() && (detail::contains_kind(g, FmlKind::NegAtom) || detail::contains_kind(g, FmlKind::Box)))
    throw Error(ErrorCode::NoInvolution, "formula needs negation but lattice '" + m.lat().name() + "' has none");
  Environment e = env;
  for (const auto& [name, p] : e)
    if (p.size() != m.size()) throw Error(ErrorCode::BadDocument, "environment predicate '" + name + "' is not total");
  return detail::FmlEvaluator(m, lim, stats).eval(g, e);
}

}  // namespace latmc
