#pragma once

#include <optional>
#include <string>

#include "latmc/execution.hpp"
#include "latmc/fml_eval.hpp"
#include "latmc/syntax.hpp"

namespace latmc {

struct TemporalModel {
  ExecutionMapHandle exec;

  const Model& model() const { return exec.model(); }
};

namespace detail {
inline bool ctl_needs_involution(const CtlPtr& f) {
  return f && (f->kind == CtlKind::NegAtom || f->kind == CtlKind::A || f->kind == CtlKind::Not ||
               f->kind == CtlKind::PathNot || ctl_needs_involution(f->left) || ctl_needs_involution(f->right));
}

class CtlEvaluator {
 public:
  explicit CtlEvaluator(const TemporalModel& tm) : tm_(tm), m_(tm.model()), l_(m_.lat()) {}

  Predicate state(const CtlPtr& f) {
    const std::size_t n = m_.size();
    switch (f->kind) {
      case CtlKind::Atom: return m_.label(f->name);
      case CtlKind::NegAtom: return pointwise_neg(l_, m_.label(f->name));
      case CtlKind::True: return constant_predicate(n, l_.top());
      case CtlKind::False: return constant_predicate(n, l_.bottom());
      case CtlKind::And: return pointwise_meet(l_, state(f->left), state(f->right));
      case CtlKind::Or: return pointwise_join(l_, state(f->left), state(f->right));
      case CtlKind::Not: return pointwise_neg(l_, state(f->left));
      case CtlKind::E:
      case CtlKind::A: {
        Shape s = shape(f->left);
        const bool universal = f->kind == CtlKind::A;
        if (universal) s = negate_shape(l_, s);
        Predicate r(n, l_.bottom());
        for (StateId x = 0; x < n; ++x) {
          const Elem v = tm_.exec.value(x, s);
          r[x] = universal ? l_.neg(v) : v;
        }
        return r;
      }
      default: throw Error(ErrorCode::NotCtlFragment, "path formula in state position");
    }
  }

  Shape shape(const CtlPtr& p) {
    switch (p->kind) {
      case CtlKind::Lift: return Shape::head(state(p->left));
      case CtlKind::Next: return Shape::second(state(lifted(p->left)));
      case CtlKind::Until: return Shape::until_base(l_, state(lifted(p->left)), state(lifted(p->right)));
      case CtlKind::WUntil: return Shape::wuntil_base(l_, state(lifted(p->left)), state(lifted(p->right)));
      default: throw Error(ErrorCode::NotCtlFragment, "quantified path formula outside the CTL fragment");
    }
  }

 private:
  static const CtlPtr& lifted(const CtlPtr& p) {
    if (p->kind != CtlKind::Lift) throw Error(ErrorCode::NotCtlFragment, "nested path operator");
    return p->left;
  }

  const TemporalModel& tm_;
  const Model& m_;
  const Lattice& l_;
};
}  // namespace detail

/// ⟦Eφ⟧(x) = u(x)(shape φ); ⟦Aφ⟧(x) = ¬u(x)(¬ shape φ).
inline Predicate eval_ctl(const TemporalModel& tm, const CtlPtr& f) {
  if (!is_ctl(f)) throw Error(ErrorCode::NotCtlFragment, "'" + to_string(f) + "' is not in the CTL fragment");
  if (!tm.model().lat().has_involution() && detail::ctl_needs_involution(f))
    throw Error(ErrorCode::NoInvolution, "formula needs negation but lattice '" + tm.model().lat().name() + "' has none");
  return detail::CtlEvaluator(tm).state(f);
}

/// The shape a quantified CTL path formula denotes, with its state arguments evaluated.
inline Shape ctl_path_shape(const TemporalModel& tm, const CtlPtr& path) {
  return detail::CtlEvaluator(tm).shape(path);
}

// ---------------------------------------------------------------------------
// Classical labeling on Kripke structures

namespace detail {
class ClassicalLabeler {
 public:
  explicit ClassicalLabeler(const Model& m) : m_(m), n_(m.size()) {
    ne_.assign(n_, true);
    for (bool changed = true; changed;) {
      changed = false;
      for (StateId x = 0; x < n_; ++x) {
        if (!ne_[x]) continue;
        bool any = false;
        for (StateId y : m.succ[x]) any = any || ne_[y];
        if (!any) ne_[x] = false, changed = true;
      }
    }
  }

  using Set = std::vector<bool>;

  Set state(const CtlPtr& f) {
    Set r(n_, false);
    switch (f->kind) {
      case CtlKind::Atom:
      case CtlKind::NegAtom: {
        const Predicate& p = m_.label(f->name);
        for (StateId x = 0; x < n_; ++x) r[x] = (p[x] == m_.lat().top()) != (f->kind == CtlKind::NegAtom);
        return r;
      }
      case CtlKind::True: return Set(n_, true);
      case CtlKind::False: return r;
      case CtlKind::And:
      case CtlKind::Or: {
        const Set a = state(f->left), b = state(f->right);
        for (StateId x = 0; x < n_; ++x) r[x] = f->kind == CtlKind::And ? a[x] && b[x] : a[x] || b[x];
        return r;
      }
      case CtlKind::Not: {
        const Set a = state(f->left);
        for (StateId x = 0; x < n_; ++x) r[x] = !a[x];
        return r;
      }
      case CtlKind::E: return exists(f->left);
      case CtlKind::A: return forall(f->left);
      default: throw Error(ErrorCode::NotCtlFragment, "path formula in state position");
    }
  }

 private:
  bool ex(const Set& z, StateId x) const {
    for (StateId y : m_.succ[x])
      if (ne_[y] && z[y]) return true;
    return false;
  }
  bool ax(const Set& z, StateId x) const {
    for (StateId y : m_.succ[x])
      if (ne_[y] && !z[y]) return false;
    return true;
  }

  template <class F>
  Set iterate(bool greatest, F&& f) const {
    Set z(n_, greatest);
    for (;;) {
      Set next(n_);
      for (StateId x = 0; x < n_; ++x) next[x] = f(z, x);
      if (next == z) return z;
      z = std::move(next);
    }
  }

  Set exists(const CtlPtr& p) {
    Set r(n_, false);
    switch (p->kind) {
      case CtlKind::Lift: {
        const Set a = state(p->left);
        for (StateId x = 0; x < n_; ++x) r[x] = ne_[x] && a[x];
        return r;
      }
      case CtlKind::Next: {
        const Set a = state(p->left->left);
        for (StateId x = 0; x < n_; ++x) r[x] = ne_[x] && ex(a, x);
        return r;
      }
      case CtlKind::Until: {
        const Set h = state(p->left->left), g = state(p->right->left);
        return iterate(false, [&](const Set& z, StateId x) { return ne_[x] && (g[x] || (h[x] && ex(z, x))); });
      }
      case CtlKind::WUntil: {
        const Set a = state(p->left->left), b = state(p->right->left);
        return iterate(true, [&](const Set& z, StateId x) { return ne_[x] && a[x] && (b[x] || ex(z, x)); });
      }
      default: throw Error(ErrorCode::NotCtlFragment, "quantified path formula outside the CTL fragment");
    }
  }

  Set forall(const CtlPtr& p) {
    Set r(n_, true);
    switch (p->kind) {
      case CtlKind::Lift: {
        const Set a = state(p->left);
        for (StateId x = 0; x < n_; ++x) r[x] = !ne_[x] || a[x];
        return r;
      }
      case CtlKind::Next: {
        const Set a = state(p->left->left);
        for (StateId x = 0; x < n_; ++x) r[x] = !ne_[x] || ax(a, x);
        return r;
      }
      case CtlKind::Until: {
        const Set h = state(p->left->left), g = state(p->right->left);
        return iterate(false, [&](const Set& z, StateId x) { return !ne_[x] || g[x] || (h[x] && ax(z, x)); });
      }
      case CtlKind::WUntil: {
        const Set a = state(p->left->left), b = state(p->right->left);
        return iterate(true, [&](const Set& z, StateId x) { return !ne_[x] || (a[x] && (b[x] || ax(z, x))); });
      }
      default: throw Error(ErrorCode::NotCtlFragment, "quantified path formula outside the CTL fragment");
    }
  }

  const Model& m_;
  std::size_t n_;
  std::vector<bool> ne_;
};
}  // namespace detail

/// Standard CTL labeling over the infinite paths of a Kripke structure.
inline Predicate eval_ctl_classical(const Model& m, const CtlPtr& f) {
  if (m.lat().size() != 2) throw Error(ErrorCode::NotBool2, "classical CTL needs the bool2 lattice");
  if (!m.is_powerset()) throw Error(ErrorCode::PreconditionFailed, "classical CTL needs a powerset model");
  if (!is_ctl(f)) throw Error(ErrorCode::NotCtlFragment, "'" + to_string(f) + "' is not in the CTL fragment");
  const auto set = detail::ClassicalLabeler(m).state(f);
  Predicate r(m.size(), m.lat().bottom());
  for (StateId x = 0; x < m.size(); ++x) r[x] = set[x] ? m.lat().top() : m.lat().bottom();
  return r;
}

// ---------------------------------------------------------------------------
// Fixpoint characterization

enum class Relation { Equal, Geq, Leq, Both };

constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::Geq: return "⊒";
    case Relation::Leq: return "⊑";
    case Relation::Both: return "both";
  }
  return "?";
}

struct CharReport {
  FragmentClass fragment = FragmentClass::CtlNoUW;
  Predicate lhs;  // ⟦ψ⟧
  Predicate rhs;  // ⟦εψ⟧
  Relation relation = Relation::Equal;
  bool lhs_leq_rhs = false;
  bool rhs_leq_lhs = false;
  /// Unset for mixed formulas, where nothing is asserted.
  std::optional<bool> holds;
};

namespace detail {
inline void require_char_preconditions(const TemporalModel& tm, bool verify_constant_linear) {
  const auto b = tm.exec.backend();
  if (b != ExecutionMapHandle::Backend::ContinuationMin && b != ExecutionMapHandle::Backend::ContinuationMax)
    throw Error(ErrorCode::PreconditionFailed, "characterization needs a minimal or maximal continuation execution map");
  if (!tm.model().affine) throw Error(ErrorCode::PreconditionFailed, "characterization needs an affine model");
  if (verify_constant_linear && !check_constant_linear(tm.model()).pass)
    throw Error(ErrorCode::PreconditionFailed, "model is not constant-linear");
}
}  // namespace detail

/// Compares ⟦ψ⟧ with ⟦εψ⟧: = for U/W-free, ⊒ with only U, ⊑ with only W.
inline CharReport check_weak_fixpoint_char(const TemporalModel& tm, const CtlPtr& f, bool verify_constant_linear = true,
                                           const IterationLimits& lim = {}) {
  detail::require_char_preconditions(tm, verify_constant_linear);
  CharReport r;
  r.fragment = classify_fragment(f);
  if (r.fragment == FragmentClass::GeneralCtlStar)
    throw Error(ErrorCode::NotCtlFragment, "'" + to_string(f) + "' is not in the CTL fragment");
  const Lattice& l = tm.model().lat();
  r.lhs = eval_ctl(tm, f);
  r.rhs = eval_fml(tm.model(), encode_ctl(f), {}, lim);
  r.lhs_leq_rhs = pointwise_leq(l, r.lhs, r.rhs);
  r.rhs_leq_lhs = pointwise_leq(l, r.rhs, r.lhs);
  switch (r.fragment) {
    case FragmentClass::CtlNoUW:
      r.relation = Relation::Equal;
      r.holds = r.lhs_leq_rhs && r.rhs_leq_lhs;
      break;
    case FragmentClass::CtlUOnly:
      r.relation = Relation::Geq;
      r.holds = r.rhs_leq_lhs;
      break;
    case FragmentClass::CtlWOnly:
      r.relation = Relation::Leq;
      r.holds = r.lhs_leq_rhs;
      break;
    default: r.relation = Relation::Both; break;
  }
  return r;
}

struct ConditionReport {
  Predicate until_lhs;   // u(x)(wU(hold=first, goal=second))
  Predicate until_rhs;   // μΨ^U
  bool until_holds = false;  // until_lhs ⊑ until_rhs
  Predicate wuntil_lhs;  // u(x)(wW(first, second))
  Predicate wuntil_rhs;  // νΨ^W
  bool wuntil_holds = false;  // wuntil_lhs ⊒ wuntil_rhs
};

/// The two inequalities under which the characterization becomes exact:
/// u(x)(wU) ⊑ μk. goal ⊔ (hold ⊓ c(-)(k)) and u(x)(wW) ⊒ νk. k1 ⊓ (k2 ⊔ c(-)(k)).
inline ConditionReport check_fixpoint_char_condition(const TemporalModel& tm, const CtlPtr& first, const CtlPtr& second,
                                                     bool verify_constant_linear = true, const IterationLimits& lim = {}) {
  detail::require_char_preconditions(tm, verify_constant_linear);
  const Model& m = tm.model();
  const Lattice& l = m.lat();
  const std::size_t n = m.size();
  const Predicate a = eval_ctl(tm, first);
  const Predicate b = eval_ctl(tm, second);

  ConditionReport r;
  r.until_lhs = Predicate(n, l.bottom());
  r.wuntil_lhs = Predicate(n, l.bottom());
  const Shape su = Shape::until_base(l, a, b);
  const Shape sw = Shape::wuntil_base(l, a, b);
  for (StateId x = 0; x < n; ++x) {
    r.until_lhs[x] = tm.exec.value(x, su);
    r.wuntil_lhs[x] = tm.exec.value(x, sw);
  }
  r.until_rhs = kleene_fixpoint(
                    l, n, Extremity::Least,
                    [&](const Predicate& k) {
                      Predicate next(n, l.bottom());
                      for (StateId x = 0; x < n; ++x) next[x] = l.join(b[x], l.meet(a[x], successor_eval(m, x, k)));
                      return next;
                    },
                    lim)
                    .value;
  r.wuntil_rhs = kleene_fixpoint(
                     l, n, Extremity::Greatest,
                     [&](const Predicate& k) {
                       Predicate next(n, l.bottom());
                       for (StateId x = 0; x < n; ++x) next[x] = l.meet(a[x], l.join(b[x], successor_eval(m, x, k)));
                       return next;
                     },
                     lim)
                     .value;
  r.until_holds = pointwise_leq(l, r.until_lhs, r.until_rhs);
  r.wuntil_holds = pointwise_leq(l, r.wuntil_rhs, r.wuntil_lhs);
  return r;
}

}  // namespace latmc
