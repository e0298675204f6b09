#pragma once

// The execution operator of continuation coalgebras, evaluated on a finite
// shift-closed family of path continuations ("shapes").
//
//   Const(a)                 π ↦ a
//   Head(k)                  π ↦ k(π₀)
//   Second(k)                π ↦ k(π₁)
//   Until(a, b, hold, goal)  π ↦ a ⊔ (b ⊓ wU(π)),  wU = μw. goal(π₀) ⊔ (hold(π₀) ⊓ w(π⁺))
//   WUntil(a, b, k1, k2)     π ↦ a ⊓ (b ⊔ wW(π)),  wW = νw. k1(π₀) ⊓ (k2(π₀) ⊔ w(π⁺))

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "latmc/fixpoint.hpp"
#include "latmc/models.hpp"

namespace latmc {

struct Shape {
  enum class Kind { Const, Head, Second, Until, WUntil };

  Kind kind = Kind::Const;
  Elem a = 0;
  Elem b = 0;
  Predicate p;  // Head/Second: k; Until: hold; WUntil: k1
  Predicate q;  // Until: goal; WUntil: k2

  static Shape constant(Elem a) { return {Kind::Const, a, 0, {}, {}}; }
  static Shape head(Predicate k) { return {Kind::Head, 0, 0, std::move(k), {}}; }
  static Shape second(Predicate k) { return {Kind::Second, 0, 0, std::move(k), {}}; }
  static Shape until(Elem a, Elem b, Predicate hold, Predicate goal) {
    return {Kind::Until, a, b, std::move(hold), std::move(goal)};
  }
  static Shape wuntil(Elem a, Elem b, Predicate k1, Predicate k2) {
    return {Kind::WUntil, a, b, std::move(k1), std::move(k2)};
  }
  /// The bare wU / wW continuations.
  static Shape until_base(const Lattice& l, Predicate hold, Predicate goal) {
    return until(l.bottom(), l.top(), std::move(hold), std::move(goal));
  }
  static Shape wuntil_base(const Lattice& l, Predicate k1, Predicate k2) {
    return wuntil(l.top(), l.bottom(), std::move(k1), std::move(k2));
  }

  friend bool operator==(const Shape&, const Shape&) = default;
  friend auto operator<=>(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Lattice& l, const Shape& s) {
  auto pred = [&](const Predicate& k) {
    std::string r = "[";
    for (std::size_t i = 0; i < k.size(); ++i) r += (i ? "," : "") + l.element_name(k[i]);
    return r + "]";
  };
  switch (s.kind) {
    case Shape::Kind::Const: return "Const(" + l.element_name(s.a) + ")";
    case Shape::Kind::Head: return "Head(" + pred(s.p) + ")";
    case Shape::Kind::Second: return "Second(" + pred(s.p) + ")";
    case Shape::Kind::Until:
      return "Until(" + l.element_name(s.a) + "," + l.element_name(s.b) + "," + pred(s.p) + "," + pred(s.q) + ")";
    case Shape::Kind::WUntil:
      return "WUntil(" + l.element_name(s.a) + "," + l.element_name(s.b) + "," + pred(s.p) + "," + pred(s.q) + ")";
  }
  return "?";
}

/// λπ. s(xπ), kept inside the family.
inline Shape shift_shape(const Lattice& l, const Shape& s, StateId x) {
  switch (s.kind) {
    case Shape::Kind::Const: return s;
    case Shape::Kind::Head: return Shape::constant(s.p[x]);
    case Shape::Kind::Second: return Shape::head(s.p);
    case Shape::Kind::Until:
      // wU(xπ) = goal(x) ⊔ (hold(x) ⊓ wU(π))
      return Shape::until(l.join(s.a, l.meet(s.b, s.q[x])), l.meet(s.b, s.p[x]), s.p, s.q);
    case Shape::Kind::WUntil:
      // wW(xπ) = k1(x) ⊓ (k2(x) ⊔ wW(π))
      return Shape::wuntil(l.meet(s.a, l.join(s.b, s.p[x])), l.join(s.b, s.q[x]), s.p, s.q);
  }
  throw Error(ErrorCode::Internal, "bad shape");
}

/// λπ. ¬s(π); needs an involution.
inline Shape negate_shape(const Lattice& l, const Shape& s) {
  switch (s.kind) {
    case Shape::Kind::Const: return Shape::constant(l.neg(s.a));
    case Shape::Kind::Head: return Shape::head(pointwise_neg(l, s.p));
    case Shape::Kind::Second: return Shape::second(pointwise_neg(l, s.p));
    case Shape::Kind::Until:
      // ¬wU(hold, goal) = wW(¬goal, ¬hold)
      return Shape::wuntil(l.neg(s.a), l.neg(s.b), pointwise_neg(l, s.q), pointwise_neg(l, s.p));
    case Shape::Kind::WUntil:
      // ¬wW(k1, k2) = wU(hold = ¬k2, goal = ¬k1)
      return Shape::until(l.neg(s.a), l.neg(s.b), pointwise_neg(l, s.q), pointwise_neg(l, s.p));
  }
  throw Error(ErrorCode::Internal, "bad shape");
}

enum class PathPolarity { Inf, Sup };

/// ⊓ or ⊔ over all of X^ω of the bare wU / wW value of an Until/WUntil shape
/// (its a, b are ignored). Least fixpoint of v ↦ ⊓ₓ/⊔ₓ goal(x) ⊔ (hold(x) ⊓ v) for U,
/// greatest fixpoint of v ↦ ⊓ₓ/⊔ₓ k1(x) ⊓ (k2(x) ⊔ v) for W.
inline Elem path_extremum(const Lattice& l, const Shape& base, PathPolarity pol) {
  if (base.kind != Shape::Kind::Until && base.kind != Shape::Kind::WUntil)
    throw Error(ErrorCode::PreconditionFailed, "path_extremum needs an Until or WUntil shape");
  const bool until = base.kind == Shape::Kind::Until;
  const std::size_t n = base.p.size();
  auto step = [&](Elem v) {
    Elem acc = pol == PathPolarity::Inf ? l.top() : l.bottom();
    for (StateId x = 0; x < n; ++x) {
      const Elem t = until ? l.join(base.q[x], l.meet(base.p[x], v)) : l.meet(base.p[x], l.join(base.q[x], v));
      acc = pol == PathPolarity::Inf ? l.meet(acc, t) : l.join(acc, t);
    }
    return acc;
  };
  return kleene_fixpoint(until ? l.bottom() : l.top(), step, l.height() + 1).value;
}

/// Extremum of a shape's value over all paths.
inline Elem shape_extremum(const Lattice& l, const Shape& s, PathPolarity pol) {
  switch (s.kind) {
    case Shape::Kind::Const: return s.a;
    case Shape::Kind::Head:
    case Shape::Kind::Second: return pol == PathPolarity::Inf ? l.meet_all(s.p.values) : l.join_all(s.p.values);
    case Shape::Kind::Until: return l.join(s.a, l.meet(s.b, path_extremum(l, s, pol)));
    case Shape::Kind::WUntil: return l.meet(s.a, l.join(s.b, path_extremum(l, s, pol)));
  }
  throw Error(ErrorCode::Internal, "bad shape");
}

/// A map u evaluable at (state, shape).
using ShapeMap = std::function<Elem(StateId, const Shape&)>;

/// Ɛ(u)(x)(s) = succ(x)(λy. u(y)(λπ. s(xπ))).
inline Elem exec_operator_step(const Model& m, const ShapeMap& u, StateId x, const Shape& s) {
  const Shape shifted = shift_shape(m.lat(), s, x);
  Predicate k(m.size(), m.lat().bottom());
  for (StateId y = 0; y < m.size(); ++y) k[y] = u(y, shifted);
  return successor_eval(m, x, k);
}

enum class ExecPolarity { Min, Max };

/// Value table of the minimal or maximal execution map over a shift-closed
/// family of shapes. New shapes are closed, initialized at the Kleisli
/// bottom/top, and iterated to their fixpoint incrementally.
class ShapeTable {
 public:
  ShapeTable(ModelPtr m, ExecPolarity pol, IterationLimits lim = {}) : m_(std::move(m)), pol_(pol), lim_(lim) {
    if (m_->kind != MonadKind::Continuation)
      throw Error(ErrorCode::PreconditionFailed, "execution tables need a continuation model");
  }

  const Model& model() const noexcept { return *m_; }
  ExecPolarity polarity() const noexcept { return pol_; }
  std::size_t shape_count() const noexcept { return shapes_.size(); }
  std::size_t entry_count() const noexcept { return vals_.size(); }
  std::size_t iterations() const noexcept { return iterations_; }
  const std::vector<Shape>& shapes() const noexcept { return shapes_; }

  /// Closes and solves; returns the index of the shape.
  std::size_t add(const Shape& s) {
    if (auto it = index_.find(s); it != index_.end()) return it->second;
    const Lattice& l = m_->lat();
    const std::size_t n = m_->size();
    const std::size_t first = shapes_.size();
    std::deque<std::size_t> work;
    intern(s, work);
    while (!work.empty()) {
      const std::size_t i = work.front();
      work.pop_front();
      for (StateId x = 0; x < n; ++x) intern(shift_shape(l, shapes_[i], x), work);
    }
    const std::size_t last = shapes_.size();
    shift_.resize(last * n);
    for (std::size_t i = first; i < last; ++i)
      for (StateId x = 0; x < n; ++x) shift_[i * n + x] = index_.at(shift_shape(l, shapes_[i], x));

    vals_.resize(last * n);
    for (std::size_t i = first; i < last; ++i) {
      const Elem init = initial_value(shapes_[i]);
      for (StateId x = 0; x < n; ++x) vals_[i * n + x] = init;
    }
    std::vector<Elem> block(vals_.begin() + first * n, vals_.end());
    const std::size_t cap =
        lim_.max_iters ? *lim_.max_iters : block.size() * l.height() + 1;
    auto res = kleene_fixpoint(
        std::move(block),
        [&](const std::vector<Elem>& cur) {
          std::copy(cur.begin(), cur.end(), vals_.begin() + first * n);
          std::vector<Elem> next(cur.size());
          for (std::size_t i = first; i < last; ++i)
            for (StateId x = 0; x < n; ++x) next[(i - first) * n + x] = step_entry(i, x);
          return next;
        },
        cap);
    std::copy(res.value.begin(), res.value.end(), vals_.begin() + first * n);
    iterations_ += res.iterations;
    return index_.at(s);
  }

  Elem value(StateId x, const Shape& s) { return vals_[add(s) * m_->size() + x]; }

  /// Entry lookup without solving; the shape must already be present.
  Elem value_at(StateId x, std::size_t shape_index) const { return vals_[shape_index * m_->size() + x]; }
  std::size_t index_of(const Shape& s) const { return index_.at(s); }
  bool contains(const Shape& s) const { return index_.count(s) > 0; }
  /// Orbit size (number of closed shapes) reached from `s`.
  std::size_t orbit_size(const Shape& s) const {
    std::set<std::size_t> seen{index_.at(s)};
    std::deque<std::size_t> work{index_.at(s)};
    while (!work.empty()) {
      const std::size_t i = work.front();
      work.pop_front();
      for (StateId x = 0; x < m_->size(); ++x)
        if (seen.insert(shift_[i * m_->size() + x]).second) work.push_back(shift_[i * m_->size() + x]);
    }
    return seen.size();
  }

  /// Re-applies the execution operator to every entry and compares.
  bool satisfies_fixpoint_equation() const {
    for (std::size_t i = 0; i < shapes_.size(); ++i)
      for (StateId x = 0; x < m_->size(); ++x)
        if (step_entry(i, x) != vals_[i * m_->size() + x]) return false;
    return true;
  }

 private:
  void intern(const Shape& s, std::deque<std::size_t>& work) {
    if (index_.count(s)) return;
    index_.emplace(s, shapes_.size());
    work.push_back(shapes_.size());
    shapes_.push_back(s);
  }

  Elem initial_value(const Shape& s) const {
    const Lattice& l = m_->lat();
    if (!m_->affine) return pol_ == ExecPolarity::Min ? l.bottom() : l.top();
    return shape_extremum(l, s, pol_ == ExecPolarity::Min ? PathPolarity::Inf : PathPolarity::Sup);
  }

  Elem step_entry(std::size_t i, StateId x) const {
    const std::size_t n = m_->size();
    const std::size_t j = shift_[i * n + x];
    Predicate k(n, 0);
    for (StateId y = 0; y < n; ++y) k[y] = vals_[j * n + y];
    return m_->cont[x](k);
  }

  ModelPtr m_;
  ExecPolarity pol_;
  IterationLimits lim_;
  std::vector<Shape> shapes_;
  std::map<Shape, std::size_t> index_;
  std::vector<std::size_t> shift_;
  std::vector<Elem> vals_;
  std::size_t iterations_ = 0;
};

/// Solves the min/max table for a batch of (state, shape) queries.
inline std::vector<Elem> compute_execution_value(const ModelPtr& m, ExecPolarity pol,
                                                 const std::vector<std::pair<StateId, Shape>>& queries,
                                                 const IterationLimits& lim = {}) {
  ShapeTable t(m, pol, lim);
  std::vector<Elem> out;
  for (const auto& [x, s] : queries) out.push_back(t.value(x, s));
  return out;
}

// ---------------------------------------------------------------------------
// Maximal powerset execution map, transferred

/// Evaluates ⊔ over the infinite paths from x of a shape, on a powerset model,
/// without enumerating paths.
class PowersetMaximal {
 public:
  explicit PowersetMaximal(ModelPtr powerset) : m_(std::move(powerset)) {
    if (!m_->is_powerset()) throw Error(ErrorCode::UnsupportedSource, "maximal powerset map needs a powerset model");
    const std::size_t n = m_->size();
    ne_.assign(n, true);
    for (bool changed = true; changed;) {
      changed = false;
      for (StateId x = 0; x < n; ++x) {
        if (!ne_[x]) continue;
        bool any = false;
        for (StateId y : m_->succ[x]) any = any || ne_[y];
        if (!any) {
          ne_[x] = false;
          changed = true;
        }
      }
    }
  }

  const Model& model() const noexcept { return *m_; }
  /// Whether some infinite path starts at x.
  bool has_path(StateId x) const { return ne_[x]; }

  Elem value(StateId x, const Shape& s) const {
    const Lattice& l = m_->lat();
    if (!ne_[x]) return l.bottom();
    switch (s.kind) {
      case Shape::Kind::Const: return s.a;
      case Shape::Kind::Head: return s.p[x];
      case Shape::Kind::Second: {
        Elem r = l.bottom();
        for (StateId y : m_->succ[x])
          if (ne_[y]) r = l.join(r, s.p[y]);
        return r;
      }
      case Shape::Kind::Until: return l.join(s.a, l.meet(s.b, exists_until(s.p, s.q)[x]));
      case Shape::Kind::WUntil: return l.meet(s.a, l.join(s.b, exists_wuntil(s.p, s.q)[x]));
    }
    throw Error(ErrorCode::Internal, "bad shape");
  }

  /// Least V with V(x) = goal(x) ⊔ (hold(x) ⊓ ⊔_{y ∈ succ(x)} V(y)) on states with paths, ⊥ elsewhere.
  Predicate exists_until(const Predicate& hold, const Predicate& goal) const {
    return solve(Extremity::Least, [&](StateId x, Elem next) {
      return m_->lat().join(goal[x], m_->lat().meet(hold[x], next));
    });
  }

  /// Greatest V with V(x) = k1(x) ⊓ (k2(x) ⊔ ⊔_{y ∈ succ(x)} V(y)) on states with paths, ⊥ elsewhere.
  Predicate exists_wuntil(const Predicate& k1, const Predicate& k2) const {
    return solve(Extremity::Greatest, [&](StateId x, Elem next) {
      return m_->lat().meet(k1[x], m_->lat().join(k2[x], next));
    });
  }

 private:
  template <class F>
  Predicate solve(Extremity ext, F&& local) const {
    const Lattice& l = m_->lat();
    const std::size_t n = m_->size();
    Predicate start(n, l.bottom());
    for (StateId x = 0; x < n; ++x)
      if (ne_[x] && ext == Extremity::Greatest) start[x] = l.top();
    return kleene_fixpoint(
               std::move(start),
               [&](const Predicate& v) {
                 Predicate r(n, l.bottom());
                 for (StateId x = 0; x < n; ++x) {
                   if (!ne_[x]) continue;
                   Elem next = l.bottom();
                   for (StateId y : m_->succ[x])
                     if (ne_[y]) next = l.join(next, v[y]);
                   r[x] = local(x, next);
                 }
                 return r;
               },
               chain_cap(l, n))
        .value;
  }

  ModelPtr m_;
  std::vector<bool> ne_;
};

inline Elem transferred_execution_eval(const ModelPtr& powerset, StateId x, const Shape& s) {
  return PowersetMaximal(powerset).value(x, s);
}

// ---------------------------------------------------------------------------
// Handles

/// A queryable execution map over a continuation model.
class ExecutionMapHandle {
 public:
  enum class Backend { ContinuationMin, ContinuationMax, PowersetMaximal, PowersetMinimal, Custom };

  static ExecutionMapHandle continuation(ModelPtr m, ExecPolarity pol, IterationLimits lim = {}) {
    ExecutionMapHandle h;
    h.backend_ = pol == ExecPolarity::Min ? Backend::ContinuationMin : Backend::ContinuationMax;
    h.model_ = m;
    h.table_ = std::make_shared<ShapeTable>(std::move(m), pol, lim);
    return h;
  }

  /// The transferred maximal map of a powerset model; `model()` is its continuation transfer.
  static ExecutionMapHandle powerset_maximal(const ModelPtr& powerset) {
    ExecutionMapHandle h;
    h.backend_ = Backend::PowersetMaximal;
    h.pmax_ = std::make_shared<const PowersetMaximal>(powerset);
    h.model_ = std::make_shared<const Model>(to_continuation(*powerset));
    return h;
  }

  /// The transferred minimal (empty) powerset map: every path set is ∅.
  static ExecutionMapHandle powerset_minimal(const ModelPtr& powerset) {
    if (!powerset->is_powerset()) throw Error(ErrorCode::UnsupportedSource, "minimal powerset map needs a powerset model");
    ExecutionMapHandle h;
    h.backend_ = Backend::PowersetMinimal;
    h.model_ = std::make_shared<const Model>(to_continuation(*powerset));
    return h;
  }

  /// Wraps an arbitrary shape map over a continuation model.
  static ExecutionMapHandle custom(ModelPtr m, ShapeMap u) {
    ExecutionMapHandle h;
    h.backend_ = Backend::Custom;
    h.model_ = std::move(m);
    h.custom_ = std::move(u);
    return h;
  }

  Backend backend() const noexcept { return backend_; }
  const Model& model() const noexcept { return *model_; }
  const ModelPtr& model_ptr() const noexcept { return model_; }
  ShapeTable* table() const noexcept { return table_.get(); }

  Elem value(StateId x, const Shape& s) const {
    switch (backend_) {
      case Backend::ContinuationMin:
      case Backend::ContinuationMax: return table_->value(x, s);
      case Backend::PowersetMaximal: return pmax_->value(x, s);
      case Backend::PowersetMinimal: return model_->lat().bottom();
      case Backend::Custom: return custom_(x, s);
    }
    throw Error(ErrorCode::Internal, "bad handle");
  }

  ShapeMap as_map() const {
    return [h = *this](StateId x, const Shape& s) { return h.value(x, s); };
  }

 private:
  Backend backend_ = Backend::Custom;
  ModelPtr model_;
  std::shared_ptr<ShapeTable> table_;
  std::shared_ptr<const PowersetMaximal> pmax_;
  ShapeMap custom_;
};

}  // namespace latmc
