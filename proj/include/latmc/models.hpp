#pragma once

// Finite-state models: labelings, coalgebras for the concrete branching monads,
// their canonical predicate liftings, and the transfer into continuation coalgebras.

#include <cstdint>
#include <functional>
#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "latmc/error.hpp"
#include "latmc/fixpoint.hpp"
#include "latmc/lattice.hpp"
#include "latmc/predicate.hpp"

namespace latmc {

enum class MonadKind { Powerset, NonemptyPowerset, Weighted, AffineWeighted, Neighborhood, Continuation };

constexpr std::string_view to_string(MonadKind k) {
  switch (k) {
    case MonadKind::Powerset: return "powerset";
    case MonadKind::NonemptyPowerset: return "nonempty_powerset";
    case MonadKind::Weighted: return "weighted";
    case MonadKind::AffineWeighted: return "affine_weighted";
    case MonadKind::Neighborhood: return "neighborhood";
    case MonadKind::Continuation: return "continuation";
  }
  return "?";
}

inline MonadKind monad_kind_from_string(std::string_view s) {
  for (auto k : {MonadKind::Powerset, MonadKind::NonemptyPowerset, MonadKind::Weighted, MonadKind::AffineWeighted,
                 MonadKind::Neighborhood, MonadKind::Continuation})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::BadDocument, "unknown coalgebra kind '" + std::string(s) + "'");
}

enum class Polarity { Dia, Box };

/// A monotone map Ω^X → Ω, i.e. an element of K^m X.
class Evaluator {
 public:
  enum class Backend { FullTable, LatticeExpr, Lifted };

  Evaluator() = default;

  static Evaluator table(std::size_t lattice_size, std::size_t states, std::vector<Elem> values) {
    PredicateSpace space(lattice_size, states);
    if (!space.within(values.size()) || space.count() != values.size()) {
      throw Error(ErrorCode::BadDocument, "table has " + std::to_string(values.size()) + " entries, expected " +
                                              std::to_string(space.count()));
    }
    Evaluator e;
    e.backend_ = Backend::FullTable;
    e.table_ = std::make_shared<const std::vector<Elem>>(std::move(values));
    e.fn_ = [space, t = e.table_](const Predicate& k) { return (*t)[space.encode(k)]; };
    return e;
  }

  static Evaluator expression(LatticePtr l, LatticeTerm term) {
    Evaluator e;
    e.backend_ = Backend::LatticeExpr;
    e.expr_ = std::make_shared<const LatticeTerm>(std::move(term));
    e.fn_ = [l, t = e.expr_](const Predicate& k) { return evaluate(*l, *t, k.values); };
    return e;
  }

  static Evaluator lifted(std::function<Elem(const Predicate&)> fn) {
    Evaluator e;
    e.backend_ = Backend::Lifted;
    e.fn_ = std::move(fn);
    return e;
  }

  Elem operator()(const Predicate& k) const { return fn_(k); }
  Backend backend() const noexcept { return backend_; }
  const std::vector<Elem>* table_values() const noexcept { return table_.get(); }
  const LatticeTerm* term() const noexcept { return expr_.get(); }

  /// Tabulates over all of Ω^X; the original backend stays recorded.
  void materialize(std::size_t lattice_size, std::size_t states) {
    if (table_) return;
    PredicateSpace space(lattice_size, states);
    std::vector<Elem> values;
    values.reserve(space.count());
    space.for_each([&](const Predicate& k) { values.push_back(fn_(k)); });
    table_ = std::make_shared<const std::vector<Elem>>(std::move(values));
    fn_ = [space, t = table_](const Predicate& k) { return (*t)[space.encode(k)]; };
  }

 private:
  Backend backend_ = Backend::Lifted;
  std::function<Elem(const Predicate&)> fn_;
  std::shared_ptr<const std::vector<Elem>> table_;
  std::shared_ptr<const LatticeTerm> expr_;
};

struct Model;
using ModelPtr = std::shared_ptr<const Model>;

struct Model {
  LatticePtr lattice;
  std::vector<std::string> states;
  std::map<std::string, Predicate> labels;
  MonadKind kind = MonadKind::Powerset;

  std::vector<std::vector<StateId>> succ;    // Powerset, NonemptyPowerset
  std::vector<std::vector<Elem>> weight;     // Weighted kinds: weight[x][y]
  std::vector<std::vector<std::uint32_t>> nbhd;  // Neighborhood: upward-closed families as bitmasks
  std::vector<Evaluator> cont;               // Continuation

  /// Continuation flavour: K^{a,m} when every successor satisfies h(λ_.a) = a.
  bool affine = false;
  /// False when monotonicity was only sampled.
  bool monotonicity_verified = true;
  /// The concrete model this continuation model was transferred from, if any.
  ModelPtr source;
  std::vector<std::string> notes;

  std::size_t size() const noexcept { return states.size(); }
  const Lattice& lat() const { return *lattice; }

  StateId state(std::string_view name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return i;
    throw Error(ErrorCode::UnknownState, "unknown state '" + std::string(name) + "'");
  }

  const Predicate& label(const std::string& atom) const {
    auto it = labels.find(atom);
    if (it == labels.end()) throw Error(ErrorCode::UnknownAtom, "atom '" + atom + "' has no labeling");
    return it->second;
  }

  bool is_powerset() const noexcept { return kind == MonadKind::Powerset || kind == MonadKind::NonemptyPowerset; }
};

inline std::vector<std::string> default_state_names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("s" + std::to_string(i));
  return v;
}

// ---------------------------------------------------------------------------
// Liftings

namespace detail {
inline Elem dia_value(const Model& m, StateId x, const Predicate& k) {
  const Lattice& l = m.lat();
  switch (m.kind) {
    case MonadKind::Powerset:
    case MonadKind::NonemptyPowerset: {
      Elem r = l.bottom();
      for (StateId y : m.succ[x]) r = l.join(r, k[y]);
      return r;
    }
    case MonadKind::Weighted:
    case MonadKind::AffineWeighted: {
      Elem r = l.bottom();
      for (StateId y = 0; y < m.size(); ++y) r = l.join(r, l.meet(m.weight[x][y], k[y]));
      return r;
    }
    case MonadKind::Neighborhood: {
      Elem r = l.bottom();
      for (std::uint32_t s : m.nbhd[x]) {
        Elem inner = l.top();
        for (StateId y = 0; y < m.size(); ++y)
          if (s >> y & 1u) inner = l.meet(inner, k[y]);
        r = l.join(r, inner);
      }
      return r;
    }
    case MonadKind::Continuation: return m.cont[x](k);
  }
  throw Error(ErrorCode::Internal, "bad monad kind");
}
}  // namespace detail

/// ◇(k)(c(x)) for the monad's canonical lifting; □ is its de Morgan dual.
inline Elem lift_eval(const Model& m, Polarity pol, StateId x, const Predicate& k) {
  if (pol == Polarity::Dia) return detail::dia_value(m, x, k);
  const Lattice& l = m.lat();
  return l.neg(detail::dia_value(m, x, pointwise_neg(l, k)));
}

/// succ(x)(k) on a continuation model.
inline Elem successor_eval(const Model& m, StateId x, const Predicate& k) {
  if (m.kind != MonadKind::Continuation) throw Error(ErrorCode::PreconditionFailed, "successor_eval needs a continuation model");
  return m.cont[x](k);
}

inline bool evaluator_is_affine(const Lattice& l, std::size_t n, const Evaluator& h) {
  for (Elem a : l.elements())
    if (h(constant_predicate(n, a)) != a) return false;
  return true;
}

inline bool model_is_affine(const Model& m) {
  for (StateId x = 0; x < m.size(); ++x)
    if (!evaluator_is_affine(m.lat(), m.size(), m.cont[x])) return false;
  return true;
}

/// Replaces the coalgebra by x ↦ (k ↦ ◇(k)(c(x))), keeping states and labels.
inline Model to_continuation(const Model& m) {
  if (m.kind == MonadKind::Continuation) return m;
  auto src = std::make_shared<const Model>(m);
  Model r;
  r.lattice = m.lattice;
  r.states = m.states;
  r.labels = m.labels;
  r.kind = MonadKind::Continuation;
  r.source = src;
  for (StateId x = 0; x < m.size(); ++x)
    r.cont.push_back(Evaluator::lifted([src, x](const Predicate& k) { return detail::dia_value(*src, x, k); }));
  r.affine = model_is_affine(r);
  return r;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Predicate random_predicate(std::mt19937_64& rng, std::size_t lattice_size, std::size_t n) {
  Predicate p(n, 0);
  for (auto& v : p.values) v = static_cast<Elem>(rng() % lattice_size);
  return p;
}
}  // namespace detail

/// Checks h(k) ⊑ h(k') along every cover k ⋖ k' (exhaustive), or on sampled
/// cover pairs when Ω^X exceeds `bound`. Returns whether the check was exhaustive.
inline bool check_monotone(const Lattice& l, std::size_t n, const Evaluator& h, std::size_t bound, std::uint64_t seed,
                           const std::string& what) {
  PredicateSpace space(l.size(), n);
  auto check_covers = [&](const Predicate& k) {
    const Elem hk = h(k);
    for (StateId y = 0; y < n; ++y) {
      for (Elem up : l.upper_covers(k[y])) {
        Predicate k2 = k;
        k2[y] = up;
        if (!l.leq(hk, h(k2))) throw Error(ErrorCode::NotMonotone, what + " is not monotone");
      }
    }
  };
  if (space.within(bound)) {
    space.for_each(check_covers);
    return true;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < 256; ++i) check_covers(detail::random_predicate(rng, l.size(), n));
  return false;
}

/// Load-time invariants of each coalgebra kind. Also completes neighborhood
/// families upward and materializes small expression evaluators.
inline void validate_model(Model& m, const IterationLimits& lim = {}, std::optional<bool> declared_affine = {}) {
  if (!m.lattice) throw Error(ErrorCode::BadDocument, "model has no lattice");
  const Lattice& l = m.lat();
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorCode::BadDocument, "model has no states");
  for (const auto& [atom, pred] : m.labels) {
    if (pred.size() != n) throw Error(ErrorCode::BadDocument, "labeling of '" + atom + "' is not total");
    for (Elem v : pred.values)
      if (v >= l.size()) throw Error(ErrorCode::LatticeMismatch, "labeling of '" + atom + "' leaves the lattice");
  }
  switch (m.kind) {
    case MonadKind::Powerset:
    case MonadKind::NonemptyPowerset:
      if (m.succ.size() != n) throw Error(ErrorCode::BadDocument, "successor relation is not total");
      for (StateId x = 0; x < n; ++x) {
        for (StateId y : m.succ[x])
          if (y >= n) throw Error(ErrorCode::UnknownState, "successor index out of range");
        if (m.kind == MonadKind::NonemptyPowerset && m.succ[x].empty())
          throw Error(ErrorCode::EmptySuccessor, "state '" + m.states[x] + "' has no successor");
      }
      break;
    case MonadKind::Weighted:
    case MonadKind::AffineWeighted:
      if (m.weight.size() != n) throw Error(ErrorCode::BadDocument, "weight table is not total");
      for (StateId x = 0; x < n; ++x) {
        if (m.weight[x].size() != n) throw Error(ErrorCode::BadDocument, "weight row is not total");
        for (Elem v : m.weight[x])
          if (v >= l.size()) throw Error(ErrorCode::LatticeMismatch, "weight leaves the lattice");
        if (m.kind == MonadKind::AffineWeighted && l.join_all(m.weight[x]) != l.top())
          throw Error(ErrorCode::NotAffine, "weights of state '" + m.states[x] + "' do not join to the top element");
      }
      break;
    case MonadKind::Neighborhood: {
      if (l.size() != 2) throw Error(ErrorCode::LatticeMismatch, "neighborhood models require bool2");
      if (n > 16) throw Error(ErrorCode::TooLarge, "neighborhood models are limited to 16 states");
      if (m.nbhd.size() != n) throw Error(ErrorCode::BadDocument, "neighborhood function is not total");
      const std::uint32_t full = (1u << n) - 1;
      for (StateId x = 0; x < n; ++x) {
        std::vector<bool> member(full + 1, false);
        for (std::uint32_t s : m.nbhd[x]) {
          if (s > full) throw Error(ErrorCode::UnknownState, "neighborhood set mentions an unknown state");
          member[s] = true;
        }
        std::size_t added = 0;
        for (std::uint32_t s = 0; s <= full; ++s) {
          if (member[s]) continue;
          for (std::uint32_t t : m.nbhd[x]) {
            if ((t & s) == t) {
              member[s] = true;
              ++added;
              break;
            }
          }
        }
        std::vector<std::uint32_t> closed;
        for (std::uint32_t s = 0; s <= full; ++s)
          if (member[s]) closed.push_back(s);
        if (added) m.notes.push_back("neighborhood of '" + m.states[x] + "' completed upward with " +
                                     std::to_string(added) + " sets");
        m.nbhd[x] = std::move(closed);
      }
      break;
    }
    case MonadKind::Continuation: {
      if (m.cont.size() != n) throw Error(ErrorCode::BadDocument, "continuation successors are not total");
      PredicateSpace space(l.size(), n);
      const bool small = space.within(lim.materialize_bound);
      for (StateId x = 0; x < n; ++x) {
        auto& h = m.cont[x];
        const bool needs_check = h.backend() == Evaluator::Backend::FullTable ||
                                 (h.backend() == Evaluator::Backend::LatticeExpr && h.term()->uses_negation());
        if (h.backend() == Evaluator::Backend::LatticeExpr && small) h.materialize(l.size(), n);
        if (needs_check) {
          const bool exhaustive = check_monotone(l, n, h, lim.materialize_bound, detail::mix_seed(0, x),
                                                 "successor of '" + m.states[x] + "'");
          if (!exhaustive) {
            m.monotonicity_verified = false;
            m.notes.push_back("monotonicity of '" + m.states[x] + "' sampled, unverified");
          }
        }
      }
      const bool is_affine = model_is_affine(m);
      if (declared_affine && *declared_affine && !is_affine)
        throw Error(ErrorCode::NotAffine, "declared affine but some successor moves a constant continuation");
      m.affine = declared_affine ? *declared_affine : is_affine;
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Constant-linearity

struct ConstantLinearWitness {
  StateId state;
  Elem constant;
  Predicate continuation;
  bool meet_side;  // false: the ⊔ equation failed
};

struct ConstantLinearReport {
  bool pass = true;
  bool exhaustive = true;
  std::vector<bool> per_state;
  std::vector<ConstantLinearWitness> failures;
};

/// succ(x)(a ⊓ k) = a ⊓ succ(x)(k) and succ(x)(a ⊔ k) = a ⊔ succ(x)(k).
inline ConstantLinearReport check_constant_linear(const Model& m, std::size_t bound = 4096, std::uint64_t seed = 0,
                                                  std::size_t samples = 512) {
  if (m.kind != MonadKind::Continuation) throw Error(ErrorCode::PreconditionFailed, "constant-linearity needs a continuation model");
  const Lattice& l = m.lat();
  const std::size_t n = m.size();
  ConstantLinearReport rep;
  rep.per_state.assign(n, true);
  auto check = [&](StateId x, const Predicate& k) {
    const Elem hk = m.cont[x](k);
    for (Elem a : l.elements()) {
      Predicate km = k, kj = k;
      for (StateId y = 0; y < n; ++y) {
        km[y] = l.meet(a, k[y]);
        kj[y] = l.join(a, k[y]);
      }
      if (m.cont[x](km) != l.meet(a, hk)) {
        rep.per_state[x] = false;
        if (rep.failures.size() < 16) rep.failures.push_back({x, a, k, true});
      }
      if (m.cont[x](kj) != l.join(a, hk)) {
        rep.per_state[x] = false;
        if (rep.failures.size() < 16) rep.failures.push_back({x, a, k, false});
      }
    }
  };
  PredicateSpace space(l.size(), n);
  if (space.within(bound)) {
    for (StateId x = 0; x < n; ++x) space.for_each([&](const Predicate& k) { check(x, k); });
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (StateId x = 0; x < n; ++x)
      for (std::size_t i = 0; i < samples; ++i) check(x, detail::random_predicate(rng, l.size(), n));
  }
  for (bool b : rep.per_state) rep.pass = rep.pass && b;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {
inline Elem element_from_json(const Lattice& l, const nlohmann::json& j) {
  if (j.is_string()) return l.element(j.get<std::string>());
  return l.element(j.dump());
}

inline LatticeTerm term_from_json(const Model& m, const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) throw Error(ErrorCode::BadDocument, "expression node must be a one-key object: " + j.dump());
  const auto& [key, val] = *j.items().begin();
  if (key == "k") return LatticeTerm::variable(m.state(val.get<std::string>()));
  if (key == "const") return LatticeTerm::constant(m.lat().tag(element_from_json(m.lat(), val)));
  if (key == "neg") return LatticeTerm::negate(term_from_json(m, val));
  if (key == "join" || key == "meet") {
    std::vector<LatticeTerm> args;
    for (const auto& a : val) args.push_back(term_from_json(m, a));
    return key == "join" ? LatticeTerm::big_join(std::move(args)) : LatticeTerm::big_meet(std::move(args));
  }
  throw Error(ErrorCode::BadDocument, "unknown expression node '" + key + "'");
}

inline nlohmann::json term_to_json(const Model& m, const LatticeTerm& t) {
  using Op = LatticeTerm::Op;
  switch (t.op) {
    case Op::Const: return {{"const", m.lat().element_name(t.value.index)}};
    case Op::Var: return {{"k", m.states[t.var]}};
    case Op::Neg: return {{"neg", term_to_json(m, t.args[0])}};
    case Op::Join:
    case Op::BigJoin:
    case Op::Meet:
    case Op::BigMeet: {
      nlohmann::json args = nlohmann::json::array();
      for (const auto& a : t.args) args.push_back(term_to_json(m, a));
      const bool join = t.op == Op::Join || t.op == Op::BigJoin;
      return {{join ? "join" : "meet", args}};
    }
  }
  return nullptr;
}
}  // namespace detail

inline Model load_model(const nlohmann::json& doc, const IterationLimits& lim = {}) {
  if (!doc.is_object()) throw Error(ErrorCode::BadDocument, "model must be a JSON object");
  Model m;
  m.lattice = std::make_shared<const Lattice>(load_lattice(doc.at("lattice")));
  const Lattice& l = *m.lattice;
  for (const auto& s : doc.at("states")) m.states.push_back(s.get<std::string>());
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m.states[i] == m.states[j]) throw Error(ErrorCode::BadDocument, "duplicate state '" + m.states[i] + "'");

  if (doc.contains("atoms")) {
    for (const auto& [atom, vals] : doc.at("atoms").items()) {
      Predicate p(n, l.bottom());
      if (vals.is_array()) {
        for (const auto& s : vals) p[m.state(s.get<std::string>())] = l.top();
      } else {
        for (const auto& [s, v] : vals.items()) p[m.state(s)] = detail::element_from_json(l, v);
      }
      m.labels[atom] = std::move(p);
    }
  }

  const auto& co = doc.at("coalgebra");
  m.kind = monad_kind_from_string(co.at("kind").get<std::string>());
  std::optional<bool> declared_affine;
  switch (m.kind) {
    case MonadKind::Powerset:
    case MonadKind::NonemptyPowerset:
      m.succ.assign(n, {});
      if (co.contains("succ"))
        for (const auto& [s, ys] : co.at("succ").items())
          for (const auto& y : ys) m.succ[m.state(s)].push_back(m.state(y.get<std::string>()));
      for (auto& ys : m.succ) {
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
      }
      break;
    case MonadKind::Weighted:
    case MonadKind::AffineWeighted:
      m.weight.assign(n, std::vector<Elem>(n, l.bottom()));
      if (co.contains("w"))
        for (const auto& [s, row] : co.at("w").items())
          for (const auto& [t, v] : row.items()) m.weight[m.state(s)][m.state(t)] = detail::element_from_json(l, v);
      break;
    case MonadKind::Neighborhood:
      if (n > 16) throw Error(ErrorCode::TooLarge, "neighborhood models are limited to 16 states");
      m.nbhd.assign(n, {});
      if (co.contains("nbhd"))
        for (const auto& [s, fam] : co.at("nbhd").items())
          for (const auto& set : fam) {
            std::uint32_t mask = 0;
            for (const auto& y : set) mask |= 1u << m.state(y.get<std::string>());
            m.nbhd[m.state(s)].push_back(mask);
          }
      break;
    case MonadKind::Continuation: {
      if (co.contains("affine")) declared_affine = co.at("affine").get<bool>();
      const auto& sc = co.at("succ");
      for (const auto& s : m.states) {
        if (!sc.contains(s)) throw Error(ErrorCode::BadDocument, "no successor evaluator for state '" + s + "'");
        const auto& e = sc.at(s);
        if (e.contains("table")) {
          std::vector<Elem> vals;
          for (const auto& v : e.at("table")) vals.push_back(detail::element_from_json(l, v));
          m.cont.push_back(Evaluator::table(l.size(), n, std::move(vals)));
        } else if (e.contains("expr")) {
          m.cont.push_back(Evaluator::expression(m.lattice, detail::term_from_json(m, e.at("expr"))));
        } else {
          throw Error(ErrorCode::BadDocument, "successor of '" + s + "' needs a table or an expr");
        }
      }
      break;
    }
  }
  validate_model(m, lim, declared_affine);
  return m;
}

inline nlohmann::json model_to_json(const Model& m) {
  using nlohmann::json;
  const Lattice& l = m.lat();
  json doc;
  doc["lattice"] = l.name();
  doc["states"] = m.states;
  json atoms = json::object();
  for (const auto& [a, p] : m.labels) {
    json vals = json::object();
    for (StateId x = 0; x < m.size(); ++x) vals[m.states[x]] = l.element_name(p[x]);
    atoms[a] = vals;
  }
  doc["atoms"] = atoms;
  json co;
  co["kind"] = std::string(to_string(m.kind));
  switch (m.kind) {
    case MonadKind::Powerset:
    case MonadKind::NonemptyPowerset: {
      json succ = json::object();
      for (StateId x = 0; x < m.size(); ++x) {
        json ys = json::array();
        for (StateId y : m.succ[x]) ys.push_back(m.states[y]);
        succ[m.states[x]] = ys;
      }
      co["succ"] = succ;
      break;
    }
    case MonadKind::Weighted:
    case MonadKind::AffineWeighted: {
      json w = json::object();
      for (StateId x = 0; x < m.size(); ++x) {
        json row = json::object();
        for (StateId y = 0; y < m.size(); ++y)
          if (m.weight[x][y] != l.bottom()) row[m.states[y]] = l.element_name(m.weight[x][y]);
        w[m.states[x]] = row;
      }
      co["w"] = w;
      break;
    }
    case MonadKind::Neighborhood: {
      json nb = json::object();
      for (StateId x = 0; x < m.size(); ++x) {
        json fam = json::array();
        for (std::uint32_t s : m.nbhd[x]) {
          json set = json::array();
          for (StateId y = 0; y < m.size(); ++y)
            if (s >> y & 1u) set.push_back(m.states[y]);
          fam.push_back(set);
        }
        nb[m.states[x]] = fam;
      }
      co["nbhd"] = nb;
      break;
    }
    case MonadKind::Continuation: {
      co["affine"] = m.affine;
      json succ = json::object();
      for (StateId x = 0; x < m.size(); ++x) {
        Evaluator h = m.cont[x];
        if (h.term()) {
          succ[m.states[x]] = {{"expr", detail::term_to_json(m, *h.term())}};
          continue;
        }
        h.materialize(l.size(), m.size());
        json t = json::array();
        for (Elem v : *h.table_values()) t.push_back(l.element_name(v));
        succ[m.states[x]] = {{"table", t}};
      }
      co["succ"] = succ;
      break;
    }
  }
  doc["coalgebra"] = co;
  return doc;
}

inline nlohmann::json predicate_to_json(const Model& m, const Predicate& p) {
  nlohmann::json j = nlohmann::json::object();
  for (StateId x = 0; x < m.size(); ++x) j[m.states[x]] = m.lat().element_name(p[x]);
  return j;
}

inline Predicate predicate_from_json(const Model& m, const nlohmann::json& j) {
  Predicate p(m.size(), m.lat().bottom());
  for (const auto& [s, v] : j.items()) p[m.state(s)] = detail::element_from_json(m.lat(), v);
  return p;
}

}  // namespace latmc
