#pragma once

// Seeded random models and formulas for differential testing.
// Knobs: states ≤ 5, formula depth ≤ 5, |Ω| ≤ 4 by default.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "latmc/models.hpp"
#include "latmc/syntax.hpp"

namespace latmc::corpus {

struct Knobs {
  std::size_t max_states = 5;
  std::size_t max_depth = 5;
  std::vector<std::string> lattices{"bool2", "chain3", "chain4", "square2"};
  std::vector<std::string> atoms{"p", "q", "r"};
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed, Knobs knobs = {}) : rng_(seed), knobs_(std::move(knobs)) {}

  std::mt19937_64& rng() noexcept { return rng_; }
  const Knobs& knobs() const noexcept { return knobs_; }

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin(double p = 0.5) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  LatticePtr lattice(const std::string& name) { return std::make_shared<const Lattice>(Lattice::builtin(name)); }
  LatticePtr any_lattice() { return lattice(knobs_.lattices[below(knobs_.lattices.size())]); }

  /// A validated concrete model of the given kind.
  Model model(MonadKind kind, LatticePtr l, std::size_t n) {
    Model m;
    m.lattice = std::move(l);
    m.states = default_state_names(n);
    m.kind = kind;
    label(m);
    const Lattice& lat = m.lat();
    switch (kind) {
      case MonadKind::Powerset:
      case MonadKind::NonemptyPowerset:
        m.succ.assign(n, {});
        for (StateId x = 0; x < n; ++x) {
          for (StateId y = 0; y < n; ++y)
            if (coin(0.4)) m.succ[x].push_back(y);
          if (kind == MonadKind::NonemptyPowerset && m.succ[x].empty()) m.succ[x].push_back(below(n));
        }
        break;
      case MonadKind::Weighted:
      case MonadKind::AffineWeighted:
        m.weight.assign(n, std::vector<Elem>(n, lat.bottom()));
        for (StateId x = 0; x < n; ++x) {
          for (StateId y = 0; y < n; ++y)
            if (coin(0.6)) m.weight[x][y] = static_cast<Elem>(below(lat.size()));
          if (kind == MonadKind::AffineWeighted && lat.join_all(m.weight[x]) != lat.top())
            m.weight[x][below(n)] = lat.top();
        }
        break;
      case MonadKind::Neighborhood:
        m.nbhd.assign(n, {});
        for (StateId x = 0; x < n; ++x) {
          const std::size_t gens = below(3);
          for (std::size_t g = 0; g < gens; ++g) m.nbhd[x].push_back(static_cast<std::uint32_t>(below(std::size_t{1} << n)));
        }
        break;
      case MonadKind::Continuation: throw Error(ErrorCode::PreconditionFailed, "use constant_linear() for continuation models");
    }
    validate_model(m);
    return m;
  }

  /// A random concrete model with any kind, lattice and size in range.
  Model any_model() {
    static const MonadKind kinds[] = {MonadKind::Powerset, MonadKind::NonemptyPowerset, MonadKind::Weighted,
                                      MonadKind::AffineWeighted, MonadKind::Neighborhood};
    const MonadKind k = kinds[below(5)];
    const std::size_t n = 1 + below(knobs_.max_states);
    return model(k, k == MonadKind::Neighborhood ? lattice("bool2") : any_lattice(), n);
  }

  /// Continuation model with successors h(k) = ⊔ᵢ cᵢ ⊓ ⊓_{y ∈ Sᵢ} k(y), ⊔ᵢ cᵢ = ⊤, Sᵢ ≠ ∅.
  /// Such successors are affine and constant-linear.
  Model constant_linear(LatticePtr l, std::size_t n) {
    Model m;
    m.lattice = l;
    m.states = default_state_names(n);
    m.kind = MonadKind::Continuation;
    label(m);
    const Lattice& lat = *l;
    for (StateId x = 0; x < n; ++x) {
      const std::size_t terms = 1 + below(3);
      std::vector<Elem> cs(terms);
      for (auto& c : cs) c = static_cast<Elem>(below(lat.size()));
      if (lat.join_all(cs) != lat.top()) cs[below(terms)] = lat.top();
      std::vector<LatticeTerm> disjuncts;
      for (Elem c : cs) {
        std::vector<LatticeTerm> conj{LatticeTerm::constant(lat.tag(c))};
        const std::uint32_t mask = 1u + static_cast<std::uint32_t>(below((std::size_t{1} << n) - 1));
        for (StateId y = 0; y < n; ++y)
          if (mask >> y & 1u) conj.push_back(LatticeTerm::variable(y));
        disjuncts.push_back(LatticeTerm::big_meet(std::move(conj)));
      }
      m.cont.push_back(Evaluator::expression(l, LatticeTerm::big_join(std::move(disjuncts))));
    }
    validate_model(m, {}, true);
    return m;
  }

  /// Closed FML formula; negated atoms and boxes only when `involution`.
  FmlPtr fml(std::size_t depth, bool involution) {
    std::vector<std::string> vars;
    return fml_rec(depth, involution, vars);
  }

  /// CTL formula; A, negated atoms only when `involution`. U/W usage per flags.
  CtlPtr ctl(std::size_t depth, bool involution, bool allow_until = true, bool allow_wuntil = true) {
    if (depth == 0 || coin(0.2)) return ctl_leaf(involution);
    const std::size_t pick = below(6);
    if (pick == 0) return ctl::conj(ctl(depth - 1, involution, allow_until, allow_wuntil),
                                    ctl(depth - 1, involution, allow_until, allow_wuntil));
    if (pick == 1) return ctl::disj(ctl(depth - 1, involution, allow_until, allow_wuntil),
                                    ctl(depth - 1, involution, allow_until, allow_wuntil));
    const bool universal = involution && coin();
    auto quant = [&](CtlPtr p) { return universal ? ctl::A(std::move(p)) : ctl::E(std::move(p)); };
    auto sub = [&] { return ctl::lift(ctl(depth - 1, involution, allow_until, allow_wuntil)); };
    std::vector<int> ops{0, 1};
    if (allow_until) ops.push_back(2);
    if (allow_wuntil) ops.push_back(3);
    switch (ops[below(ops.size())]) {
      case 0: return quant(ctl::next(sub()));
      case 1: return quant(sub());
      case 2: return quant(ctl::until(sub(), sub()));
      default: return quant(ctl::wuntil(sub(), sub()));
    }
  }

  std::string atom() { return knobs_.atoms[below(knobs_.atoms.size())]; }

 private:
  void label(Model& m) {
    for (const auto& a : knobs_.atoms) m.labels[a] = detail::random_predicate(rng_, m.lat().size(), m.size());
  }

  FmlPtr fml_leaf(bool involution, const std::vector<std::string>& vars) {
    const std::size_t pick = below(vars.empty() ? 4 : 6);
    if (pick >= 4) return fml::var(vars[below(vars.size())]);
    if (pick == 0) return fml::tt();
    if (pick == 1) return fml::ff();
    if (involution && coin(0.3)) return fml::neg_atom(atom());
    return fml::atom(atom());
  }

  FmlPtr fml_rec(std::size_t depth, bool involution, std::vector<std::string>& vars) {
    if (depth == 0 || coin(0.15)) return fml_leaf(involution, vars);
    switch (below(6)) {
      case 0: return fml::conj(fml_rec(depth - 1, involution, vars), fml_rec(depth - 1, involution, vars));
      case 1: return fml::disj(fml_rec(depth - 1, involution, vars), fml_rec(depth - 1, involution, vars));
      case 2:
      case 3: {
        auto body = fml_rec(depth - 1, involution, vars);
        return involution && coin() ? fml::box(body) : fml::dia(body);
      }
      default: {
        const std::string v = "u" + std::to_string(vars.size());
        vars.push_back(v);
        auto body = fml_rec(depth - 1, involution, vars);
        vars.pop_back();
        return coin() ? fml::mu(v, body) : fml::nu(v, body);
      }
    }
  }

  CtlPtr ctl_leaf(bool involution) {
    const std::size_t pick = below(5);
    if (pick == 0) return ctl::tt();
    if (pick == 1) return ctl::ff();
    if (involution && pick == 2) return ctl::neg_atom(atom());
    return ctl::atom(atom());
  }

  std::mt19937_64 rng_;
  Knobs knobs_;
};

inline bool uses_negation(const CtlPtr& f) {
  return f && (f->kind == CtlKind::NegAtom || f->kind == CtlKind::A || f->kind == CtlKind::Not ||
               f->kind == CtlKind::PathNot || uses_negation(f->left) || uses_negation(f->right));
}

/// A fixed, hand-picked CTL corpus followed by seeded random formulas, `count` in total.
inline std::vector<CtlPtr> ctl_corpus(std::size_t count, std::uint64_t seed, bool involution = true) {
  std::vector<CtlPtr> out;
  for (const char* s : {"EX p", "AX p", "E(tt U p)", "A(tt U p)", "E(p W ff)", "A(p W ff)", "E(p U q)", "A(p U q)",
                        "E(p W q)", "A(p W q)", "EX AX p", "E(p U E(q W r))", "A(~p U q) /\\ EX r", "E(tt U ~p)",
                        "A(tt U ~p)", "E p", "A(q W p) \\/ E(r U ~q)"}) {
    if (out.size() == count) return out;
    auto f = parse_ctl(s).root;
    if (involution || !uses_negation(f)) out.push_back(f);
  }
  Generator g(seed);
  while (out.size() < count) out.push_back(g.ctl(3, involution));
  return out;
}

}  // namespace latmc::corpus
