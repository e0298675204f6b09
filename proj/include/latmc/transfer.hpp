#pragma once

// Monad morphisms as executable transformations: ι induced by a predicate
// lifting, the involution morphism β, execution-map transfer, and law checks.

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "latmc/execution.hpp"
#include "latmc/models.hpp"

namespace latmc {

struct MorphismKind {
  enum class Kind { IotaFromLifting, Beta, Identity };
  Kind kind = Kind::Identity;
  MonadKind source = MonadKind::Powerset;

  static MorphismKind iota(MonadKind src) { return {Kind::IotaFromLifting, src}; }
  static MorphismKind beta() { return {Kind::Beta, MonadKind::Continuation}; }
  static MorphismKind identity() { return {Kind::Identity, MonadKind::Continuation}; }
};

/// k ↦ ¬h(¬∘k); turns an evaluator over the opposite order into one over L.
inline Evaluator apply_beta(const Lattice& l, const Evaluator& h) {
  if (!l.has_involution()) throw Error(ErrorCode::NoInvolution, "β needs an involution");
  auto lp = std::make_shared<const Lattice>(l);
  return Evaluator::lifted([lp, h](const Predicate& k) { return lp->neg(h(pointwise_neg(*lp, k))); });
}

enum class SourceMap { Maximal, Minimal };

/// ι∘u for a powerset source. The resulting handle lives on the transferred continuation model.
inline ExecutionMapHandle transfer_execution_map(const MorphismKind& morphism, const ModelPtr& source, SourceMap which) {
  if (morphism.kind != MorphismKind::Kind::IotaFromLifting)
    throw Error(ErrorCode::UnsupportedSource, "only lifting-induced morphisms transfer concrete execution maps");
  if (!source->is_powerset() || morphism.source != source->kind)
    throw Error(ErrorCode::UnsupportedSource, "execution-map transfer supports powerset sources only");
  if (which == SourceMap::Maximal) return ExecutionMapHandle::powerset_maximal(source);
  if (source->kind != MonadKind::Powerset)
    throw Error(ErrorCode::UnsupportedSource, "the non-empty powerset monad has no trivial minimal execution map");
  return ExecutionMapHandle::powerset_minimal(source);
}

/// Identity transfer of a continuation-native handle.
inline ExecutionMapHandle transfer_execution_map(const MorphismKind& morphism, const ExecutionMapHandle& u) {
  if (morphism.kind != MorphismKind::Kind::Identity)
    throw Error(ErrorCode::UnsupportedSource, "continuation-native handles transfer only along the identity");
  return u;
}

struct LawReport {
  bool pass = true;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> skipped;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      pass = false;
      if (failures.size() < 20) failures.push_back(what);
    }
  }
};

namespace detail {

inline std::string pred_text(const Lattice& l, const Predicate& k) {
  std::string r = "[";
  for (std::size_t i = 0; i < k.size(); ++i) r += (i ? "," : "") + l.element_name(k[i]);
  return r + "]";
}

inline void powerset_iota_laws(const Lattice& l, std::size_t n, bool nonempty, LawReport& rep) {
  PredicateSpace ks(l.size(), n);
  const std::uint32_t sets = 1u << n;
  auto iota = [&](std::uint32_t s, const Predicate& k) {
    Elem r = l.bottom();
    for (StateId y = 0; y < n; ++y)
      if (s >> y & 1u) r = l.join(r, k[y]);
    return r;
  };
  ks.for_each([&](const Predicate& k) {
    for (StateId x = 0; x < n; ++x)
      rep.expect(iota(1u << x, k) == k[x], "unit at x=" + std::to_string(x) + " k=" + pred_text(l, k));
    // multiplication: ι(∪SS)(k) = ⊔_{S∈SS} ι(S)(k)
    const std::uint64_t families = std::uint64_t{1} << sets;
    for (std::uint64_t ss = 0; ss < families; ++ss) {
      std::uint32_t uni = 0;
      Elem nested = l.bottom();
      bool has_empty_member = false;
      for (std::uint32_t s = 0; s < sets; ++s) {
        if (!(ss >> s & 1u)) continue;
        if (s == 0) has_empty_member = true;
        uni |= s;
        nested = l.join(nested, iota(s, k));
      }
      if (nonempty && (ss == 0 || has_empty_member)) continue;
      rep.expect(iota(uni, k) == nested, "multiplication k=" + pred_text(l, k) + " SS=" + std::to_string(ss));
    }
  });
}

inline void weighted_iota_laws(const Lattice& l, std::size_t n, bool affine, LawReport& rep) {
  PredicateSpace ks(l.size(), n);
  PredicateSpace ts(l.size(), n);  // weights t ∈ Ω^X
  auto iota = [&](const Predicate& t, const Predicate& k) {
    Elem r = l.bottom();
    for (StateId y = 0; y < n; ++y) r = l.join(r, l.meet(t[y], k[y]));
    return r;
  };
  auto is_affine = [&](const Predicate& t) { return l.join_all(t.values) == l.top(); };
  ks.for_each([&](const Predicate& k) {
    for (StateId x = 0; x < n; ++x) {
      Predicate eta(n, l.bottom());
      eta[x] = l.top();
      rep.expect(iota(eta, k) == k[x], "unit at x=" + std::to_string(x) + " k=" + pred_text(l, k));
    }
  });
  PredicateSpace tts(l.size(), ts.count());  // tt ∈ Ω^(Ω^X)
  if (!tts.within(std::size_t{1} << 20)) {
    rep.skipped.push_back("multiplication at |X|=" + std::to_string(n) + " exceeds the enumeration cap");
    return;
  }
  std::vector<Predicate> weights;
  ts.for_each([&](const Predicate& t) { weights.push_back(t); });
  tts.for_each([&](const Predicate& tt) {
    if (affine) {
      // tt must be affine and supported on affine weights
      Elem j = l.bottom();
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (tt[i] != l.bottom() && !is_affine(weights[i])) return;
        j = l.join(j, tt[i]);
      }
      if (j != l.top()) return;
    }
    Predicate mu(n, l.bottom());
    for (StateId x = 0; x < n; ++x)
      for (std::size_t i = 0; i < weights.size(); ++i) mu[x] = l.join(mu[x], l.meet(tt[i], weights[i][x]));
    ks.for_each([&](const Predicate& k) {
      Elem nested = l.bottom();
      for (std::size_t i = 0; i < weights.size(); ++i) nested = l.join(nested, l.meet(tt[i], iota(weights[i], k)));
      rep.expect(iota(mu, k) == nested, "multiplication k=" + pred_text(l, k));
    });
  });
}

inline std::vector<std::uint32_t> upsets(std::uint32_t universe_bits) {
  // all up-closed families of subsets of a universe of `universe_bits` points
  const std::uint32_t sets = 1u << universe_bits;
  std::vector<std::uint32_t> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << sets); ++fam) {
    bool closed = true;
    for (std::uint32_t s = 0; s < sets && closed; ++s) {
      if (!(fam >> s & 1u)) continue;
      for (std::uint32_t t = 0; t < sets; ++t)
        if ((t & s) == s && !(fam >> t & 1u)) closed = false;
    }
    if (closed) out.push_back(static_cast<std::uint32_t>(fam));
  }
  return out;
}

inline void neighborhood_iota_laws(const Lattice& l, std::size_t n, LawReport& rep) {
  if (l.size() != 2) {
    rep.skipped.push_back("neighborhood laws need bool2");
    return;
  }
  if (n > 1) {
    rep.skipped.push_back("neighborhood multiplication limited to |X| <= 1; unit law only at |X|=" + std::to_string(n));
  }
  const std::uint32_t sets = 1u << n;
  auto iota = [&](std::uint32_t fam, const Predicate& k) {
    Elem r = l.bottom();
    for (std::uint32_t s = 0; s < sets; ++s) {
      if (!(fam >> s & 1u)) continue;
      Elem inner = l.top();
      for (StateId y = 0; y < n; ++y)
        if (s >> y & 1u) inner = l.meet(inner, k[y]);
      r = l.join(r, inner);
    }
    return r;
  };
  PredicateSpace ks(l.size(), n);
  ks.for_each([&](const Predicate& k) {
    for (StateId x = 0; x < n; ++x) {
      std::uint32_t eta = 0;
      for (std::uint32_t s = 0; s < sets; ++s)
        if (s >> x & 1u) eta |= 1u << s;
      rep.expect(iota(eta, k) == k[x], "unit at x=" + std::to_string(x) + " k=" + pred_text(l, k));
    }
  });
  if (n > 1) return;
  const auto nx = upsets(static_cast<std::uint32_t>(n));  // points of N X
  const std::size_t m = nx.size();
  // up-closed families over subsets of N X, ordered by inclusion of index sets
  for (std::uint64_t ff = 0; ff < (std::uint64_t{1} << (1u << m)); ++ff) {
    bool closed = true;
    for (std::uint32_t s = 0; s < (1u << m) && closed; ++s) {
      if (!(ff >> s & 1u)) continue;
      for (std::uint32_t t = 0; t < (1u << m); ++t)
        if ((t & s) == s && !(ff >> t & 1u)) closed = false;
    }
    if (!closed) continue;
    // μ(FF) = {S ⊆ X | {F ∈ NX | S ∈ F} ∈ FF}
    std::uint32_t mu = 0;
    for (std::uint32_t s = 0; s < sets; ++s) {
      std::uint32_t idx = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (nx[i] >> s & 1u) idx |= 1u << i;
      if (ff >> idx & 1u) mu |= 1u << s;
    }
    ks.for_each([&](const Predicate& k) {
      Elem nested = l.bottom();
      for (std::uint32_t s = 0; s < (1u << m); ++s) {
        if (!(ff >> s & 1u)) continue;
        Elem inner = l.top();
        for (std::size_t i = 0; i < m; ++i)
          if (s >> i & 1u) inner = l.meet(inner, iota(nx[i], k));
        nested = l.join(nested, inner);
      }
      rep.expect(iota(mu, k) == nested, "multiplication FF=" + std::to_string(ff) + " k=" + pred_text(l, k));
    });
  }
}

/// All monotone maps Ω^X → Ω for the order of `l`, as tables indexed like PredicateSpace.
inline std::vector<std::vector<Elem>> all_monotone_tables(const Lattice& l, std::size_t n, std::size_t cap) {
  PredicateSpace space(l.size(), n);
  if (!space.within(64)) throw Error(ErrorCode::TooLarge, "continuation space too large to enumerate");
  const std::size_t points = space.count();
  // a linear extension: points sorted by the number of elements strictly below each coordinate
  std::vector<std::size_t> rank(l.size(), 0);
  for (Elem a = 0; a < l.size(); ++a)
    for (Elem b = 0; b < l.size(); ++b)
      if (a != b && l.leq(b, a)) ++rank[a];
  std::vector<std::size_t> order(points);
  std::vector<std::size_t> weight(points, 0);
  for (std::size_t i = 0; i < points; ++i) {
    order[i] = i;
    for (Elem v : space.decode(i).values) weight[i] += rank[v];
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] < weight[b]; });
  std::vector<std::vector<std::size_t>> below(points);  // indices strictly below, any point
  for (std::size_t i = 0; i < points; ++i) {
    const Predicate p = space.decode(i);
    for (std::size_t j = 0; j < points; ++j)
      if (j != i && pointwise_leq(l, space.decode(j), p)) below[i].push_back(j);
  }
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> table(points, 0);
  std::vector<bool> set(points, false);
  std::function<void(std::size_t)> go = [&](std::size_t pos) {
    if (out.size() > cap) throw Error(ErrorCode::TooLarge, "too many monotone maps");
    if (pos == points) {
      out.push_back(table);
      return;
    }
    const std::size_t i = order[pos];
    for (Elem v = 0; v < l.size(); ++v) {
      bool ok = true;
      for (std::size_t j : below[i])
        if (set[j] && !l.leq(table[j], v)) ok = false;
      if (!ok) continue;
      table[i] = v;
      set[i] = true;
      go(pos + 1);
      set[i] = false;
    }
  };
  go(0);
  return out;
}

inline void beta_laws(const Lattice& l, std::size_t n, std::uint64_t seed, LawReport& rep) {
  if (!l.has_involution()) throw Error(ErrorCode::NoInvolution, "β needs an involution");
  const Lattice op = l.opposite();
  PredicateSpace ks(l.size(), n);
  const auto tables = all_monotone_tables(op, n, std::size_t{1} << 24);
  std::vector<Evaluator> hs;  // affine, monotone w.r.t. the opposite order
  for (const auto& t : tables) {
    Evaluator h = Evaluator::table(l.size(), n, t);
    if (evaluator_is_affine(op, n, h)) hs.push_back(std::move(h));
  }
  for (const auto& h : hs) {
    const Evaluator bh = apply_beta(l, h);
    const Evaluator bbh = apply_beta(op, bh);
    rep.expect(evaluator_is_affine(l, n, bh), "β(h) affine");
    ks.for_each([&](const Predicate& k) {
      rep.expect(bbh(k) == h(k), "β∘β = id at k=" + pred_text(l, k));
      rep.expect(h(pointwise_neg(l, k)) == l.neg(bh(k)), "β(h)(k) = ¬h(¬k) at k=" + pred_text(l, k));
      for (StateId y = 0; y < n; ++y) {
        Predicate k2 = k;
        for (Elem up : l.upper_covers(k[y])) {
          k2[y] = up;
          rep.expect(l.leq(bh(k), bh(k2)), "β(h) monotone at k=" + pred_text(l, k));
        }
      }
    });
  }
  // unit: β(η^op(x)) = η(x)
  for (StateId x = 0; x < n; ++x) {
    const Evaluator eta_op = Evaluator::lifted([x](const Predicate& k) { return k[x]; });
    const Evaluator b = apply_beta(l, eta_op);
    ks.for_each([&](const Predicate& k) { rep.expect(b(k) == k[x], "unit at x=" + std::to_string(x)); });
  }
  // multiplication on sampled H ∈ K^op K^op X of the form H(Φ) = ⊔ᵢ ⊓_{j∈Sᵢ} Φ(h_j) (joins/meets read in op)
  if (hs.empty()) return;
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 64; ++trial) {
    const std::size_t terms = 1 + rng() % 3;
    std::vector<std::vector<std::size_t>> dnf(terms);
    for (auto& t : dnf) {
      const std::size_t width = 1 + rng() % 2;
      for (std::size_t w = 0; w < width; ++w) t.push_back(rng() % hs.size());
    }
    auto H = [&](const std::function<Elem(std::size_t)>& phi) {
      Elem r = op.bottom();
      for (const auto& t : dnf) {
        Elem inner = op.top();
        for (std::size_t j : t) inner = op.meet(inner, phi(j));
        r = op.join(r, inner);
      }
      return r;
    };
    ks.for_each([&](const Predicate& k) {
      // β(μ^op H)(k) = ¬ H(λh. h(¬k))
      const Predicate nk = pointwise_neg(l, k);
      const Elem lhs = l.neg(H([&](std::size_t j) { return hs[j](nk); }));
      // μ(Kβ(β(H)))(k) = β(H)(λh. β(h)(k)) = ¬ H(λh. ¬β(h)(k))
      const Elem rhs = l.neg(H([&](std::size_t j) { return l.neg(apply_beta(l, hs[j])(k)); }));
      rep.expect(lhs == rhs, "multiplication trial " + std::to_string(trial) + " k=" + pred_text(l, k));
    });
  }
}

}  // namespace detail

/// Unit and multiplication laws, enumerated for every |X| ≤ max_states.
inline LawReport check_morphism_laws(const MorphismKind& morphism, const Lattice& l, std::size_t max_states = 2,
                                     std::uint64_t seed = 0) {
  LawReport rep;
  for (std::size_t n = 1; n <= max_states; ++n) {
    switch (morphism.kind) {
      case MorphismKind::Kind::Identity: break;
      case MorphismKind::Kind::Beta: detail::beta_laws(l, n, seed + n, rep); break;
      case MorphismKind::Kind::IotaFromLifting:
        switch (morphism.source) {
          case MonadKind::Powerset: detail::powerset_iota_laws(l, n, false, rep); break;
          case MonadKind::NonemptyPowerset: detail::powerset_iota_laws(l, n, true, rep); break;
          case MonadKind::Weighted: detail::weighted_iota_laws(l, n, false, rep); break;
          case MonadKind::AffineWeighted: detail::weighted_iota_laws(l, n, true, rep); break;
          case MonadKind::Neighborhood: detail::neighborhood_iota_laws(l, n, rep); break;
          case MonadKind::Continuation: break;
        }
        break;
    }
  }
  return rep;
}

}  // namespace latmc
