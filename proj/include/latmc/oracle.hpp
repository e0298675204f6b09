#pragma once

// Brute-force reference implementations at enumeration scale. Nothing here
// calls into the execution engine or the formula evaluators; only lattice
// operations, model data and the syntax tree are shared.

#include <cstdint>
#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "latmc/lattice.hpp"
#include "latmc/models.hpp"
#include "latmc/predicate.hpp"
#include "latmc/syntax.hpp"

namespace latmc::oracle {

struct Report {
  bool pass = true;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      pass = false;
      if (failures.size() < 20) failures.push_back(what);
    }
  }
};

inline std::string show(const Lattice& l, const Predicate& k) {
  std::string r = "[";
  for (std::size_t i = 0; i < k.size(); ++i) r += (i ? "," : "") + l.element_name(k[i]);
  return r + "]";
}

// ---------------------------------------------------------------------------
// Monotone maps

struct MonotoneMaps {
  std::vector<std::vector<Elem>> tables;  // indexed like PredicateSpace
  std::vector<bool> affine;
  std::size_t affine_count() const { return static_cast<std::size_t>(std::count(affine.begin(), affine.end(), true)); }
};

/// Every table Ω^X → Ω, filtered by monotonicity (all comparable pairs).
inline MonotoneMaps enumerate_monotone(const Lattice& l, std::size_t n, std::size_t cap = std::size_t{1} << 24) {
  PredicateSpace points(l.size(), n);
  if (!points.within(32)) throw Error(ErrorCode::TooLarge, "continuation domain too large");
  PredicateSpace tables(l.size(), points.count());
  if (!tables.within(cap)) throw Error(ErrorCode::TooLarge, "|Ω|^(|Ω|^|X|) exceeds the enumeration cap");
  const std::size_t p = points.count();
  std::vector<Predicate> pts;
  points.for_each([&](const Predicate& k) { pts.push_back(k); });
  std::vector<std::pair<std::size_t, std::size_t>> comparable;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (i != j && pointwise_leq(l, pts[i], pts[j])) comparable.emplace_back(i, j);
  std::vector<std::size_t> constant_index(l.size());
  for (Elem a = 0; a < l.size(); ++a) constant_index[a] = points.encode(Predicate(n, a));

  MonotoneMaps out;
  std::vector<Elem> t(p, 0);
  for (std::size_t idx = 0; idx < tables.count(); ++idx) {
    std::size_t r = idx;
    for (std::size_t i = 0; i < p; ++i) {
      t[i] = static_cast<Elem>(r % l.size());
      r /= l.size();
    }
    bool mono = true;
    for (const auto& [i, j] : comparable)
      if (!l.leq(t[i], t[j])) {
        mono = false;
        break;
      }
    if (!mono) continue;
    bool aff = true;
    for (Elem a = 0; a < l.size(); ++a) aff = aff && t[constant_index[a]] == a;
    out.tables.push_back(t);
    out.affine.push_back(aff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Liftings, natural transformations and the cartesian equations

enum class TrinityMonad { Powerset, Weighted, Continuation };

namespace detail {

/// Elements of T over an n-point set, for the monads checked here.
inline std::vector<Predicate> monad_points(const Lattice& l, TrinityMonad t, std::size_t n) {
  std::vector<Predicate> out;
  if (t == TrinityMonad::Powerset) {
    // subsets as 0/1 predicates in a two-element encoding
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      Predicate p(n, 0);
      for (std::size_t y = 0; y < n; ++y) p[y] = (s >> y & 1u) ? 1 : 0;
      out.push_back(p);
    }
  } else {
    PredicateSpace(l.size(), n).for_each([&](const Predicate& w) { out.push_back(w); });
  }
  return out;
}

inline Predicate monad_map(const Lattice& l, TrinityMonad t, const std::vector<std::size_t>& f, std::size_t ny,
                           const Predicate& tx) {
  Predicate r(ny, t == TrinityMonad::Powerset ? 0 : l.bottom());
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (t == TrinityMonad::Powerset) {
      if (tx[x]) r[f[x]] = 1;
    } else {
      r[f[x]] = l.join(r[f[x]], tx[x]);
    }
  }
  return r;
}

struct Lifting {
  std::string name;
  std::function<Elem(const Predicate& k, const Predicate& t)> apply;
  bool canonical = false;
};

inline std::vector<Lifting> lifting_family(const Lattice& l, TrinityMonad t) {
  std::vector<Lifting> fam;
  const auto gs = enumerate_monotone(l, 1);
  for (std::size_t gi = 0; gi < gs.tables.size(); ++gi) {
    const auto g = gs.tables[gi];
    const bool id = [&] {
      for (Elem a = 0; a < l.size(); ++a)
        if (g[a] != a) return false;
      return true;
    }();
    if (t == TrinityMonad::Powerset) {
      fam.push_back({"g" + std::to_string(gi) + "∘join", [&l, g](const Predicate& k, const Predicate& s) {
                       Elem r = l.bottom();
                       for (std::size_t y = 0; y < k.size(); ++y)
                         if (s[y]) r = l.join(r, k[y]);
                       return g[r];
                     }, id});
      fam.push_back({"g" + std::to_string(gi) + "∘meet", [&l, g](const Predicate& k, const Predicate& s) {
                       Elem r = l.top();
                       for (std::size_t y = 0; y < k.size(); ++y)
                         if (s[y]) r = l.meet(r, k[y]);
                       return g[r];
                     }, false});
    } else {
      fam.push_back({"g" + std::to_string(gi) + "∘weighted-join", [&l, g](const Predicate& k, const Predicate& w) {
                       Elem r = l.bottom();
                       for (std::size_t y = 0; y < k.size(); ++y) r = l.join(r, l.meet(w[y], k[y]));
                       return g[r];
                     }, id});
      if (l.has_involution())
        fam.push_back({"g" + std::to_string(gi) + "∘weighted-meet", [&l, g](const Predicate& k, const Predicate& w) {
                         Elem r = l.top();
                         for (std::size_t y = 0; y < k.size(); ++y) r = l.meet(r, l.join(l.neg(w[y]), k[y]));
                         return g[r];
                       }, false});
    }
  }
  return fam;
}

inline std::vector<std::vector<std::size_t>> all_functions(std::size_t nx, std::size_t ny) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> f(nx, 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == nx) {
      out.push_back(f);
      return;
    }
    for (std::size_t y = 0; y < ny; ++y) {
      f[i] = y;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

}  // namespace detail

/// For a family of liftings of T on (X, Y): lifting ↔ natural transformation
/// round trips, naturality along every f: X → Y, canonical decomposition
/// ◇(k)(t) = △(k)(ι t), and the cartesian equations for the canonical lifting.
inline Report check_trinity(TrinityMonad monad, const Lattice& l, std::size_t nx, std::size_t ny) {
  Report rep;
  if (monad == TrinityMonad::Continuation) {
    // the canonical lifting of K^m: ι = id, so △(k)(h) = h(k) on every enumerated h
    const auto maps = enumerate_monotone(l, nx);
    PredicateSpace ks(l.size(), nx);
    for (const auto& h : maps.tables) {
      ks.for_each([&](const Predicate& k) {
        const Elem tri = h[ks.encode(k)];
        // round trip: lifting table → ι table → lifting table
        std::vector<Elem> iota(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) iota[i] = h[i];
        rep.expect(iota[ks.encode(k)] == tri, "continuation round trip");
      });
    }
    return rep;
  }

  const auto family = detail::lifting_family(l, monad);
  for (std::size_t n : {nx, ny}) {
    const auto ts = detail::monad_points(l, monad, n);
    PredicateSpace ks(l.size(), n);
    for (const auto& lift : family) {
      // lifting table L[k][t], ι table I[t][k] = L[k][t], back L'[k][t] = I[t][k]
      std::vector<std::vector<Elem>> table(ks.count(), std::vector<Elem>(ts.size()));
      ks.for_each([&](const Predicate& k) {
        for (std::size_t i = 0; i < ts.size(); ++i) table[ks.encode(k)][i] = lift.apply(k, ts[i]);
      });
      std::vector<std::vector<Elem>> iota(ts.size(), std::vector<Elem>(ks.count()));
      for (std::size_t ki = 0; ki < ks.count(); ++ki)
        for (std::size_t i = 0; i < ts.size(); ++i) iota[i][ki] = table[ki][i];
      for (std::size_t ki = 0; ki < ks.count(); ++ki)
        for (std::size_t i = 0; i < ts.size(); ++i) {
          rep.expect(iota[i][ki] == table[ki][i], lift.name + " round trip");
          // canonical decomposition: △(k)(ι(t)) = ι(t)(k)
          const Predicate k = ks.decode(ki);
          rep.expect(lift.apply(k, ts[i]) == iota[i][ks.encode(k)], lift.name + " decomposition");
        }
      // ι(t) is monotone
      for (std::size_t i = 0; i < ts.size(); ++i)
        ks.for_each([&](const Predicate& k) {
          for (std::size_t y = 0; y < n; ++y)
            for (Elem up : l.upper_covers(k[y])) {
              Predicate k2 = k;
              k2[y] = up;
              rep.expect(l.leq(iota[i][ks.encode(k)], iota[i][ks.encode(k2)]), lift.name + " monotone");
            }
        });
    }
  }

  // naturality along every f: X → Y
  const auto txs = detail::monad_points(l, monad, nx);
  PredicateSpace kys(l.size(), ny);
  for (const auto& f : detail::all_functions(nx, ny)) {
    for (const auto& lift : family) {
      for (const auto& t : txs) {
        const Predicate tf = detail::monad_map(l, monad, f, ny, t);
        kys.for_each([&](const Predicate& k) {
          Predicate kf(nx, 0);
          for (std::size_t x = 0; x < nx; ++x) kf[x] = k[f[x]];
          rep.expect(lift.apply(kf, t) == lift.apply(k, tf), lift.name + " naturality at t=" + show(l, t));
        });
      }
    }
  }

  // cartesian equations for the canonical lifting
  for (const auto& lift : family) {
    if (!lift.canonical) continue;
    for (std::size_t n : {nx, ny}) {
      const auto ts = detail::monad_points(l, monad, n);
      PredicateSpace ks(l.size(), n);
      ks.for_each([&](const Predicate& k) {
        for (std::size_t x = 0; x < n; ++x) {
          Predicate eta(n, monad == TrinityMonad::Powerset ? 0 : l.bottom());
          eta[x] = monad == TrinityMonad::Powerset ? 1 : l.top();
          rep.expect(lift.apply(k, eta) == k[x], lift.name + " unit equation");
        }
      });
      // μ: TTX → TX, with TTX the monad over the points of TX
      const std::size_t m = ts.size();
      const auto tts = monad == TrinityMonad::Powerset ? detail::monad_points(l, monad, m) : [&] {
        std::vector<Predicate> v;
        PredicateSpace space(l.size(), m);
        if (space.within(std::size_t{1} << 20)) space.for_each([&](const Predicate& w) { v.push_back(w); });
        return v;
      }();
      for (const auto& tt : tts) {
        Predicate mu(n, monad == TrinityMonad::Powerset ? 0 : l.bottom());
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t x = 0; x < n; ++x) {
            if (monad == TrinityMonad::Powerset) {
              if (tt[i] && ts[i][x]) mu[x] = 1;
            } else {
              mu[x] = l.join(mu[x], l.meet(tt[i], ts[i][x]));
            }
          }
        ks.for_each([&](const Predicate& k) {
          Predicate inner(m, 0);
          for (std::size_t i = 0; i < m; ++i) inner[i] = lift.apply(k, ts[i]);
          rep.expect(lift.apply(k, mu) == lift.apply(inner, tt), lift.name + " multiplication equation");
        });
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Path terms and interval evaluation

struct Interval {
  Elem lo = 0;
  Elem hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Path continuations built from state predicates. Head carries an interval
/// predicate pair so that nested state formulas known only up to bounds fit in.
struct PathTerm {
  enum class Kind { Const, Head, Next, Until, WUntil, Join, Meet };
  Kind kind = Kind::Const;
  Elem a = 0;
  Predicate lo;
  Predicate hi;
  std::vector<PathTerm> args;  // Until: hold, goal; WUntil: k1, k2

  static PathTerm constant(Elem a) { return {Kind::Const, a, {}, {}, {}}; }
  static PathTerm head(Predicate k) { return {Kind::Head, 0, k, k, {}}; }
  static PathTerm head(Predicate lo, Predicate hi) { return {Kind::Head, 0, std::move(lo), std::move(hi), {}}; }
  static PathTerm next(PathTerm t) { return {Kind::Next, 0, {}, {}, {std::move(t)}}; }
  static PathTerm until(PathTerm hold, PathTerm goal) { return {Kind::Until, 0, {}, {}, {std::move(hold), std::move(goal)}}; }
  static PathTerm wuntil(PathTerm k1, PathTerm k2) { return {Kind::WUntil, 0, {}, {}, {std::move(k1), std::move(k2)}}; }
  static PathTerm join(PathTerm x, PathTerm y) { return {Kind::Join, 0, {}, {}, {std::move(x), std::move(y)}}; }
  static PathTerm meet(PathTerm x, PathTerm y) { return {Kind::Meet, 0, {}, {}, {std::move(x), std::move(y)}}; }
};

/// λπ. ¬t(π).
inline PathTerm negate(const Lattice& l, const PathTerm& t) {
  using K = PathTerm::Kind;
  switch (t.kind) {
    case K::Const: return PathTerm::constant(l.neg(t.a));
    case K::Head: return PathTerm::head(pointwise_neg(l, t.hi), pointwise_neg(l, t.lo));
    case K::Next: return PathTerm::next(negate(l, t.args[0]));
    case K::Until: return PathTerm::wuntil(negate(l, t.args[1]), negate(l, t.args[0]));
    case K::WUntil: return PathTerm::until(negate(l, t.args[1]), negate(l, t.args[0]));
    case K::Join: return PathTerm::meet(negate(l, t.args[0]), negate(l, t.args[1]));
    case K::Meet: return PathTerm::join(negate(l, t.args[0]), negate(l, t.args[1]));
  }
  return t;
}

namespace detail {
inline Interval ijoin(const Lattice& l, Interval a, Interval b) { return {l.join(a.lo, b.lo), l.join(a.hi, b.hi)}; }
inline Interval imeet(const Lattice& l, Interval a, Interval b) { return {l.meet(a.lo, b.lo), l.meet(a.hi, b.hi)}; }
}  // namespace detail

/// Bounds on t over every path extending the finite sequence `seq`, read from position i.
inline Interval eval_open(const Lattice& l, const PathTerm& t, const std::vector<StateId>& seq, std::size_t i = 0) {
  using K = PathTerm::Kind;
  const bool known = i < seq.size();
  switch (t.kind) {
    case K::Const: return {t.a, t.a};
    case K::Head:
      if (known) return {t.lo[seq[i]], t.hi[seq[i]]};
      return {l.meet_all(t.lo.values), l.join_all(t.hi.values)};
    case K::Next: return eval_open(l, t.args[0], seq, i + 1);
    case K::Until:
      if (!known) return {l.bottom(), l.top()};
      return detail::ijoin(l, eval_open(l, t.args[1], seq, i),
                           detail::imeet(l, eval_open(l, t.args[0], seq, i), eval_open(l, t, seq, i + 1)));
    case K::WUntil:
      if (!known) return {l.bottom(), l.top()};
      return detail::imeet(l, eval_open(l, t.args[0], seq, i),
                           detail::ijoin(l, eval_open(l, t.args[1], seq, i), eval_open(l, t, seq, i + 1)));
    case K::Join: return detail::ijoin(l, eval_open(l, t.args[0], seq, i), eval_open(l, t.args[1], seq, i));
    case K::Meet: return detail::imeet(l, eval_open(l, t.args[0], seq, i), eval_open(l, t.args[1], seq, i));
  }
  return {l.bottom(), l.top()};
}

/// Values of t at every position of the lasso seq[0..loop) seq[loop..)^ω.
inline std::vector<Interval> eval_lasso(const Lattice& l, const PathTerm& t, const std::vector<StateId>& seq,
                                        std::size_t loop) {
  using K = PathTerm::Kind;
  const std::size_t len = seq.size();
  auto succ = [&](std::size_t j) { return j + 1 < len ? j + 1 : loop; };
  std::vector<Interval> out(len);
  switch (t.kind) {
    case K::Const:
      for (auto& v : out) v = {t.a, t.a};
      return out;
    case K::Head:
      for (std::size_t j = 0; j < len; ++j) out[j] = {t.lo[seq[j]], t.hi[seq[j]]};
      return out;
    case K::Next: {
      const auto c = eval_lasso(l, t.args[0], seq, loop);
      for (std::size_t j = 0; j < len; ++j) out[j] = c[succ(j)];
      return out;
    }
    case K::Join:
    case K::Meet: {
      const auto a = eval_lasso(l, t.args[0], seq, loop);
      const auto b = eval_lasso(l, t.args[1], seq, loop);
      for (std::size_t j = 0; j < len; ++j)
        out[j] = t.kind == K::Join ? detail::ijoin(l, a[j], b[j]) : detail::imeet(l, a[j], b[j]);
      return out;
    }
    case K::Until:
    case K::WUntil: {
      const bool until = t.kind == K::Until;
      const auto first = eval_lasso(l, t.args[0], seq, loop);
      const auto second = eval_lasso(l, t.args[1], seq, loop);
      for (auto& v : out) v = until ? Interval{l.bottom(), l.bottom()} : Interval{l.top(), l.top()};
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = len; j-- > 0;) {
          const Interval nxt = out[succ(j)];
          const Interval v = until ? detail::ijoin(l, second[j], detail::imeet(l, first[j], nxt))
                                   : detail::imeet(l, first[j], detail::ijoin(l, second[j], nxt));
          if (!(v == out[j])) {
            out[j] = v;
            changed = true;
          }
        }
      }
      return out;
    }
  }
  return out;
}

inline void for_each_sequence(std::size_t n, std::size_t len, const std::function<void(const std::vector<StateId>&)>& f) {
  std::vector<StateId> seq(len, 0);
  for (;;) {
    f(seq);
    std::size_t i = 0;
    while (i < len && ++seq[i] == n) seq[i++] = 0;
    if (i == len) return;
  }
}

struct PathValues {
  Interval inf;  // bounds on ⊓ over all paths
  Interval sup;  // bounds on ⊔ over all paths
};

/// Brackets ⊓_π t(π) and ⊔_π t(π) over X^ω from length-h prefixes (open tails)
/// and from every lasso of length h (exact).
inline PathValues brute_force_path_values(const Lattice& l, std::size_t n, const PathTerm& t, std::size_t h,
                                          std::size_t cap = std::size_t{1} << 20) {
  PredicateSpace seqs(n, h);
  if (!seqs.within(cap)) throw Error(ErrorCode::TooLarge, "|X|^h exceeds the enumeration cap");
  PathValues r{{l.top(), l.top()}, {l.bottom(), l.bottom()}};
  for_each_sequence(n, h, [&](const std::vector<StateId>& seq) {
    const Interval v = eval_open(l, t, seq);
    r.inf.lo = l.meet(r.inf.lo, v.lo);
    r.inf.hi = l.meet(r.inf.hi, v.hi);
    r.sup.lo = l.join(r.sup.lo, v.lo);
    r.sup.hi = l.join(r.sup.hi, v.hi);
    for (std::size_t loop = 0; loop < h; ++loop) {
      const Interval e = eval_lasso(l, t, seq, loop)[0];
      r.inf.hi = l.meet(r.inf.hi, e.hi);
      r.sup.lo = l.join(r.sup.lo, e.lo);
    }
  });
  return r;
}

enum class BracketFlavour { Plain, Affine };

/// Kleene iterates of the execution operator from the Kleisli bottom and top,
/// at depth `depth`, evaluated at the continuation π ↦ t(prefix·π). In the
/// affine flavour the base uses horizon-`horizon` bounds on the path extrema.
inline Interval bounded_bracket(const Model& m, StateId x, const std::vector<StateId>& prefix, const PathTerm& t,
                                std::size_t depth, BracketFlavour flavour, std::size_t horizon = 2) {
  const Lattice& l = m.lat();
  const std::size_t n = m.size();
  std::function<Interval(StateId, std::vector<StateId>&, std::size_t)> rec = [&](StateId y, std::vector<StateId>& pre,
                                                                                  std::size_t d) -> Interval {
    if (d == 0) {
      if (flavour == BracketFlavour::Plain) return {l.bottom(), l.top()};
      Interval r{l.top(), l.bottom()};
      std::vector<StateId> seq = pre;
      seq.resize(pre.size() + horizon);
      for_each_sequence(n, horizon, [&](const std::vector<StateId>& tail) {
        std::copy(tail.begin(), tail.end(), seq.begin() + static_cast<std::ptrdiff_t>(pre.size()));
        const Interval v = eval_open(l, t, seq);
        r.lo = l.meet(r.lo, v.lo);
        r.hi = l.join(r.hi, v.hi);
      });
      return r;
    }
    pre.push_back(y);
    Predicate lo(n, l.bottom()), hi(n, l.bottom());
    for (StateId z = 0; z < n; ++z) {
      const Interval v = rec(z, pre, d - 1);
      lo[z] = v.lo;
      hi[z] = v.hi;
    }
    pre.pop_back();
    return {m.cont[y](lo), m.cont[y](hi)};
  };
  std::vector<StateId> pre = prefix;
  return rec(x, pre, depth);
}

/// Bounds on ⊔ of t over the infinite paths of a Kripke structure starting at x:
/// open-tail prefixes of length h give the upper bound, realizable lassos of length ≤ h the lower.
inline Interval powerset_path_join(const Model& m, StateId x, const PathTerm& t, std::size_t h) {
  if (!m.is_powerset()) throw Error(ErrorCode::PreconditionFailed, "path sets need a powerset model");
  const Lattice& l = m.lat();
  const std::size_t n = m.size();
  std::vector<bool> live(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!live[s]) continue;
      bool any = false;
      for (StateId y : m.succ[s]) any = any || live[y];
      if (!any) live[s] = false, changed = true;
    }
  }
  Interval r{l.bottom(), l.bottom()};
  if (!live[x]) return r;
  auto edge = [&](StateId a, StateId b) {
    return std::find(m.succ[a].begin(), m.succ[a].end(), b) != m.succ[a].end();
  };
  std::vector<StateId> seq{x};
  std::function<void()> go = [&] {
    // every lasso closing back from the current end
    for (std::size_t loop = 0; loop < seq.size(); ++loop)
      if (edge(seq.back(), seq[loop])) r.lo = l.join(r.lo, eval_lasso(l, t, seq, loop)[0].lo);
    if (seq.size() == h) {
      r.hi = l.join(r.hi, eval_open(l, t, seq).hi);
      return;
    }
    for (StateId y : m.succ[seq.back()]) {
      if (!live[y]) continue;
      seq.push_back(y);
      go();
      seq.pop_back();
    }
  };
  go();
  return r;
}

/// Interval semantics of a CTL* state formula: every quantifier is bracketed
/// by the depth-`depth` Kleene iterates, so the result holds for every execution map.
class StarBracket {
 public:
  StarBracket(const Model& m, std::size_t depth, BracketFlavour flavour) : m_(m), depth_(depth), flavour_(flavour) {}

  std::pair<Predicate, Predicate> state(const CtlPtr& f) {
    const Lattice& l = m_.lat();
    const std::size_t n = m_.size();
    switch (f->kind) {
      case CtlKind::Atom: return {m_.label(f->name), m_.label(f->name)};
      case CtlKind::NegAtom: {
        const Predicate p = pointwise_neg(l, m_.label(f->name));
        return {p, p};
      }
      case CtlKind::True: return {Predicate(n, l.top()), Predicate(n, l.top())};
      case CtlKind::False: return {Predicate(n, l.bottom()), Predicate(n, l.bottom())};
      case CtlKind::And:
      case CtlKind::Or: {
        const auto a = state(f->left), b = state(f->right);
        if (f->kind == CtlKind::And) return {pointwise_meet(l, a.first, b.first), pointwise_meet(l, a.second, b.second)};
        return {pointwise_join(l, a.first, b.first), pointwise_join(l, a.second, b.second)};
      }
      case CtlKind::Not: {
        const auto a = state(f->left);
        return {pointwise_neg(l, a.second), pointwise_neg(l, a.first)};
      }
      case CtlKind::E:
      case CtlKind::A: {
        const bool universal = f->kind == CtlKind::A;
        PathTerm t = path(f->left);
        if (universal) t = negate(l, t);
        Predicate lo(n, l.bottom()), hi(n, l.bottom());
        for (StateId x = 0; x < n; ++x) {
          const Interval v = bounded_bracket(m_, x, {}, t, depth_, flavour_);
          lo[x] = universal ? l.neg(v.hi) : v.lo;
          hi[x] = universal ? l.neg(v.lo) : v.hi;
        }
        return {lo, hi};
      }
      default: throw Error(ErrorCode::Internal, "path formula in state position");
    }
  }

 private:
  PathTerm path(const CtlPtr& p) {
    switch (p->kind) {
      case CtlKind::Lift: {
        auto [lo, hi] = state(p->left);
        return PathTerm::head(std::move(lo), std::move(hi));
      }
      case CtlKind::Next: return PathTerm::next(path(p->left));
      case CtlKind::Until: return PathTerm::until(path(p->left), path(p->right));
      case CtlKind::WUntil: return PathTerm::wuntil(path(p->left), path(p->right));
      case CtlKind::PathAnd: return PathTerm::meet(path(p->left), path(p->right));
      case CtlKind::PathOr: return PathTerm::join(path(p->left), path(p->right));
      case CtlKind::PathNot: return negate(m_.lat(), path(p->left));
      default: return PathTerm::head(state(p).first, state(p).second);
    }
  }

  const Model& m_;
  std::size_t depth_;
  BracketFlavour flavour_;
};

inline std::pair<Predicate, Predicate> ctlstar_bracket(const Model& m, const CtlPtr& f, std::size_t depth,
                                                       BracketFlavour flavour) {
  if (m.kind != MonadKind::Continuation) throw Error(ErrorCode::PreconditionFailed, "brackets need a continuation model");
  return StarBracket(m, depth, flavour).state(f);
}

// ---------------------------------------------------------------------------
// Textbook CTL labeling (second implementation)

namespace detail {
class Textbook {
 public:
  explicit Textbook(const Model& m) : m_(m), n_(m.size()) {
    // states with an infinite path: not backward-reachable from a dead end through forced moves
    std::vector<std::size_t> live_succ(n_, 0);
    pred_.assign(n_, {});
    for (StateId x = 0; x < n_; ++x)
      for (StateId y : m.succ[x]) pred_[y].push_back(x), ++live_succ[x];
    inf_.assign(n_, true);
    std::vector<StateId> queue;
    for (StateId x = 0; x < n_; ++x)
      if (live_succ[x] == 0) inf_[x] = false, queue.push_back(x);
    while (!queue.empty()) {
      const StateId y = queue.back();
      queue.pop_back();
      for (StateId x : pred_[y])
        if (inf_[x] && --live_succ[x] == 0) inf_[x] = false, queue.push_back(x);
    }
  }

  using Set = std::vector<bool>;

  Set state(const CtlPtr& f) {
    Set r(n_, false);
    switch (f->kind) {
      case CtlKind::Atom:
      case CtlKind::NegAtom: {
        const Predicate& p = m_.label(f->name);
        for (StateId x = 0; x < n_; ++x) r[x] = (p[x] != m_.lat().bottom()) != (f->kind == CtlKind::NegAtom);
        return r;
      }
      case CtlKind::True: return Set(n_, true);
      case CtlKind::False: return r;
      case CtlKind::And:
      case CtlKind::Or: {
        const Set a = state(f->left), b = state(f->right);
        for (StateId x = 0; x < n_; ++x) r[x] = f->kind == CtlKind::And ? (a[x] && b[x]) : (a[x] || b[x]);
        return r;
      }
      case CtlKind::Not: return complement(state(f->left));
      case CtlKind::E: return exists(f->left);
      case CtlKind::A: return complement(exists(to_nnf(ctl::path_not(f->left))));
      default: throw Error(ErrorCode::NotCtlFragment, "path formula in state position");
    }
  }

 private:
  static Set complement(Set s) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = !s[i];
    return s;
  }

  /// States reaching `target` along paths inside `through` (target states included).
  Set backward(const Set& target, const Set& through) const {
    Set r(n_, false);
    std::vector<StateId> queue;
    for (StateId x = 0; x < n_; ++x)
      if (target[x]) r[x] = true, queue.push_back(x);
    while (!queue.empty()) {
      const StateId y = queue.back();
      queue.pop_back();
      for (StateId x : pred_[y])
        if (!r[x] && through[x]) r[x] = true, queue.push_back(x);
    }
    return r;
  }

  /// States with an infinite path inside `inside`: reach a cycle of the restricted graph.
  Set globally(const Set& inside) const {
    Set on_cycle(n_, false);
    for (StateId x = 0; x < n_; ++x) {
      if (!inside[x]) continue;
      // does x reach itself inside `inside` in at least one step
      Set seen(n_, false);
      std::vector<StateId> stack;
      for (StateId y : m_.succ[x])
        if (inside[y] && !seen[y]) seen[y] = true, stack.push_back(y);
      while (!stack.empty() && !seen[x]) {
        const StateId y = stack.back();
        stack.pop_back();
        for (StateId z : m_.succ[y])
          if (inside[z] && !seen[z]) seen[z] = true, stack.push_back(z);
      }
      on_cycle[x] = seen[x];
    }
    return backward(on_cycle, inside);
  }

  Set exists(const CtlPtr& p) {
    Set r(n_, false);
    switch (p->kind) {
      case CtlKind::Lift: {
        const Set a = state(p->left);
        for (StateId x = 0; x < n_; ++x) r[x] = inf_[x] && a[x];
        return r;
      }
      case CtlKind::Next: {
        const Set a = state(p->left->left);
        for (StateId y = 0; y < n_; ++y)
          if (a[y] && inf_[y])
            for (StateId x : pred_[y]) r[x] = true;
        return r;
      }
      case CtlKind::Until: {
        const Set h = state(p->left->left), g = state(p->right->left);
        Set target(n_), through(n_);
        for (StateId x = 0; x < n_; ++x) target[x] = g[x] && inf_[x], through[x] = h[x];
        return backward(target, through);
      }
      case CtlKind::WUntil: {
        // E(a W b) = E(a U (a ∧ b)) ∨ EG a
        const Set a = state(p->left->left), b = state(p->right->left);
        Set target(n_);
        for (StateId x = 0; x < n_; ++x) target[x] = a[x] && b[x] && inf_[x];
        const Set u = backward(target, a);
        const Set g = globally(a);
        for (StateId x = 0; x < n_; ++x) r[x] = u[x] || g[x];
        return r;
      }
      default: throw Error(ErrorCode::NotCtlFragment, "quantified path formula outside the CTL fragment");
    }
  }

  const Model& m_;
  std::size_t n_;
  std::vector<std::vector<StateId>> pred_;
  std::vector<bool> inf_;
};
}  // namespace detail

inline Predicate textbook_ctl(const Model& m, const CtlPtr& f) {
  if (m.lat().size() != 2) throw Error(ErrorCode::NotBool2, "textbook labeling needs bool2");
  const auto s = detail::Textbook(m).state(f);
  Predicate r(m.size(), m.lat().bottom());
  for (StateId x = 0; x < m.size(); ++x) r[x] = s[x] ? m.lat().top() : m.lat().bottom();
  return r;
}

}  // namespace latmc::oracle
