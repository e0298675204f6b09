#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "latmc/error.hpp"
#include "latmc/predicate.hpp"

namespace latmc {

enum class Extremity { Least, Greatest };

struct IterationLimits {
  /// Overrides the chain-length cap when set.
  std::optional<std::size_t> max_iters;
  std::size_t materialize_bound = 4096;
};

/// Longest strictly monotone chain in Ω^n, plus one for the confirming step.
inline std::size_t chain_cap(const Lattice& l, std::size_t n, const IterationLimits& lim = {}) {
  if (lim.max_iters) return *lim.max_iters;
  return n * l.height() + 1;
}

template <class T>
struct FixpointResult {
  T value;
  std::size_t iterations = 0;
};

/// Iterates `step` from `start` until two consecutive iterates agree.
/// A monotone step from ⊥ (or ⊤) stabilizes within `cap` steps on a finite lattice;
/// overrunning the cap means the operator was not monotone.
template <class T, class Step>
FixpointResult<T> kleene_fixpoint(T start, Step&& step, std::size_t cap) {
  T cur = std::move(start);
  for (std::size_t i = 1; i <= cap + 1; ++i) {
    T next = step(cur);
    if (next == cur) return {std::move(cur), i};
    cur = std::move(next);
  }
  throw Error(ErrorCode::NoConvergence, "no fixpoint after " + std::to_string(cap + 1) + " iterations");
}

/// Least or greatest fixpoint of a predicate transformer over Ω^n.
template <class Step>
FixpointResult<Predicate> kleene_fixpoint(const Lattice& l, std::size_t n, Extremity ext, Step&& step,
                                          const IterationLimits& lim = {}) {
  Predicate start(n, ext == Extremity::Least ? l.bottom() : l.top());
  return kleene_fixpoint(std::move(start), std::forward<Step>(step), chain_cap(l, n, lim));
}

}  // namespace latmc
