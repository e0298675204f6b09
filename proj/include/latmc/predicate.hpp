#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "latmc/lattice.hpp"

namespace latmc {

using StateId = std::size_t;

/// A total map from states to lattice values; doubles as a continuation over states.
struct Predicate {
  std::vector<Elem> values;

  Predicate() = default;
  explicit Predicate(std::vector<Elem> v) : values(std::move(v)) {}
  Predicate(std::size_t n, Elem fill) : values(n, fill) {}

  std::size_t size() const noexcept { return values.size(); }
  Elem operator[](StateId x) const { return values[x]; }
  Elem& operator[](StateId x) { return values[x]; }

  friend bool operator==(const Predicate&, const Predicate&) = default;
  friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

inline Predicate constant_predicate(std::size_t n, Elem a) { return Predicate(n, a); }

inline bool pointwise_leq(const Lattice& l, const Predicate& a, const Predicate& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!l.leq(a[i], b[i])) return false;
  return true;
}

inline Predicate pointwise_join(const Lattice& l, const Predicate& a, const Predicate& b) {
  Predicate r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = l.join(a[i], b[i]);
  return r;
}

inline Predicate pointwise_meet(const Lattice& l, const Predicate& a, const Predicate& b) {
  Predicate r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = l.meet(a[i], b[i]);
  return r;
}

inline Predicate pointwise_neg(const Lattice& l, const Predicate& a) {
  Predicate r = a;
  for (auto& v : r.values) v = l.neg(v);
  return r;
}

/// The finite space Ω^X, indexed in mixed radix with state 0 least significant.
class PredicateSpace {
 public:
  PredicateSpace(std::size_t lattice_size, std::size_t states) : base_(lattice_size), states_(states) {
    count_ = 1;
    for (std::size_t i = 0; i < states; ++i) {
      if (count_ > std::numeric_limits<std::size_t>::max() / (base_ ? base_ : 1)) {
        count_ = std::numeric_limits<std::size_t>::max();
        overflow_ = true;
        break;
      }
      count_ *= base_;
    }
  }

  /// Saturates at SIZE_MAX.
  std::size_t count() const noexcept { return count_; }
  bool overflow() const noexcept { return overflow_; }
  bool within(std::size_t bound) const noexcept { return !overflow_ && count_ <= bound; }

  Predicate decode(std::size_t index) const {
    Predicate p(states_, 0);
    for (std::size_t i = 0; i < states_; ++i) {
      p[i] = static_cast<Elem>(index % base_);
      index /= base_;
    }
    return p;
  }

  std::size_t encode(const Predicate& p) const {
    std::size_t index = 0;
    for (std::size_t i = states_; i-- > 0;) index = index * base_ + p[i];
    return index;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < count_; ++i) f(decode(i));
  }

 private:
  std::size_t base_;
  std::size_t states_;
  std::size_t count_ = 1;
  bool overflow_ = false;
};

}  // namespace latmc
