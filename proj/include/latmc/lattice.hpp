#pragma once

// Finite distributive bounded lattices, optionally with a de Morgan involution.
// These are the truth-value domains of every other module.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latmc/error.hpp"

namespace latmc {

using Elem = std::uint16_t;

/// An element tagged with the identity of the lattice it came from.
struct LatticeElem {
  std::uint64_t lattice_id = 0;
  Elem index = 0;

  friend bool operator==(const LatticeElem&, const LatticeElem&) = default;
};

class Lattice {
 public:
  /// Validates the order table exhaustively and derives join/meet tables.
  /// `leq[a][b]` states a ⊑ b. `neg`, when present, must be an antitone involution.
  static Lattice from_order(std::string name, std::vector<std::string> elements,
                            const std::vector<std::vector<bool>>& leq,
                            std::optional<std::vector<Elem>> neg = std::nullopt) {
    const std::size_t n = elements.size();
    if (n == 0) throw Error(ErrorCode::Unbounded, "lattice '" + name + "' has no elements");
    if (n > 4096) throw Error(ErrorCode::TooLarge, "lattice '" + name + "' is too large");
    if (leq.size() != n) throw Error(ErrorCode::NotALattice, "order table has wrong row count");
    for (const auto& row : leq) {
      if (row.size() != n) throw Error(ErrorCode::NotALattice, "order table is not square");
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (!leq[a][a]) throw Error(ErrorCode::NotALattice, "order is not reflexive at " + elements[a]);
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && leq[a][b] && leq[b][a]) {
          throw Error(ErrorCode::NotALattice,
                      "order is not antisymmetric: " + elements[a] + ", " + elements[b]);
        }
        for (std::size_t c = 0; c < n; ++c) {
          if (leq[a][b] && leq[b][c] && !leq[a][c]) {
            throw Error(ErrorCode::NotALattice, "order is not transitive at " + elements[a] +
                                                    " ⊑ " + elements[b] + " ⊑ " + elements[c]);
          }
        }
      }
    }

    Lattice l;
    l.name_ = std::move(name);
    l.names_ = std::move(elements);
    l.size_ = n;
    l.leq_.assign(n * n, false);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) l.leq_[a * n + b] = leq[a][b];

    auto least_of = [&](const std::vector<Elem>& set) -> std::optional<Elem> {
      for (Elem c : set) {
        if (std::all_of(set.begin(), set.end(), [&](Elem d) { return l.leq(c, d); })) return c;
      }
      return std::nullopt;
    };
    auto greatest_of = [&](const std::vector<Elem>& set) -> std::optional<Elem> {
      for (Elem c : set) {
        if (std::all_of(set.begin(), set.end(), [&](Elem d) { return l.leq(d, c); })) return c;
      }
      return std::nullopt;
    };

    std::vector<Elem> all(n);
    std::iota(all.begin(), all.end(), Elem{0});
    auto bot = least_of(all);
    auto top = greatest_of(all);
    if (!bot || !top) throw Error(ErrorCode::Unbounded, "lattice '" + l.name_ + "' lacks ⊥ or ⊤");
    l.bottom_ = *bot;
    l.top_ = *top;

    l.join_.assign(n * n, 0);
    l.meet_.assign(n * n, 0);
    std::vector<Elem> bounds;
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        bounds.clear();
        for (Elem c = 0; c < n; ++c)
          if (l.leq(a, c) && l.leq(b, c)) bounds.push_back(c);
        auto j = least_of(bounds);
        if (!j) throw Error(ErrorCode::NotALattice, "no join of " + l.names_[a] + " and " + l.names_[b]);
        bounds.clear();
        for (Elem c = 0; c < n; ++c)
          if (l.leq(c, a) && l.leq(c, b)) bounds.push_back(c);
        auto m = greatest_of(bounds);
        if (!m) throw Error(ErrorCode::NotALattice, "no meet of " + l.names_[a] + " and " + l.names_[b]);
        l.join_[a * n + b] = *j;
        l.meet_[a * n + b] = *m;
      }
    }

    // For finite lattices one distributive law implies the other.
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c) {
          if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) {
            throw Error(ErrorCode::NotDistributive, "lattice '" + l.name_ + "' fails distributivity at (" +
                                                        l.names_[a] + ", " + l.names_[b] + ", " +
                                                        l.names_[c] + ")");
          }
        }

    if (neg) {
      if (neg->size() != n) throw Error(ErrorCode::BadInvolution, "involution table has wrong size");
      for (Elem a = 0; a < n; ++a) {
        if ((*neg)[a] >= n) throw Error(ErrorCode::BadInvolution, "involution maps outside the lattice");
      }
      for (Elem a = 0; a < n; ++a) {
        if ((*neg)[(*neg)[a]] != a) throw Error(ErrorCode::BadInvolution, "¬¬" + l.names_[a] + " ≠ " + l.names_[a]);
        for (Elem b = 0; b < n; ++b) {
          if (l.leq(a, b) && !l.leq((*neg)[b], (*neg)[a])) {
            throw Error(ErrorCode::BadInvolution, "involution is not antitone at " + l.names_[a] + " ⊑ " + l.names_[b]);
          }
        }
      }
      l.neg_ = std::move(neg);
    }

    l.compute_height();
    return l;
  }

  /// bool2, chainN (N ≥ 2) and squareM (M ≥ 1).
  static Lattice builtin(std::string_view name) {
    if (name == "bool2") {
      return from_order("bool2", {"⊥", "⊤"}, {{true, true}, {false, true}}, std::vector<Elem>{1, 0});
    }
    auto parse_suffix = [&](std::string_view prefix) -> std::optional<unsigned> {
      if (name.substr(0, prefix.size()) != prefix || name.size() == prefix.size()) return std::nullopt;
      unsigned v = 0;
      for (char ch : name.substr(prefix.size())) {
        if (ch < '0' || ch > '9') return std::nullopt;
        v = v * 10 + static_cast<unsigned>(ch - '0');
        if (v > 4096) return std::nullopt;
      }
      return v;
    };
    if (auto n = parse_suffix("chain")) {
      if (*n < 2) throw Error(ErrorCode::BadDocument, "chainN needs N ≥ 2");
      std::vector<std::string> names;
      for (unsigned i = 0; i < *n; ++i) {
        const unsigned den = *n - 1;
        const unsigned g = std::gcd(i, den);
        if (i == 0) names.emplace_back("0");
        else if (i == den) names.emplace_back("1");
        else names.push_back(std::to_string(i / g) + "/" + std::to_string(den / g));
      }
      std::vector<std::vector<bool>> leq(*n, std::vector<bool>(*n));
      std::vector<Elem> neg(*n);
      for (unsigned i = 0; i < *n; ++i) {
        neg[i] = static_cast<Elem>(*n - 1 - i);
        for (unsigned j = 0; j < *n; ++j) leq[i][j] = i <= j;
      }
      return from_order(std::string(name), std::move(names), leq, std::move(neg));
    }
    if (auto m = parse_suffix("square")) {
      if (*m < 1 || *m > 10) throw Error(ErrorCode::BadDocument, "squareM needs 1 ≤ M ≤ 10");
      const unsigned n = 1u << *m;
      std::vector<std::string> names;
      for (unsigned v = 0; v < n; ++v) {
        std::string s;
        for (unsigned bit = 0; bit < *m; ++bit) s.push_back((v >> bit) & 1u ? '1' : '0');
        names.push_back(std::move(s));
      }
      std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
      std::vector<Elem> neg(n);
      for (unsigned a = 0; a < n; ++a) {
        for (unsigned b = 0; b < n; ++b) leq[a][b] = (a & b) == a;
        // complement each coordinate and reverse the coordinate order
        unsigned r = 0;
        for (unsigned bit = 0; bit < *m; ++bit)
          if (!((a >> bit) & 1u)) r |= 1u << (*m - 1 - bit);
        neg[a] = static_cast<Elem>(r);
      }
      return from_order(std::string(name), std::move(names), leq, std::move(neg));
    }
    throw Error(ErrorCode::BadDocument, "unknown builtin lattice '" + std::string(name) + "'");
  }

  /// Same carrier with the order reversed; keeps the involution.
  Lattice opposite() const {
    Lattice l = *this;
    l.name_ = name_ + "^op";
    l.id_ = next_id();
    std::swap(l.bottom_, l.top_);
    std::swap(l.join_, l.meet_);
    for (std::size_t a = 0; a < size_; ++a)
      for (std::size_t b = 0; b < size_; ++b) l.leq_[a * size_ + b] = leq_[b * size_ + a];
    return l;
  }

  const std::string& name() const noexcept { return name_; }
  std::uint64_t id() const noexcept { return id_; }
  std::size_t size() const noexcept { return size_; }
  Elem bottom() const noexcept { return bottom_; }
  Elem top() const noexcept { return top_; }
  bool has_involution() const noexcept { return neg_.has_value(); }
  /// Length of the longest strictly increasing chain, counted in steps.
  std::size_t height() const noexcept { return height_; }

  bool leq(Elem a, Elem b) const noexcept { return leq_[a * size_ + b]; }
  Elem join(Elem a, Elem b) const noexcept { return join_[a * size_ + b]; }
  Elem meet(Elem a, Elem b) const noexcept { return meet_[a * size_ + b]; }
  Elem neg(Elem a) const {
    if (!neg_) throw Error(ErrorCode::NoInvolution, "lattice '" + name_ + "' has no involution");
    return (*neg_)[a];
  }

  Elem join_all(std::span<const Elem> xs) const noexcept {
    Elem r = bottom_;
    for (Elem x : xs) r = join(r, x);
    return r;
  }
  Elem meet_all(std::span<const Elem> xs) const noexcept {
    Elem r = top_;
    for (Elem x : xs) r = meet(r, x);
    return r;
  }

  const std::string& element_name(Elem a) const { return names_.at(a); }

  /// Resolves an identifier; ⊥/⊤ (and bot/top/0/1) are accepted as aliases
  /// when they are not declared names of another element.
  Elem element(std::string_view text) const {
    for (std::size_t i = 0; i < size_; ++i)
      if (names_[i] == text) return static_cast<Elem>(i);
    if (text == "⊥" || text == "bot" || text == "0") return bottom_;
    if (text == "⊤" || text == "top" || text == "1") return top_;
    throw Error(ErrorCode::UnknownElement,
                "'" + std::string(text) + "' is not an element of lattice '" + name_ + "'");
  }

  LatticeElem tag(Elem a) const noexcept { return {id_, a}; }
  Elem untag(const LatticeElem& e) const {
    if (e.lattice_id != id_) throw Error(ErrorCode::ForeignElement, "element from another lattice used with '" + name_ + "'");
    if (e.index >= size_) throw Error(ErrorCode::ForeignElement, "element index out of range");
    return e.index;
  }

  std::vector<Elem> elements() const {
    std::vector<Elem> v(size_);
    std::iota(v.begin(), v.end(), Elem{0});
    return v;
  }

  /// Elements b with a ⊏ b and nothing strictly between.
  const std::vector<Elem>& upper_covers(Elem a) const { return covers_[a]; }

 private:
  Lattice() : id_(next_id()) {}

  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
  }

  void compute_height() {
    covers_.assign(size_, {});
    for (Elem a = 0; a < size_; ++a) {
      for (Elem b = 0; b < size_; ++b) {
        if (a == b || !leq(a, b)) continue;
        bool direct = true;
        for (Elem c = 0; c < size_ && direct; ++c)
          if (c != a && c != b && leq(a, c) && leq(c, b)) direct = false;
        if (direct) covers_[a].push_back(b);
      }
    }
    // longest path from ⊥ along cover edges; elements sorted by number of lower bounds
    std::vector<Elem> order = elements();
    auto rank = [&](Elem a) {
      std::size_t r = 0;
      for (Elem b = 0; b < size_; ++b) r += leq(b, a);
      return r;
    };
    std::sort(order.begin(), order.end(), [&](Elem a, Elem b) { return rank(a) < rank(b); });
    std::vector<std::size_t> depth(size_, 0);
    for (Elem a : order)
      for (Elem b : covers_[a]) depth[b] = std::max(depth[b], depth[a] + 1);
    height_ = depth[top_];
  }

  std::uint64_t id_;
  std::string name_;
  std::vector<std::string> names_;
  std::size_t size_ = 0;
  std::vector<bool> leq_;
  std::vector<Elem> join_;
  std::vector<Elem> meet_;
  std::optional<std::vector<Elem>> neg_;
  std::vector<std::vector<Elem>> covers_;
  Elem bottom_ = 0;
  Elem top_ = 0;
  std::size_t height_ = 0;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// Terms over lattice constants and, optionally, continuation variables k(y).
struct LatticeTerm {
  enum class Op { Const, Var, Join, Meet, Neg, BigJoin, BigMeet };

  Op op = Op::Const;
  LatticeElem value{};
  std::size_t var = 0;
  std::vector<LatticeTerm> args;

  static LatticeTerm constant(LatticeElem e) { return {Op::Const, e, 0, {}}; }
  static LatticeTerm variable(std::size_t y) { return {Op::Var, {}, y, {}}; }
  static LatticeTerm join(LatticeTerm a, LatticeTerm b) { return {Op::Join, {}, 0, {std::move(a), std::move(b)}}; }
  static LatticeTerm meet(LatticeTerm a, LatticeTerm b) { return {Op::Meet, {}, 0, {std::move(a), std::move(b)}}; }
  static LatticeTerm negate(LatticeTerm a) { return {Op::Neg, {}, 0, {std::move(a)}}; }
  static LatticeTerm big_join(std::vector<LatticeTerm> xs) { return {Op::BigJoin, {}, 0, std::move(xs)}; }
  static LatticeTerm big_meet(std::vector<LatticeTerm> xs) { return {Op::BigMeet, {}, 0, std::move(xs)}; }

  bool uses_negation() const {
    return op == Op::Neg || std::any_of(args.begin(), args.end(), [](const LatticeTerm& t) { return t.uses_negation(); });
  }
};

/// Evaluates a term; `valuation[y]` supplies k(y) for variable nodes.
inline Elem evaluate(const Lattice& l, const LatticeTerm& t, std::span<const Elem> valuation = {}) {
  using Op = LatticeTerm::Op;
  switch (t.op) {
    case Op::Const: return l.untag(t.value);
    case Op::Var:
      if (t.var >= valuation.size()) throw Error(ErrorCode::UnknownState, "term variable k(" + std::to_string(t.var) + ") is unbound");
      return valuation[t.var];
    case Op::Join: return l.join(evaluate(l, t.args.at(0), valuation), evaluate(l, t.args.at(1), valuation));
    case Op::Meet: return l.meet(evaluate(l, t.args.at(0), valuation), evaluate(l, t.args.at(1), valuation));
    case Op::Neg: return l.neg(evaluate(l, t.args.at(0), valuation));
    case Op::BigJoin: {
      Elem r = l.bottom();
      for (const auto& a : t.args) r = l.join(r, evaluate(l, a, valuation));
      return r;
    }
    case Op::BigMeet: {
      Elem r = l.top();
      for (const auto& a : t.args) r = l.meet(r, evaluate(l, a, valuation));
      return r;
    }
  }
  throw Error(ErrorCode::Internal, "bad term");
}

inline LatticeElem eval_term(const Lattice& l, const LatticeTerm& t) { return l.tag(evaluate(l, t)); }

/// `{"kind":"builtin","name":"chain3"}` or
/// `{"kind":"explicit","elements":[...],"leq":[[...]],"neg":[...]}`; a bare string names a builtin.
inline Lattice load_lattice(const nlohmann::json& doc) {
  if (doc.is_string()) return Lattice::builtin(doc.get<std::string>());
  if (!doc.is_object()) throw Error(ErrorCode::BadDocument, "lattice description must be an object or a builtin name");
  const std::string kind = doc.value("kind", "builtin");
  if (kind == "builtin") {
    if (!doc.contains("name")) throw Error(ErrorCode::BadDocument, "builtin lattice needs a name");
    return Lattice::builtin(doc.at("name").get<std::string>());
  }
  if (kind != "explicit") throw Error(ErrorCode::BadDocument, "unknown lattice kind '" + kind + "'");

  std::vector<std::string> names;
  for (const auto& e : doc.at("elements")) names.push_back(e.is_string() ? e.get<std::string>() : e.dump());
  const std::size_t n = names.size();
  auto index_of = [&](const nlohmann::json& ref) -> Elem {
    if (ref.is_number_unsigned() && ref.get<std::size_t>() < n) return static_cast<Elem>(ref.get<std::size_t>());
    const std::string s = ref.is_string() ? ref.get<std::string>() : ref.dump();
    for (std::size_t i = 0; i < n; ++i)
      if (names[i] == s) return static_cast<Elem>(i);
    throw Error(ErrorCode::UnknownElement, "'" + s + "' is not a declared element");
  };

  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  const auto& order = doc.at("leq");
  const bool matrix = order.size() == n && std::all_of(order.begin(), order.end(), [&](const nlohmann::json& row) {
                        return row.is_array() && row.size() == n &&
                               std::all_of(row.begin(), row.end(), [](const nlohmann::json& c) { return c.is_boolean() || c.is_number(); });
                      });
  if (matrix) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto& c = order[a][b];
        leq[a][b] = c.is_boolean() ? c.get<bool>() : c.get<int>() != 0;
      }
  } else {
    // list of [a, b] pairs meaning a ⊑ b; closed reflexively and transitively
    for (std::size_t a = 0; a < n; ++a) leq[a][a] = true;
    for (const auto& pair : order) {
      if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::BadDocument, "leq pairs must be [a, b]");
      leq[index_of(pair[0])][index_of(pair[1])] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (leq[a][k] && leq[k][b]) leq[a][b] = true;
  }

  std::optional<std::vector<Elem>> neg;
  if (doc.contains("neg") && !doc.at("neg").is_null()) {
    neg.emplace();
    for (const auto& e : doc.at("neg")) neg->push_back(index_of(e));
  }
  return Lattice::from_order(doc.value("name", std::string("explicit")), std::move(names), leq, std::move(neg));
}

}  // namespace latmc
