#pragma once

// Abstract syntax for the modal mu-calculus (FML) and for CTL*/CTL, with the
// surface parser, pretty printer, negation normal form, fragment classifier and
// the CTL → FML fixpoint encoding.

#include <cctype>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "latmc/error.hpp"

namespace latmc {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// ---------------------------------------------------------------------------
// FML

enum class FmlKind { Var, Atom, NegAtom, True, False, And, Or, Dia, Box, Mu, Nu, Not };

struct Fml;
using FmlPtr = std::shared_ptr<const Fml>;

/// Unary nodes keep their operand in `left`; Mu/Nu keep the bound name in `name`.
struct Fml {
  FmlKind kind;
  std::string name;
  FmlPtr left;
  FmlPtr right;
  Span span;
};

namespace fml {
inline FmlPtr make(FmlKind k, std::string name = {}, FmlPtr l = nullptr, FmlPtr r = nullptr, Span s = {}) {
  return std::make_shared<const Fml>(Fml{k, std::move(name), std::move(l), std::move(r), s});
}
inline FmlPtr var(std::string n) { return make(FmlKind::Var, std::move(n)); }
inline FmlPtr atom(std::string n) { return make(FmlKind::Atom, std::move(n)); }
inline FmlPtr neg_atom(std::string n) { return make(FmlKind::NegAtom, std::move(n)); }
inline FmlPtr tt() { return make(FmlKind::True); }
inline FmlPtr ff() { return make(FmlKind::False); }
inline FmlPtr conj(FmlPtr a, FmlPtr b) { return make(FmlKind::And, {}, std::move(a), std::move(b)); }
inline FmlPtr disj(FmlPtr a, FmlPtr b) { return make(FmlKind::Or, {}, std::move(a), std::move(b)); }
inline FmlPtr dia(FmlPtr a) { return make(FmlKind::Dia, {}, std::move(a)); }
inline FmlPtr box(FmlPtr a) { return make(FmlKind::Box, {}, std::move(a)); }
inline FmlPtr mu(std::string v, FmlPtr body) { return make(FmlKind::Mu, std::move(v), std::move(body)); }
inline FmlPtr nu(std::string v, FmlPtr body) { return make(FmlKind::Nu, std::move(v), std::move(body)); }
inline FmlPtr negation(FmlPtr a) { return make(FmlKind::Not, {}, std::move(a)); }
}  // namespace fml

/// Structural equality, ignoring source spans.
inline bool same(const FmlPtr& a, const FmlPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->kind == b->kind && a->name == b->name && same(a->left, b->left) && same(a->right, b->right);
}

inline void collect_free_variables(const FmlPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!f) return;
  switch (f->kind) {
    case FmlKind::Var:
      if (!bound.count(f->name)) out.insert(f->name);
      return;
    case FmlKind::Mu:
    case FmlKind::Nu: {
      const bool fresh = bound.insert(f->name).second;
      collect_free_variables(f->left, bound, out);
      if (fresh) bound.erase(f->name);
      return;
    }
    default:
      collect_free_variables(f->left, bound, out);
      collect_free_variables(f->right, bound, out);
  }
}

inline std::set<std::string> free_variables(const FmlPtr& f) {
  std::set<std::string> bound, out;
  collect_free_variables(f, bound, out);
  return out;
}

inline void collect_atoms(const FmlPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == FmlKind::Atom || f->kind == FmlKind::NegAtom) out.insert(f->name);
  collect_atoms(f->left, out);
  collect_atoms(f->right, out);
}

inline std::size_t formula_size(const FmlPtr& f) {
  return f ? 1 + formula_size(f->left) + formula_size(f->right) : 0;
}

/// No ν-variable occurs free inside a μ-subformula of its own body, and vice versa.
inline bool is_alternation_free(const FmlPtr& f) {
  if (!f) return true;
  if (f->kind == FmlKind::Mu || f->kind == FmlKind::Nu) {
    const FmlKind other = f->kind == FmlKind::Mu ? FmlKind::Nu : FmlKind::Mu;
    std::function<bool(const FmlPtr&)> clean = [&](const FmlPtr& g) -> bool {
      if (!g) return true;
      if (g->kind == other && free_variables(g).count(f->name)) return false;
      return clean(g->left) && clean(g->right);
    };
    if (!clean(f->left)) return false;
  }
  return is_alternation_free(f->left) && is_alternation_free(f->right);
}

namespace detail {
inline FmlPtr fml_nnf(const FmlPtr& f, bool negate, std::set<std::string>& flipped) {
  using K = FmlKind;
  switch (f->kind) {
    case K::Var: {
      const bool effective = negate != (flipped.count(f->name) > 0);
      if (effective) {
        throw Error(ErrorCode::NegationOfNonAtom,
                    "negation of fixpoint variable '" + f->name + "' at position " + std::to_string(f->span.begin));
      }
      return fml::make(K::Var, f->name, nullptr, nullptr, f->span);
    }
    case K::Atom: return fml::make(negate ? K::NegAtom : K::Atom, f->name, nullptr, nullptr, f->span);
    case K::NegAtom: return fml::make(negate ? K::Atom : K::NegAtom, f->name, nullptr, nullptr, f->span);
    case K::True: return fml::make(negate ? K::False : K::True, {}, nullptr, nullptr, f->span);
    case K::False: return fml::make(negate ? K::True : K::False, {}, nullptr, nullptr, f->span);
    case K::And:
    case K::Or: {
      const K k = (f->kind == K::And) != negate ? K::And : K::Or;
      return fml::make(k, {}, fml_nnf(f->left, negate, flipped), fml_nnf(f->right, negate, flipped), f->span);
    }
    case K::Dia:
    case K::Box: {
      const K k = (f->kind == K::Dia) != negate ? K::Dia : K::Box;
      return fml::make(k, {}, fml_nnf(f->left, negate, flipped), nullptr, f->span);
    }
    case K::Mu:
    case K::Nu: {
      const K k = (f->kind == K::Mu) != negate ? K::Mu : K::Nu;
      const bool was = flipped.count(f->name) > 0;
      if (negate) flipped.insert(f->name);
      else flipped.erase(f->name);
      auto body = fml_nnf(f->left, negate, flipped);
      if (was) flipped.insert(f->name);
      else flipped.erase(f->name);
      return fml::make(k, f->name, std::move(body), nullptr, f->span);
    }
    case K::Not: return fml_nnf(f->left, !negate, flipped);
  }
  throw Error(ErrorCode::Internal, "bad FML node");
}
}  // namespace detail

/// Pushes negation to atoms: ¬◇ ≡ □¬, ¬μu.θ(u) ≡ νu.¬θ(¬u), de Morgan for ∧/∨.
inline FmlPtr to_nnf(const FmlPtr& f) {
  std::set<std::string> flipped;
  return detail::fml_nnf(f, false, flipped);
}

// ---------------------------------------------------------------------------
// CTL*

enum class CtlKind {
  // state formulas
  Atom, NegAtom, True, False, And, Or, E, A, Not,
  // path formulas
  Lift, Next, Until, WUntil, PathAnd, PathOr, PathNot,
};

struct Ctl;
using CtlPtr = std::shared_ptr<const Ctl>;

/// Until keeps hold in `left` and goal in `right`; WUntil keeps its first and
/// second operands in `left`/`right` (νw. first ⊓ (second ⊔ w⁺)).
struct Ctl {
  CtlKind kind;
  std::string name;
  CtlPtr left;
  CtlPtr right;
  Span span;

  bool is_path() const noexcept { return kind >= CtlKind::Lift; }
};

namespace ctl {
inline CtlPtr make(CtlKind k, std::string name = {}, CtlPtr l = nullptr, CtlPtr r = nullptr, Span s = {}) {
  return std::make_shared<const Ctl>(Ctl{k, std::move(name), std::move(l), std::move(r), s});
}
inline CtlPtr atom(std::string n) { return make(CtlKind::Atom, std::move(n)); }
inline CtlPtr neg_atom(std::string n) { return make(CtlKind::NegAtom, std::move(n)); }
inline CtlPtr tt() { return make(CtlKind::True); }
inline CtlPtr ff() { return make(CtlKind::False); }
inline CtlPtr conj(CtlPtr a, CtlPtr b) { return make(CtlKind::And, {}, std::move(a), std::move(b)); }
inline CtlPtr disj(CtlPtr a, CtlPtr b) { return make(CtlKind::Or, {}, std::move(a), std::move(b)); }
inline CtlPtr E(CtlPtr p) { return make(CtlKind::E, {}, std::move(p)); }
inline CtlPtr A(CtlPtr p) { return make(CtlKind::A, {}, std::move(p)); }
inline CtlPtr negation(CtlPtr a) { return make(CtlKind::Not, {}, std::move(a)); }
inline CtlPtr lift(CtlPtr s) { return make(CtlKind::Lift, {}, std::move(s)); }
inline CtlPtr next(CtlPtr p) { return make(CtlKind::Next, {}, std::move(p)); }
inline CtlPtr until(CtlPtr hold, CtlPtr goal) { return make(CtlKind::Until, {}, std::move(hold), std::move(goal)); }
inline CtlPtr wuntil(CtlPtr first, CtlPtr second) { return make(CtlKind::WUntil, {}, std::move(first), std::move(second)); }
inline CtlPtr path_and(CtlPtr a, CtlPtr b) { return make(CtlKind::PathAnd, {}, std::move(a), std::move(b)); }
inline CtlPtr path_or(CtlPtr a, CtlPtr b) { return make(CtlKind::PathOr, {}, std::move(a), std::move(b)); }
inline CtlPtr path_not(CtlPtr a) { return make(CtlKind::PathNot, {}, std::move(a)); }

// CTL shorthands over state formulas
inline CtlPtr EX(CtlPtr s) { return E(next(lift(std::move(s)))); }
inline CtlPtr AX(CtlPtr s) { return A(next(lift(std::move(s)))); }
inline CtlPtr EU(CtlPtr hold, CtlPtr goal) { return E(until(lift(std::move(hold)), lift(std::move(goal)))); }
inline CtlPtr AU(CtlPtr hold, CtlPtr goal) { return A(until(lift(std::move(hold)), lift(std::move(goal)))); }
inline CtlPtr EW(CtlPtr first, CtlPtr second) { return E(wuntil(lift(std::move(first)), lift(std::move(second)))); }
inline CtlPtr AW(CtlPtr first, CtlPtr second) { return A(wuntil(lift(std::move(first)), lift(std::move(second)))); }
}  // namespace ctl

inline bool same(const CtlPtr& a, const CtlPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->kind == b->kind && a->name == b->name && same(a->left, b->left) && same(a->right, b->right);
}

inline void collect_atoms(const CtlPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == CtlKind::Atom || f->kind == CtlKind::NegAtom) out.insert(f->name);
  collect_atoms(f->left, out);
  collect_atoms(f->right, out);
}

namespace detail {
inline CtlPtr ctl_nnf(const CtlPtr& f, bool negate) {
  using K = CtlKind;
  auto mk = [&](K k, CtlPtr l = nullptr, CtlPtr r = nullptr) { return ctl::make(k, f->name, std::move(l), std::move(r), f->span); };
  switch (f->kind) {
    case K::Atom: return mk(negate ? K::NegAtom : K::Atom);
    case K::NegAtom: return mk(negate ? K::Atom : K::NegAtom);
    case K::True: return mk(negate ? K::False : K::True);
    case K::False: return mk(negate ? K::True : K::False);
    case K::And:
    case K::Or:
      return mk((f->kind == K::And) != negate ? K::And : K::Or, ctl_nnf(f->left, negate), ctl_nnf(f->right, negate));
    case K::E:
    case K::A: return mk((f->kind == K::E) != negate ? K::E : K::A, ctl_nnf(f->left, negate));
    case K::Not:
    case K::PathNot: return ctl_nnf(f->left, !negate);
    case K::Lift: return mk(K::Lift, ctl_nnf(f->left, negate));
    case K::Next: return mk(K::Next, ctl_nnf(f->left, negate));
    case K::PathAnd:
    case K::PathOr:
      return mk((f->kind == K::PathAnd) != negate ? K::PathAnd : K::PathOr, ctl_nnf(f->left, negate),
                ctl_nnf(f->right, negate));
    case K::Until:
      // ¬(hold U goal) = (¬goal W ¬hold)
      if (negate) return mk(K::WUntil, ctl_nnf(f->right, true), ctl_nnf(f->left, true));
      return mk(K::Until, ctl_nnf(f->left, false), ctl_nnf(f->right, false));
    case K::WUntil:
      // ¬(first W second) = (¬second U ¬first)
      if (negate) return mk(K::Until, ctl_nnf(f->right, true), ctl_nnf(f->left, true));
      return mk(K::WUntil, ctl_nnf(f->left, false), ctl_nnf(f->right, false));
  }
  throw Error(ErrorCode::Internal, "bad CTL* node");
}
}  // namespace detail

/// Pushes negation to atoms via the E/A and U/W dualities.
inline CtlPtr to_nnf(const CtlPtr& f) { return detail::ctl_nnf(f, false); }

enum class FragmentClass { CtlNoUW, CtlUOnly, CtlWOnly, CtlMixed, GeneralCtlStar };

constexpr std::string_view to_string(FragmentClass c) {
  switch (c) {
    case FragmentClass::CtlNoUW: return "CtlNoUW";
    case FragmentClass::CtlUOnly: return "CtlUOnly";
    case FragmentClass::CtlWOnly: return "CtlWOnly";
    case FragmentClass::CtlMixed: return "CtlMixed";
    case FragmentClass::GeneralCtlStar: return "GeneralCtlStar";
  }
  return "?";
}

namespace detail {
struct FragmentScan {
  bool ctl = true;
  std::size_t until = 0;
  std::size_t wuntil = 0;
};

inline void scan_state(const CtlPtr& f, FragmentScan& s);

inline void scan_lifted(const CtlPtr& p, FragmentScan& s) {
  if (p->kind != CtlKind::Lift) {
    s.ctl = false;
    return;
  }
  scan_state(p->left, s);
}

inline void scan_state(const CtlPtr& f, FragmentScan& s) {
  using K = CtlKind;
  switch (f->kind) {
    case K::And:
    case K::Or:
      scan_state(f->left, s);
      scan_state(f->right, s);
      return;
    case K::Not: scan_state(f->left, s); return;
    case K::E:
    case K::A: {
      const CtlPtr& p = f->left;
      switch (p->kind) {
        case K::Lift: scan_state(p->left, s); return;
        case K::Next: scan_lifted(p->left, s); return;
        case K::Until:
        case K::WUntil:
          ++(p->kind == K::Until ? s.until : s.wuntil);
          scan_lifted(p->left, s);
          scan_lifted(p->right, s);
          return;
        default: s.ctl = false; return;
      }
    }
    default: return;
  }
}
}  // namespace detail

/// CTL fragment: every quantified path formula is Lift ψ, X ψ, ψ U ψ or ψ W ψ over state formulas.
inline FragmentClass classify_fragment(const CtlPtr& f) {
  detail::FragmentScan s;
  detail::scan_state(f, s);
  if (!s.ctl) return FragmentClass::GeneralCtlStar;
  if (s.until && s.wuntil) return FragmentClass::CtlMixed;
  if (s.until) return FragmentClass::CtlUOnly;
  if (s.wuntil) return FragmentClass::CtlWOnly;
  return FragmentClass::CtlNoUW;
}

inline bool is_ctl(const CtlPtr& f) { return classify_fragment(f) != FragmentClass::GeneralCtlStar; }

struct CtlFormula {
  CtlPtr root;
  FragmentClass fragment = FragmentClass::GeneralCtlStar;
};

// ---------------------------------------------------------------------------
// Lexer and parser

enum class Logic { Fml, CtlStar };

namespace detail {

enum class Tok { Ident, LParen, RParen, Dot, And, Or, Not, Dia, Box, TT, FF, Mu, Nu, E, A, X, U, W, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> lex(std::string_view text, Logic logic) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::SyntaxError, what + " at position " + std::to_string(i));
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    const std::string_view rest = text.substr(i);
    auto starts = [&](std::string_view s) { return rest.substr(0, s.size()) == s; };
    if (c == '(') { out.push_back({Tok::LParen, "(", i}); ++i; continue; }
    if (c == ')') { out.push_back({Tok::RParen, ")", i}); ++i; continue; }
    if (c == '.') { out.push_back({Tok::Dot, ".", i}); ++i; continue; }
    if (c == '~' || c == '!') { out.push_back({Tok::Not, "~", i}); ++i; continue; }
    if (starts("/\\")) { out.push_back({Tok::And, "/\\", i}); i += 2; continue; }
    if (starts("\\/")) { out.push_back({Tok::Or, "\\/", i}); i += 2; continue; }
    if (starts("<>")) {
      if (logic != Logic::Fml) fail("'<>' is not CTL* syntax");
      out.push_back({Tok::Dia, "<>", i}); i += 2; continue;
    }
    if (starts("[]")) {
      if (logic != Logic::Fml) fail("'[]' is not CTL* syntax");
      out.push_back({Tok::Box, "[]", i}); i += 2; continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\''))
        ++i;
      std::string word(text.substr(start, i - start));
      if (word == "tt") { out.push_back({Tok::TT, word, start}); continue; }
      if (word == "ff") { out.push_back({Tok::FF, word, start}); continue; }
      if (logic == Logic::Fml) {
        if (word == "mu") { out.push_back({Tok::Mu, word, start}); continue; }
        if (word == "nu") { out.push_back({Tok::Nu, word, start}); continue; }
      } else {
        auto kw = [](char ch) {
          switch (ch) {
            case 'E': return Tok::E;
            case 'A': return Tok::A;
            case 'X': return Tok::X;
            case 'U': return Tok::U;
            case 'W': return Tok::W;
            default: return Tok::Ident;
          }
        };
        if (word.size() == 1 && kw(word[0]) != Tok::Ident) {
          out.push_back({kw(word[0]), word, start});
          continue;
        }
        // "EX", "AX", "EXAX": runs of quantifiers and X split into keywords
        const bool run = word.size() > 1 && word.find_first_not_of("EAX") == std::string::npos &&
                         (word[0] == 'E' || word[0] == 'A');
        if (run) {
          for (std::size_t k = 0; k < word.size(); ++k) out.push_back({kw(word[k]), std::string(1, word[k]), start + k});
          continue;
        }
      }
      out.push_back({Tok::Ident, std::move(word), start});
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Logic logic, std::set<std::string> free_vars)
      : tokens_(lex(text, logic)), free_vars_(std::move(free_vars)) {}

  FmlPtr parse_fml() {
    auto f = fml_expr();
    expect(Tok::End, "end of input");
    return f;
  }

  CtlPtr parse_ctl() {
    auto raw = ctl_expr();
    expect(Tok::End, "end of input");
    return to_state(raw);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw Error(ErrorCode::SyntaxError,
                what + " at position " + std::to_string(t.pos) + (t.kind == Tok::End ? " (end of input)" : " near '" + t.text + "'"));
  }
  void expect(Tok k, const std::string& what) {
    if (!accept(k)) fail("expected " + what);
  }

  // FML ---------------------------------------------------------------------
  FmlPtr fml_expr() {
    auto lhs = fml_and();
    while (peek().kind == Tok::Or) {
      const std::size_t at = take().pos;
      auto rhs = fml_and();
      lhs = fml::make(FmlKind::Or, {}, lhs, rhs, {at, at + 2});
    }
    return lhs;
  }

  FmlPtr fml_and() {
    auto lhs = fml_unary();
    while (peek().kind == Tok::And) {
      const std::size_t at = take().pos;
      auto rhs = fml_unary();
      lhs = fml::make(FmlKind::And, {}, lhs, rhs, {at, at + 2});
    }
    return lhs;
  }

  FmlPtr fml_unary() {
    const Token& t = peek();
    const Span s{t.pos, t.pos + t.text.size()};
    switch (t.kind) {
      case Tok::Not: take(); return fml::make(FmlKind::Not, {}, fml_unary(), nullptr, s);
      case Tok::Dia: take(); return fml::make(FmlKind::Dia, {}, fml_unary(), nullptr, s);
      case Tok::Box: take(); return fml::make(FmlKind::Box, {}, fml_unary(), nullptr, s);
      case Tok::Mu:
      case Tok::Nu: return fml_fix();
      default: return fml_primary();
    }
  }

  FmlPtr fml_fix() {
    const Token& binder = take();
    const FmlKind kind = binder.kind == Tok::Mu ? FmlKind::Mu : FmlKind::Nu;
    if (peek().kind != Tok::Ident) fail("expected a variable name after '" + binder.text + "'");
    const Token& v = take();
    if (bound_.count(v.text) || free_vars_.count(v.text)) {
      throw Error(ErrorCode::ShadowedVariable, "variable '" + v.text + "' is already bound at position " + std::to_string(v.pos));
    }
    expect(Tok::Dot, "'.'");
    bound_.insert(v.text);
    auto body = fml_expr();
    bound_.erase(v.text);
    return fml::make(kind, v.text, body, nullptr, {binder.pos, v.pos + v.text.size()});
  }

  FmlPtr fml_primary() {
    const Token& t = take();
    const Span s{t.pos, t.pos + t.text.size()};
    switch (t.kind) {
      case Tok::TT: return fml::make(FmlKind::True, {}, nullptr, nullptr, s);
      case Tok::FF: return fml::make(FmlKind::False, {}, nullptr, nullptr, s);
      case Tok::Ident:
        if (bound_.count(t.text) || free_vars_.count(t.text)) return fml::make(FmlKind::Var, t.text, nullptr, nullptr, s);
        return fml::make(FmlKind::Atom, t.text, nullptr, nullptr, s);
      case Tok::LParen: {
        auto f = fml_expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      default: --pos_; fail("expected a formula");
    }
  }

  // CTL* (parsed untyped, then sorted) -----------------------------------------
  CtlPtr ctl_expr() {
    auto lhs = ctl_and();
    while (peek().kind == Tok::Or) {
      const std::size_t at = take().pos;
      lhs = ctl::make(CtlKind::Or, {}, lhs, ctl_and(), {at, at + 2});
    }
    return lhs;
  }

  CtlPtr ctl_and() {
    auto lhs = ctl_unary();
    while (peek().kind == Tok::And) {
      const std::size_t at = take().pos;
      lhs = ctl::make(CtlKind::And, {}, lhs, ctl_unary(), {at, at + 2});
    }
    return lhs;
  }

  CtlPtr ctl_unary() {
    const Token& t = peek();
    const Span s{t.pos, t.pos + t.text.size()};
    switch (t.kind) {
      case Tok::Not: take(); return ctl::make(CtlKind::Not, {}, ctl_unary(), nullptr, s);
      case Tok::E: take(); return ctl::make(CtlKind::E, {}, ctl_unary(), nullptr, s);
      case Tok::A: take(); return ctl::make(CtlKind::A, {}, ctl_unary(), nullptr, s);
      case Tok::X: take(); return ctl::make(CtlKind::Next, {}, ctl_unary(), nullptr, s);
      default: return ctl_primary();
    }
  }

  CtlPtr ctl_primary() {
    const Token& t = take();
    const Span s{t.pos, t.pos + t.text.size()};
    switch (t.kind) {
      case Tok::TT: return ctl::make(CtlKind::True, {}, nullptr, nullptr, s);
      case Tok::FF: return ctl::make(CtlKind::False, {}, nullptr, nullptr, s);
      case Tok::Ident: return ctl::make(CtlKind::Atom, t.text, nullptr, nullptr, s);
      case Tok::LParen: {
        auto lhs = ctl_expr();
        if (peek().kind == Tok::U || peek().kind == Tok::W) {
          const Token& op = take();
          auto rhs = ctl_expr();
          expect(Tok::RParen, "')'");
          return ctl::make(op.kind == Tok::U ? CtlKind::Until : CtlKind::WUntil, {}, lhs, rhs, {t.pos, op.pos + 1});
        }
        expect(Tok::RParen, "')' or an infix path operator");
        return lhs;
      }
      default: --pos_; fail("expected a formula");
    }
  }

  static bool has_open_path_operator(const CtlPtr& f) {
    switch (f->kind) {
      case CtlKind::Next:
      case CtlKind::Until:
      case CtlKind::WUntil: return true;
      case CtlKind::E:
      case CtlKind::A: return false;
      default:
        return (f->left && has_open_path_operator(f->left)) || (f->right && has_open_path_operator(f->right));
    }
  }

  CtlPtr to_state(const CtlPtr& f) const {
    switch (f->kind) {
      case CtlKind::Atom:
      case CtlKind::True:
      case CtlKind::False: return f;
      case CtlKind::Not: return ctl::make(CtlKind::Not, {}, to_state(f->left), nullptr, f->span);
      case CtlKind::And:
      case CtlKind::Or: return ctl::make(f->kind, {}, to_state(f->left), to_state(f->right), f->span);
      case CtlKind::E:
      case CtlKind::A: return ctl::make(f->kind, {}, to_path(f->left), nullptr, f->span);
      default:
        throw Error(ErrorCode::SyntaxError,
                    "path operator outside a path quantifier at position " + std::to_string(f->span.begin));
    }
  }

  CtlPtr to_path(const CtlPtr& f) const {
    if (!has_open_path_operator(f)) return ctl::make(CtlKind::Lift, {}, to_state(f), nullptr, f->span);
    switch (f->kind) {
      case CtlKind::Not: return ctl::make(CtlKind::PathNot, {}, to_path(f->left), nullptr, f->span);
      case CtlKind::And: return ctl::make(CtlKind::PathAnd, {}, to_path(f->left), to_path(f->right), f->span);
      case CtlKind::Or: return ctl::make(CtlKind::PathOr, {}, to_path(f->left), to_path(f->right), f->span);
      case CtlKind::Next: return ctl::make(CtlKind::Next, {}, to_path(f->left), nullptr, f->span);
      case CtlKind::Until:
      case CtlKind::WUntil: return ctl::make(f->kind, {}, to_path(f->left), to_path(f->right), f->span);
      default: throw Error(ErrorCode::Internal, "unexpected node while sorting path formula");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> free_vars_;
  std::set<std::string> bound_;
};

}  // namespace detail

/// Parses FML; identifiers bound by μ/ν or listed in `free_vars` become variables,
/// all others are atoms. Surface negation is eliminated before returning.
inline FmlPtr parse_fml(std::string_view text, std::set<std::string> free_vars = {}) {
  detail::Parser p(text, Logic::Fml, std::move(free_vars));
  return to_nnf(p.parse_fml());
}

inline CtlFormula parse_ctl(std::string_view text) {
  detail::Parser p(text, Logic::CtlStar, {});
  auto root = to_nnf(p.parse_ctl());
  return {root, classify_fragment(root)};
}

using ParsedFormula = std::variant<FmlPtr, CtlFormula>;

inline ParsedFormula parse_formula(std::string_view text, Logic logic, std::set<std::string> free_vars = {}) {
  if (logic == Logic::Fml) return parse_fml(text, std::move(free_vars));
  return parse_ctl(text);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {
inline std::string wrap(std::string s, bool parens) { return parens ? "(" + s + ")" : s; }
}  // namespace detail

/// Precedence: 0 fixpoints, 1 ∨, 2 ∧, 3 unary, 4 atomic.
inline std::string to_string(const FmlPtr& f, int ctx = 0) {
  using K = FmlKind;
  switch (f->kind) {
    case K::Var:
    case K::Atom: return f->name;
    case K::NegAtom: return "~" + f->name;
    case K::True: return "tt";
    case K::False: return "ff";
    case K::And: return detail::wrap(to_string(f->left, 2) + " /\\ " + to_string(f->right, 3), ctx > 2);
    case K::Or: return detail::wrap(to_string(f->left, 1) + " \\/ " + to_string(f->right, 2), ctx > 1);
    case K::Dia: return "<> " + to_string(f->left, 3);
    case K::Box: return "[] " + to_string(f->left, 3);
    case K::Not: return "~" + to_string(f->left, 3);
    case K::Mu:
    case K::Nu:
      return detail::wrap(std::string(f->kind == K::Mu ? "mu " : "nu ") + f->name + ". " + to_string(f->left, 0), ctx > 0);
  }
  return "?";
}

inline std::string to_string(const CtlPtr& f, int ctx = 0) {
  using K = CtlKind;
  switch (f->kind) {
    case K::Atom: return f->name;
    case K::NegAtom: return "~" + f->name;
    case K::True: return "tt";
    case K::False: return "ff";
    case K::And:
    case K::PathAnd: return detail::wrap(to_string(f->left, 2) + " /\\ " + to_string(f->right, 3), ctx > 2);
    case K::Or:
    case K::PathOr: return detail::wrap(to_string(f->left, 1) + " \\/ " + to_string(f->right, 2), ctx > 1);
    case K::E: return "E " + to_string(f->left, 3);
    case K::A: return "A " + to_string(f->left, 3);
    case K::Not:
    case K::PathNot: return "~" + to_string(f->left, 3);
    case K::Lift: return to_string(f->left, ctx);
    case K::Next: return "X " + to_string(f->left, 3);
    case K::Until: return "(" + to_string(f->left, 1) + " U " + to_string(f->right, 1) + ")";
    case K::WUntil: return "(" + to_string(f->left, 1) + " W " + to_string(f->right, 1) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Fixpoint encoding of CTL into FML

namespace detail {
class Encoder {
 public:
  explicit Encoder(std::set<std::string> taken) : taken_(std::move(taken)) {}

  FmlPtr state(const CtlPtr& f) {
    using K = CtlKind;
    switch (f->kind) {
      case K::Atom: return fml::atom(f->name);
      case K::NegAtom: return fml::neg_atom(f->name);
      case K::True: return fml::tt();
      case K::False: return fml::ff();
      case K::And: return fml::conj(state(f->left), state(f->right));
      case K::Or: return fml::disj(state(f->left), state(f->right));
      case K::E:
      case K::A: return quantified(f->kind == K::E, f->left);
      default: throw Error(ErrorCode::NotCtlFragment, "unexpected node in CTL formula");
    }
  }

 private:
  FmlPtr modal(bool existential, FmlPtr x) { return existential ? fml::dia(std::move(x)) : fml::box(std::move(x)); }

  FmlPtr quantified(bool existential, const CtlPtr& p) {
    using K = CtlKind;
    switch (p->kind) {
      case K::Lift: return state(p->left);
      case K::Next: return modal(existential, state(lifted(p->left)));
      case K::Until: {
        // E(hold U goal) ↦ μu. goal ∨ (hold ∧ ◇u)
        const std::string u = fresh();
        auto goal = state(lifted(p->right));
        auto hold = state(lifted(p->left));
        return fml::mu(u, fml::disj(goal, fml::conj(hold, modal(existential, fml::var(u)))));
      }
      case K::WUntil: {
        // E(first W second) ↦ νu. first ∧ (second ∨ ◇u)
        const std::string u = fresh();
        auto first = state(lifted(p->left));
        auto second = state(lifted(p->right));
        return fml::nu(u, fml::conj(first, fml::disj(second, modal(existential, fml::var(u)))));
      }
      default: throw Error(ErrorCode::NotCtlFragment, "quantified path formula is not X, U, W or a state formula");
    }
  }

  static const CtlPtr& lifted(const CtlPtr& p) {
    if (p->kind != CtlKind::Lift) throw Error(ErrorCode::NotCtlFragment, "path operator argument is not a state formula");
    return p->left;
  }

  std::string fresh() {
    for (;;) {
      std::string name = counter_ == 0 ? "u" : "u" + std::to_string(counter_);
      ++counter_;
      if (taken_.insert(name).second) return name;
    }
  }

  std::set<std::string> taken_;
  std::size_t counter_ = 0;
};
}  // namespace detail

/// ε: EX ↦ ◇, AX ↦ □, E/A(hold U goal) ↦ μu. goal ∨ (hold ∧ ◇u / □u),
/// E/A(first W second) ↦ νu. first ∧ (second ∨ ◇u / □u), E/A ψ ↦ εψ.
inline FmlPtr encode_ctl(const CtlPtr& f) {
  if (!is_ctl(f)) throw Error(ErrorCode::NotCtlFragment, "formula '" + to_string(f) + "' is not in the CTL fragment");
  std::set<std::string> taken;
  collect_atoms(f, taken);
  return detail::Encoder(std::move(taken)).state(f);
}

}  // namespace latmc
