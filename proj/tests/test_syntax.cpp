#include <gtest/gtest.h>

#include "latmc/corpus.hpp"
#include "latmc/syntax.hpp"

using namespace latmc;

namespace {

ErrorCode parse_error(std::string_view text, bool ctl_logic = false) {
  try {
    if (ctl_logic) parse_ctl(text);
    else parse_fml(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::Internal;
}

}  // namespace

TEST(Syntax, ParsesLeastFixpoint) {
  const FmlPtr f = parse_fml("mu u. p \\/ <> u");
  const FmlPtr want = fml::mu("u", fml::disj(fml::atom("p"), fml::dia(fml::var("u"))));
  EXPECT_TRUE(same(f, want)) << to_string(f);
}

TEST(Syntax, ParsesUntil) {
  const CtlFormula f = parse_ctl("E (p U q)");
  EXPECT_TRUE(same(f.root, ctl::EU(ctl::atom("p"), ctl::atom("q"))));
  EXPECT_EQ(f.fragment, FragmentClass::CtlUOnly);
}

TEST(Syntax, Errors) {
  EXPECT_EQ(parse_error("mu u. mu u. p"), ErrorCode::ShadowedVariable);
  EXPECT_EQ(parse_error("mu u. ~u"), ErrorCode::NegationOfNonAtom);
  EXPECT_EQ(parse_error("p /\\"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("(p"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("E p U q", true), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("E (p U", true), ErrorCode::SyntaxError);
}

TEST(Syntax, SyntaxErrorPosition) {
  try {
    parse_fml("p /\\ /\\ q");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("position 5"), std::string::npos) << e.what();
  }
}

TEST(Syntax, NegationNormalForm) {
  EXPECT_EQ(to_string(parse_fml("~(mu u. p \\/ <> u)")), "nu u. ~p /\\ [] u");
  EXPECT_EQ(to_string(parse_fml("~tt")), "ff");
  EXPECT_EQ(to_string(parse_fml("~[] ~p")), "<> p");
  EXPECT_EQ(to_string(parse_ctl("~E(p U q)").root), "A (~q W ~p)");
  EXPECT_EQ(to_string(parse_ctl("~A(X ~p)").root), "E X p");
}

TEST(Syntax, Fragments) {
  EXPECT_EQ(parse_ctl("EX AX p").fragment, FragmentClass::CtlNoUW);
  EXPECT_EQ(parse_ctl("E(p U q) /\\ A(r U s)").fragment, FragmentClass::CtlUOnly);
  EXPECT_EQ(parse_ctl("A(p W q)").fragment, FragmentClass::CtlWOnly);
  EXPECT_EQ(parse_ctl("E(p U q) /\\ A(r W s)").fragment, FragmentClass::CtlMixed);
  EXPECT_EQ(parse_ctl("E(X (p U q))").fragment, FragmentClass::GeneralCtlStar);
  EXPECT_EQ(parse_ctl("A((p U q) W r)").fragment, FragmentClass::GeneralCtlStar);
}

TEST(Syntax, Encoding) {
  auto enc = [](const char* s) { return to_string(encode_ctl(parse_ctl(s).root)); };
  EXPECT_EQ(enc("EX p"), "<> p");
  EXPECT_EQ(enc("AX p"), "[] p");
  EXPECT_EQ(enc("E(p U q)"), "mu u. q \\/ p /\\ <> u");
  EXPECT_EQ(enc("A(p U q)"), "mu u. q \\/ p /\\ [] u");
  EXPECT_EQ(enc("E(p W q)"), "nu u. p /\\ (q \\/ <> u)");
  EXPECT_EQ(enc("A(p W q)"), "nu u. p /\\ (q \\/ [] u)");
  EXPECT_TRUE(same(encode_ctl(parse_ctl("E(p U q)").root),
                   fml::mu("u", fml::disj(fml::atom("q"), fml::conj(fml::atom("p"), fml::dia(fml::var("u")))))));
}

TEST(Syntax, EncodingRejectsCtlStar) {
  try {
    encode_ctl(parse_ctl("E(X (p U q))").root);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCtlFragment);
  }
}

TEST(Syntax, FmlRoundTrip) {
  corpus::Generator g(5);
  for (int i = 0; i < 500; ++i) {
    const FmlPtr f = g.fml(1 + g.below(5), true);
    const FmlPtr back = parse_fml(to_string(f));
    EXPECT_TRUE(same(f, back)) << to_string(f) << " vs " << to_string(back);
  }
}

TEST(Syntax, CtlRoundTrip) {
  for (const auto& f : corpus::ctl_corpus(300, 6)) {
    const CtlPtr back = parse_ctl(to_string(f)).root;
    EXPECT_TRUE(same(f, back)) << to_string(f) << " vs " << to_string(back);
  }
  for (const char* s : {"E(X (p U q))", "A((p U q) W X r)", "E(X X p /\\ (q U r))"}) {
    const CtlPtr f = parse_ctl(s).root;
    EXPECT_TRUE(same(f, parse_ctl(to_string(f)).root)) << s;
  }
}

TEST(Syntax, NnfInvolutive) {
  corpus::Generator g(7);
  for (int i = 0; i < 300; ++i) {
    const FmlPtr f = g.fml(1 + g.below(5), true);
    const FmlPtr once = to_nnf(fml::negation(f));
    const FmlPtr twice = to_nnf(fml::negation(once));
    EXPECT_TRUE(same(twice, to_nnf(f))) << to_string(f);
  }
  for (const auto& f : corpus::ctl_corpus(200, 8)) {
    const CtlPtr twice = to_nnf(ctl::negation(to_nnf(ctl::negation(f))));
    EXPECT_TRUE(same(twice, to_nnf(f))) << to_string(f);
  }
}

TEST(Syntax, EncodingIsAlternationFree) {
  for (const auto& f : corpus::ctl_corpus(300, 9)) {
    const FmlPtr e = encode_ctl(f);
    EXPECT_TRUE(is_alternation_free(e)) << to_string(e);
    EXPECT_TRUE(free_variables(e).empty()) << to_string(e);
  }
  EXPECT_FALSE(is_alternation_free(parse_fml("nu x. mu y. (p /\\ <> x) \\/ <> y")));
}
