#include "doctest.h"

#include "cssmin/selector.hpp"
#include "oracle_support.hpp"

using namespace cssmin;

TEST_CASE("descendant chain") {
  auto s = parse_selector("#heading h1");
  REQUIRE(s.nodes.size() == 2);
  CHECK(s.combs[0] == Combinator::Descendant);
  CHECK(serialize(s.nodes[0]) == "#heading");
  CHECK(s.nodes[1].type.elem == "h1");
}

TEST_CASE("selector groups split on commas") {
  auto g = parse_selector_group(".a,.b");
  REQUIRE(g.size() == 2);
  CHECK(serialize(g[0]) == ".a");
  CHECK(serialize(g[1]) == ".b");
  CHECK(parse_selector_group("div > p , .c ~ d").size() == 2);
}

TEST_CASE("combinators") {
  auto s = parse_selector("a > b + c ~ d e");
  REQUIRE(s.combs.size() == 4);
  CHECK(s.combs[0] == Combinator::Child);
  CHECK(s.combs[1] == Combinator::Neighbour);
  CHECK(s.combs[2] == Combinator::Sibling);
  CHECK(s.combs[3] == Combinator::Descendant);
  CHECK(serialize(s) == "a>b+c~d e");
}

TEST_CASE("specificity") {
  CHECK(specificity(parse_selector("#apple"), false) > specificity(parse_selector(".fruit"), false));
  // one type, two classes
  auto sp = specificity(parse_selector("h1.fruit.vegetable"), false);
  CHECK(sp == Specificity{0, 0, 2, 1});
  CHECK(specificity(parse_selector("*"), false) == Specificity{});
  CHECK(specificity(parse_selector(":not(#x) a[href]::before"), false) == Specificity{0, 1, 1, 2});
  CHECK(specificity(parse_selector(".a"), true) > specificity(parse_selector("#a #b"), false));
}

TEST_CASE("pseudo-elements") {
  auto s = parse_selector("x::before");
  CHECK(s.pe == PseudoElement::Before);
  CHECK(s.subject().type.elem == "x");
  auto legacy = parse_selector("x:after");
  CHECK(legacy.pe == PseudoElement::After);
  CHECK(serialize(legacy) == "x:after");
  CHECK_THROWS_AS(parse_selector("x::before .a"), ParseError);
}

TEST_CASE("weights") {
  CHECK(text_weight("#orange") == 8);
  CHECK(text_weight("color:red") == 10);
  CHECK(selector_text_length(parse_selector("div > p")) == 6);
}

TEST_CASE("normalize rewrites surface forms") {
  CHECK(serialize(normalize(parse_selector(":first-child"))) == ":nth-child(1)");
  CHECK(serialize(normalize(parse_selector("p:last-of-type"))) == "p:nth-last-of-type(1)");
  CHECK(serialize(normalize(parse_selector(":lang(en)"))) == "[__lang|lang|=en]");
  auto n = normalize(parse_selector(".a"));
  CHECK(normalize(n) == n);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_selector(""), ParseError);
  CHECK_THROWS_AS(parse_selector("a >"), ParseError);
  CHECK_THROWS_AS(parse_selector("[href"), ParseError);
  CHECK_THROWS_AS(parse_selector(":nth-child(2n+)"), ParseError);
}

TEST_CASE("serialization round-trips the selector corpus") {
  for (const auto& line : oracle::load_lines(CSSMIN_TEST_DATA "/selectors.txt")) {
    CAPTURE(line);
    auto s = parse_selector(line);
    CHECK(parse_selector(serialize(s)) == s);
  }
}

TEST_CASE("identifier escaping") {
  CHECK(is_plain_ident("foo-bar"));
  CHECK_FALSE(is_plain_ident("1a"));
  auto s = parse_selector(".\\31 a");
  CHECK(parse_selector(serialize(s)) == s);
}
