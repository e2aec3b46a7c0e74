#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "cssmin/graph.hpp"
#include "cssmin/minifier.hpp"
#include "oracle_support.hpp"

using namespace cssmin;

namespace {

const char* kSimple =
    "#apple { color:blue; font-size:small }\n"
    ".fruit, #broccoli { color:red; font-size:large }\n"
    "#orange { color:blue }\n"
    "#tomato { color:red; font-size:large;\n"
    "          background-color:lightblue }\n";

const char* kVariant =
    "#apple { color:blue; font-size:small }\n"
    ".fruit, #broccoli { color:red; font-size:large }\n"
    ".vegetable, #orange { color:blue }\n"
    "#tomato { color:red; font-size:large; background-color:lightblue }\n";

struct Built {
  CssGraph g;
  Covering c;
};

Built build(const std::string& css, bool order = true) {
  auto ss = parse_stylesheet(css);
  std::vector<Rule> rules;
  for (const auto& it : ss.items) rules.push_back(it.rule);
  auto [g, c] = build_graph(rules);
  if (order) g.order = extract_edge_order(g, c, make_intersect({}));
  return {std::move(g), std::move(c)};
}

std::set<std::string> order_text(const CssGraph& g) {
  std::set<std::string> out;
  auto e = [&](int id) { return "(" + g.S[g.edges[id].first].text + "," + g.P[g.edges[id].second].text + ")"; };
  for (const auto& o : g.order) out.insert(e(o.before) + "<" + e(o.after));
  return out;
}

int edge(const Built& b, const char* s, const char* p) { return b.g.edge(b.g.find_sel(s), b.g.find_prop(p)); }

std::string non_ws(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

}  // namespace

TEST_CASE("parsing the four-rule example") {
  auto ss = parse_stylesheet(kSimple);
  CHECK(ss.rule_count() == 4);
  size_t sels = 0, decls = 0;
  for (const auto& it : ss.items) {
    sels += it.rule.selectors.size();
    decls += it.rule.decls.size();
  }
  CHECK(sels == 5);
  CHECK(decls == 8);
  CHECK(parse_stylesheet("").items.empty());
  auto media = parse_stylesheet("@media x { .a{color:red} }");
  REQUIRE(media.items.size() == 1);
  CHECK(media.items[0].passthrough);
  CHECK(media.rule_count() == 0);
}

TEST_CASE("declarations") {
  auto d = parse_declaration(" Color : RED ");
  CHECK(d.name == "color");
  CHECK(d.text() == "color:RED");
  auto imp = parse_declaration("margin: 0 auto !important");
  CHECK(imp.important);
  CHECK(imp.text() == "margin:0 auto!important");
  CHECK(parse_declaration("/* a:b */ color: red").name == "color");
  CHECK_THROWS_AS(parse_stylesheet(".a { color red }"), ParseError);
  CHECK_THROWS_AS(parse_stylesheet(".a { color:red"), ParseError);
}

TEST_CASE("graph of the variant") {
  auto b = build(kVariant, false);
  CHECK(b.g.S.size() == 6);
  CHECK(b.g.P.size() == 5);
  CHECK(b.g.edges.size() == 11);
  CHECK(b.g.has_edge(b.g.find_sel(".vegetable"), b.g.find_prop("color:blue")));
  CHECK(b.g.S[b.g.find_sel("#orange")].weight == 8);

  auto single = build("a{b:c}", false);
  CHECK(single.g.S.size() == 1);
  CHECK(single.g.P.size() == 1);
  CHECK(single.g.edges.size() == 1);

  auto twice = build("a{b:c;d:e} a{b:c;d:e}", false);
  auto once = build("a{b:c;d:e}", false);
  CHECK(twice.g.S.size() == once.g.S.size());
  CHECK(twice.g.P.size() == once.g.P.size());
  CHECK(twice.g.edges == once.g.edges);
}

TEST_CASE("edge indices") {
  auto big = build(std::string(kSimple) + ".fruit, #broccoli, #tomato { color:red; font-size:large }\n", false);
  CHECK(edge_index(big.c, big.g.find_sel(".fruit"), big.g.find_prop("color:red")) == 5);
  CHECK(edge_index(big.c, big.g.find_sel("#tomato"), big.g.find_prop("color:red")) == 5);
  auto v = build(kVariant, false);
  CHECK(edge_index(v.c, v.g.find_sel(".fruit"), v.g.find_prop("color:red")) == 2);
  CHECK(edge_index(v.c, v.g.find_sel(".vegetable"), v.g.find_prop("color:blue")) == 3);
  auto one = build("a, b { c:d; e:f }", false);
  for (auto [s, p] : one.g.edges) CHECK(edge_index(one.c, s, p) == 1);
}

TEST_CASE("edge order goldens") {
  auto v = build(kVariant);
  CHECK(order_text(v.g) == std::set<std::string>{"(.fruit,color:red)<(.vegetable,color:blue)"});

  auto rgba = build(".a { color:red; color:rgba(255,0,0,0.5) } .b { color:red; color:rgba(255,0,0,0.5) }");
  auto o = order_text(rgba.g);
  CHECK_FALSE(o.count("(.a,color:rgba(255,0,0,0.5))<(.b,color:red)"));
  CHECK(o.count("(.b,color:red)<(.b,color:rgba(255,0,0,0.5))"));

  CHECK(build("#a { color:red } #b { color:blue }").g.order.empty());
  // different specificity, no order
  CHECK(build(".a { color:red } p { color:blue }").g.order.empty());
  // !important changes specificity
  CHECK(build(".a { color:red!important } .b { color:blue }").g.order.empty());
  CHECK(build(".a { margin:0 } .b { margin-top:1px }").g.order.size() == 1);
}

TEST_CASE("parallel and serial order extraction agree") {
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    auto b = build(oracle::random_stylesheet(rng, 14, 6), false);
    auto fn = make_intersect({});
    OrderStats s1, s2;
    auto par = extract_edge_order(b.g, b.c, fn, &s1);
    auto ser = extract_edge_order_serial(b.g, b.c, fn, &s2);
    CHECK(par == ser);
    CHECK(s1.candidate_pairs == s2.candidate_pairs);
    CHECK(s1.intersecting == s2.intersecting);
  }
}

TEST_CASE("related property names") {
  CHECK(related_property_names("border", "border-width"));
  CHECK(related_property_names("color", "color"));
  CHECK(related_property_names("font", "line-height"));
  CHECK(related_property_names("margin", "margin-top"));
  CHECK_FALSE(related_property_names("color", "margin"));
  CHECK_FALSE(related_property_names("padding-top", "padding-left"));
}

TEST_CASE("trimming") {
  auto big = build(std::string(kSimple) + ".fruit, #broccoli, #tomato { color:red; font-size:large }\n", false);
  auto want = build(
      "#apple { color:blue; font-size:small }\n"
      "#orange { color:blue }\n"
      "#tomato { background-color:lightblue }\n"
      ".fruit, #broccoli, #tomato { color:red; font-size:large }\n",
      false);
  auto t = trim(big.g, big.c);
  CHECK(serialize(big.g, t) == serialize(want.g, want.c));
  CHECK(trim(big.g, t) == t);

  auto uniq = build(".a{b:c} .d{e:f}", false);
  CHECK(trim(uniq.g, uniq.c) == uniq.c);
  CssGraph empty;
  CHECK(trim(empty, {}).empty());
  CHECK(is_valid_covering(empty, {}));
}

TEST_CASE("validity") {
  auto v = build(kVariant);
  CHECK(is_valid_covering(v.g, v.c));
  auto swapped = v.c;
  std::swap(swapped[1], swapped[2]);
  std::string why;
  CHECK_FALSE(is_valid_covering(v.g, swapped, &why));
  CHECK(why.find("edge order violated") != std::string::npos);
  auto missing = v.c;
  missing.pop_back();
  CHECK_FALSE(is_valid_covering(v.g, missing));
}

TEST_CASE("every parsed stylesheet covers its own graph") {
  std::mt19937 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto b = build(oracle::random_stylesheet(rng, 16, 6));
    CHECK(is_valid_covering(b.g, b.c));
    CHECK(is_valid_covering(b.g, trim(b.g, b.c)));
  }
}

TEST_CASE("walk-through") {
  auto b = build(kSimple);
  const int w0 = covering_weight(b.g, b.c);
  CHECK(w0 == static_cast<int>(non_ws(serialize(b.g, b.c)).size()));
  CRule r1{{b.g.find_sel(".fruit"), b.g.find_sel("#broccoli"), b.g.find_sel("#tomato")},
           {b.g.find_prop("color:red"), b.g.find_prop("font-size:large")}};
  auto c1 = apply_opportunity(b.g, b.c, r1, 4);
  CHECK(serialize(b.g, c1) ==
        "#apple{color:blue;font-size:small}#orange{color:blue}#tomato{background-color:lightblue}"
        ".fruit,#broccoli,#tomato{color:red;font-size:large}");
  CHECK(is_valid_covering(b.g, c1));
  const int w1 = covering_weight(b.g, c1);
  CRule r2{{b.g.find_sel("#apple"), b.g.find_sel("#orange")}, {b.g.find_prop("color:blue")}};
  auto c2 = apply_opportunity(b.g, c1, r2, 2);
  CHECK(serialize(b.g, c2) ==
        "#apple{font-size:small}#apple,#orange{color:blue}#tomato{background-color:lightblue}"
        ".fruit,#broccoli,#tomato{color:red;font-size:large}");
  CHECK(is_valid_covering(b.g, c2));
  const int w2 = covering_weight(b.g, c2);
  CHECK(w0 > w1);
  CHECK(w1 > w2);
  // re-inserting an existing rule at its own place changes nothing after trimming
  CHECK(covering_weight(b.g, apply_opportunity(b.g, c2, c2[1], 1)) == w2);
}

TEST_CASE("weight is the serialized size") {
  for (const char* css : {kSimple, kVariant, ".a,.b{color:red!important;margin:0 auto}"}) {
    auto b = build(css, false);
    CHECK(covering_weight(b.g, b.c) == static_cast<int>(non_ws(serialize(b.g, b.c)).size()));
    CHECK(total_weight(parse_stylesheet(css)) == static_cast<int>(non_ws(serialize(parse_stylesheet(css))).size()));
  }
  CssGraph g;
  CHECK(covering_weight(g, {}) == 0);
}

TEST_CASE("trim keeps the last occurrence of every edge") {
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    auto b = build(oracle::random_stylesheet(rng, 14, 5), false);
    auto c = oracle::random_covering(b.g, b.c, 3, rng);
    auto t = trim(b.g, c);
    CHECK(covers_exactly(b.g, t));
    CHECK(trim(b.g, t) == t);
  }
}
