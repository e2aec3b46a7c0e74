#include "doctest.h"

#include <algorithm>

#include "cssmin/dom.hpp"
#include "cssmin/stylesheet.hpp"

using namespace cssmin;

namespace {

NodeLabel el(const std::string& e, const std::string& cls = "", const std::string& id = "") {
  NodeLabel l;
  l.ns = "html";
  l.elem = e;
  if (!cls.empty()) l.attrs[{"", "class"}] = cls;
  if (!id.empty()) l.attrs[{"", "id"}] = id;
  return l;
}

}  // namespace

TEST_CASE("tree validity") {
  DocumentTree t;
  int r = t.add_root(el("div", "", "x"));
  t.add_child(r, el("p", "", "x"));
  auto v = validate_tree(t);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].constraint.find("id") != std::string::npos);

  DocumentTree e;
  NodeLabel empty = el("div");
  empty.set(PseudoClass::Empty);
  int er = e.add_root(empty);
  CHECK(validate_tree(e).empty());
  e.add_child(er, el("p"));
  CHECK_FALSE(validate_tree(e).empty());
}

TEST_CASE("attribute operators") {
  // (operator, selector value, node value)
  CHECK(attr_op_matches(AttrOp::Includes, "b", "a b c"));
  CHECK_FALSE(attr_op_matches(AttrOp::Includes, "b", "ab c"));
  CHECK(attr_op_matches(AttrOp::DashMatch, "en", "en-GB"));
  CHECK(attr_op_matches(AttrOp::DashMatch, "en", "en"));
  CHECK_FALSE(attr_op_matches(AttrOp::DashMatch, "en", "eng"));
  CHECK(attr_op_matches(AttrOp::Prefix, "ht", "http"));
  CHECK(attr_op_matches(AttrOp::Suffix, "ml", "page.html"));
  CHECK(attr_op_matches(AttrOp::Substring, "b", "abc"));
}

TEST_CASE("matching on a small page") {
  // <body><h1/><img class="banner"/><p/><p/><p/></body>
  DocumentTree t;
  int body = t.add_root(el("body"));
  t.add_child(body, el("h1"));
  int img = t.add_child(body, el("img", "banner"));
  t.add_child(body, el("p"));
  int p2 = t.add_child(body, el("p"));
  CHECK(matches(t, img, parse_selector("img.banner")));
  CHECK_FALSE(matches(t, img, parse_selector("p.banner")));
  CHECK(matches(t, img, parse_selector("h1 + .banner")));
  CHECK(matches(t, p2, parse_selector("h1 ~ p")));
  CHECK(matches(t, p2, parse_selector("body > :nth-child(2n+2)")));
  CHECK(matches(t, 3, parse_selector(":nth-child(2n+1)")));
  CHECK_FALSE(matches(t, body, parse_selector(":nth-child(n)")));
  CHECK(matches(t, body, parse_selector(":root")));
  CHECK(matches(t, p2, parse_selector("p:last-child:nth-last-of-type(1)")));
  CHECK(matches(t, 3, parse_selector("p:nth-of-type(1)")));
}

TEST_CASE("cascade follows specificity then order") {
  auto ss = parse_stylesheet(
      "#apple { color:blue; font-size:small }\n"
      ".fruit, #broccoli { color:red; font-size:large }\n"
      "#orange { color:blue }\n"
      "#tomato { color:red; font-size:large; background-color:lightblue }\n");
  DocumentTree t;
  t.add_root(el("div", "fruit", "apple"));
  auto cs = compute_cascade(t, 0, ss);
  CHECK(cs.props.at("color").first == "color:blue");
  CHECK(cs.props.at("font-size").first == "font-size:small");
}

TEST_CASE("the red/green merge changes a node with both classes") {
  auto before = parse_stylesheet(".a { color:red; font-size:large } .c { color:green } .b { color:red; font-size:large }");
  auto after = parse_stylesheet(".a, .b { color:red; font-size:large } .c { color:green }");
  DocumentTree t;
  t.add_root(el("div", "b c"));
  CHECK(compute_cascade(t, 0, before).props.at("color").first == "color:red");
  CHECK(compute_cascade(t, 0, after).props.at("color").first == "color:green");
}

TEST_CASE("shorthands override their longhands") {
  auto ss = parse_stylesheet(".a { margin-top:1px } .a { margin:0 }");
  DocumentTree t;
  t.add_root(el("div", "a"));
  auto cs = compute_cascade(t, 0, ss);
  CHECK(cs.props.at("margin-top").first == "margin:0");
}

TEST_CASE("tree shapes") {
  auto shapes = enumerate_shapes(2, 2);
  CHECK(shapes.size() == 3);
  TreeBounds b;
  b.max_depth = 2;
  b.max_branch = 2;
  b.labels = {el("div")};
  CHECK(enumerate_trees(b, [](const DocumentTree&) { return true; }) == 3);
  // preorder parent arrays, each one a distinct shape
  auto s33 = enumerate_shapes(3, 3);
  CHECK(s33.size() == 85);
  std::sort(s33.begin(), s33.end());
  CHECK(std::adjacent_find(s33.begin(), s33.end()) == s33.end());
}

TEST_CASE("bounded intersection oracle") {
  auto a = parse_selector(".a"), b = parse_selector(".b");
  TreeBounds tb;
  tb.max_depth = 1;
  tb.max_branch = 0;
  tb.labels = tight_labels({a, b}, 8);
  auto w = oracle_intersection(a, b, tb);
  REQUIRE(w);
  CHECK(w->tree.size() == 1);
  CHECK(matches(w->tree, w->node, a));
  CHECK(matches(w->tree, w->node, b));

  // Parity: no position is both odd-from-3 and even.
  TreeBounds wide;
  wide.max_depth = 2;
  wide.max_branch = 20;
  NodeLabel blank;
  blank.elem = "x";
  wide.labels = {blank};
  CHECK_FALSE(oracle_intersection(parse_selector(":nth-child(2n+3)"), parse_selector(":nth-child(2n+2)"), wide));
}

TEST_CASE("synthesized labels satisfy their requirements") {
  for (const char* text : {"div.a[href^=ht]", "p:not(.a)[lang|=en]", ":hover#x", "[a~=v][a$=v]"}) {
    CAPTURE(text);
    auto s = normalize(parse_selector(text));
    auto l = synthesize_label({&s.subject()});
    REQUIRE(l);
    CHECK(local_match(s.subject(), *l));
  }
  auto contra = normalize(parse_selector(".a:not(.a)"));
  CHECK_FALSE(synthesize_label({&contra.subject()}));
}
