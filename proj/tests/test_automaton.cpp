#include "doctest.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "cssmin/automaton.hpp"
#include "cssmin/dom.hpp"
#include "oracle_support.hpp"

using namespace cssmin;

namespace {

CssAutomaton comp(const std::string& s) { return compile(normalize(parse_selector(s))); }

using Edge = std::tuple<std::string, std::string, std::string, std::string>;

std::multiset<Edge> edges(const CssAutomaton& a) {
  std::multiset<Edge> out;
  for (const auto& t : a.trans) {
    auto name = [&](int q) { return a.names.empty() ? std::to_string(q) : a.names[q]; };
    out.insert({name(t.from), dir_name(t.dir), serialize(t.sel), name(t.to)});
  }
  return out;
}

NodeLabel el(const std::string& e, const std::string& cls = "") {
  NodeLabel l;
  l.elem = e;
  if (!cls.empty()) l.attrs[{"", "class"}] = cls;
  return l;
}

}  // namespace

TEST_CASE("neighbour selector compiles to three states") {
  auto a = comp("p + .a");
  CHECK(a.num_states == 3);
  CHECK(a.trans.size() == 4);
  CHECK(validate_automaton(a).empty());
  int loops = 0, nb = 0, last = 0;
  for (const auto& t : a.trans) {
    if (t.from == a.q0 && t.to == a.q0) loops += (t.dir == Dir::Child || t.dir == Dir::Sibling) && is_any(t.sel);
    if (t.dir == Dir::Neighbour) nb += serialize(t.sel) == "p";
    if (t.dir == Dir::Last) last += serialize(t.sel) == ".a" && t.to == a.qf;
  }
  CHECK(loops == 2);
  CHECK(nb == 1);
  CHECK(last == 1);
}

TEST_CASE("descendant then sibling has a descent loop and a skip loop") {
  auto a = comp("div p ~ .b");
  CHECK(validate_automaton(a).empty());
  bool descent_loop = false, skip_loop = false;
  for (const auto& t : a.trans) {
    if (t.from == t.to && t.from != a.q0 && t.dir == Dir::Child) descent_loop = true;
    if (t.from == t.to && t.from != a.q0 && t.dir == Dir::Sibling) skip_loop = true;
  }
  CHECK(descent_loop);
  CHECK(skip_loop);
}

TEST_CASE("node selector intersection on types") {
  auto ns = [](const std::string& s) { return normalize(parse_selector(s)).subject(); };
  CHECK(serialize(intersect_node_selectors(ns("*"), ns("p"))) == "p");
  CHECK(serialize(intersect_node_selectors(ns("p"), ns("*"))) == "p");
  CHECK(serialize(intersect_node_selectors(ns("h|*"), ns("p"))) == "h|p");
  CHECK(is_bottom(intersect_node_selectors(ns("p"), ns("div"))));
  CHECK(serialize(intersect_node_selectors(ns(".a"), ns(".b"))) == ".a.b");
}

TEST_CASE("product of the two examples") {
  auto i = intersect(comp("p + .a"), comp("div p ~ .b"));
  CHECK(validate_automaton(i).empty());
  std::multiset<Edge> want = {
      {"(sel1,sel1)", "child", "*", "(sel1,sel1)"},     {"(sel1,sel1)", "sibling", "*", "(sel1,sel1)"},
      {"(sel1,sel1)", "child", "div", "(sel1,sel2)"},   {"(sel1,sel1)", "child", "div", "(sel1,mid1)"},
      {"(sel1,mid1)", "child", "*", "(sel1,mid1)"},     {"(sel1,mid1)", "sibling", "*", "(sel1,mid1)"},
      {"(sel1,mid1)", "child", "*", "(sel1,sel2)"},     {"(sel1,mid1)", "neighbour", "*", "(sel1,sel2)"},
      {"(sel1,sel2)", "neighbour", "p", "(sel2,sel3)"}, {"(sel1,sel2)", "neighbour", "p", "(sel1,mid2)"},
      {"(sel1,mid2)", "sibling", "*", "(sel1,mid2)"},   {"(sel1,mid2)", "neighbour", "p", "(sel2,sel3)"},
      {"(sel2,sel3)", "last", ".a.b", "(qf,qf)"},
  };
  CHECK(edges(i) == want);

  DocumentTree t;
  int div = t.add_root(el("div"));
  t.add_child(div, el("p"));
  int x = t.add_child(div, el("x", "a b"));
  CHECK(run_accepts(i, t, x));
  DocumentTree u;
  int d2 = u.add_root(el("div"));
  u.add_child(d2, el("p"));
  int y = u.add_child(d2, el("x", "a"));
  CHECK_FALSE(run_accepts(i, u, y));
}

TEST_CASE("complementary classes never meet") {
  auto i = intersect(comp(".a"), comp(":not(.a)"));
  TreeBounds b;
  b.max_depth = 2;
  b.max_branch = 2;
  b.labels = {el("x"), el("x", "a"), el("x", "a b")};
  long hits = 0;
  enumerate_trees(b, [&](const DocumentTree& t) {
    auto acc = accepting_nodes(i, t);
    hits += std::count(acc.begin(), acc.end(), 1);
    return true;
  });
  CHECK(hits == 0);
}

TEST_CASE("run on a concrete tree") {
  DocumentTree t;
  int r = t.add_root(el("body"));
  t.add_child(r, el("p"));
  int x = t.add_child(r, el("x", "a"));
  CHECK(run_accepts(comp("p + .a"), t, x));
  CHECK(matches(t, x, parse_selector("p + .a")));
  CHECK_FALSE(run_accepts(comp("p + .a"), t, 1));
}

TEST_CASE("runs agree with direct matching on enumerated trees") {
  // 20 (tree, node) pairs per corpus selector, spread over the enumeration
  const auto lines = oracle::load_lines(CSSMIN_TEST_DATA "/selectors.txt");
  long triples = 0, bad = 0;
  for (const auto& line : lines) {
    auto s = normalize(parse_selector(line));
    auto a = compile(s);
    TreeBounds b;
    b.max_depth = 3;
    b.max_branch = 2;
    b.labels = oracle::selector_alphabet(s, 3);
    long seen = 0, local = 0;
    enumerate_trees(b, [&](const DocumentTree& t) {
      if (seen++ % 5) return true;
      for (int n = 0; n < t.size() && local < 20; ++n, ++local) bad += run_accepts(a, t, n) != matches(t, n, s);
      return local < 20;
    });
    triples += local;
  }
  CHECK(triples >= 1000);
  CHECK(bad == 0);
}

TEST_CASE("structural conditions on hand-built automata") {
  CssAutomaton a;
  a.num_states = 3;
  a.q0 = 0;
  a.qf = 2;
  NodeSelector any;
  a.trans = {{0, Dir::Child, any, 0}, {0, Dir::Neighbour, any, 1}, {1, Dir::Last, any, 2}};
  CHECK(validate_automaton(a).empty());

  auto loop = a;
  loop.trans.push_back({1, Dir::Neighbour, any, 1});
  auto v = validate_automaton(loop);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("condition 3") != std::string::npos);

  auto leaving = a;
  leaving.trans.push_back({2, Dir::Child, any, 1});
  bool c5 = false;
  for (const auto& m : validate_automaton(leaving)) c5 = c5 || m.find("condition 5") != std::string::npos;
  CHECK(c5);
}
