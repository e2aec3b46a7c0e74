#include "doctest.h"

#include <algorithm>
#include <random>

#include "cssmin/maxsat.hpp"
#include "oracle_support.hpp"

using namespace cssmin;

namespace {

const char* kSimple =
    "#apple { color:blue; font-size:small }\n"
    ".fruit, #broccoli { color:red; font-size:large }\n"
    "#orange { color:blue }\n"
    "#tomato { color:red; font-size:large; background-color:lightblue }\n";

const char* kOrder = ".a { color:blue; color:green } .b { color:green; color:blue }";

struct Setup {
  CssGraph g;
  Covering c;
};

Setup setup(const std::string& css) {
  auto [g, c] = oracle::ordered_graph(css);
  c = trim(g, c);
  return {std::move(g), std::move(c)};
}

void set_bits(std::vector<char>& v, const std::vector<int>& bits, long x) {
  for (size_t k = 0; k < bits.size(); ++k) v[bits[k]] = (x >> k) & 1;
}

bool all_hard(const Encoding& e, const std::vector<char>& v) {
  return std::all_of(e.hard.begin(), e.hard.end(), [&](int f) { return bx::eval(e.pool, f, v); });
}

}  // namespace

TEST_CASE("formula pool") {
  bx::Pool p;
  int a = p.var(1), b = p.var(2);
  CHECK(p.all({a, p.tru()}) == a);
  CHECK(p.any({a, p.tru()}) == p.tru());
  CHECK(p.all({a, p.fls()}) == p.fls());
  CHECK(p.neg(p.neg(a)) == a);
  CHECK(p.all({a, b}) == p.all({b, a}));
  int f = p.any({p.all({a, p.neg(b)}), p.neg(a)});
  CHECK(bx::eval(p, f, {0, 1, 0}));
  CHECK_FALSE(bx::eval(p, f, {0, 1, 1}));
  CHECK(bx::eval(p, f, {0, 0, 1}));
}

TEST_CASE("wcnf text") {
  WcnfInstance w;
  w.nvars = 3;
  w.top = 6;
  w.clauses = {{6, {1, -2}}, {2, {3}}, {3, {-1}}};
  const std::string want = "p wcnf 3 3 6\n6 1 -2 0\n2 3 0\n3 -1 0\n";
  CHECK(emit_dimacs(w) == want);
  CHECK(parse_dimacs(want) == w);
  CHECK(parse_dimacs("c comment\n" + want) == w);
  CHECK(model_cost(w, {0, 1, 1, 0}) == 5);
  CHECK(model_cost(w, {0, 1, 0, 1}) == 3);
  CHECK(model_cost(w, {0, 0, 0, 1}) == 0);
  CHECK(model_cost(w, {0, 0, 1, 0}) == -1);
}

TEST_CASE("solver output") {
  auto m = parse_model("c hi\ns OPTIMUM FOUND\no 4\nv 1 -2 3\n", 3);
  CHECK(m.status == MaxSatStatus::Optimum);
  CHECK(m.cost == 4);
  CHECK(m.value == std::vector<char>{0, 1, 0, 1});
  CHECK(parse_model("s UNSATISFIABLE\n", 3).status == MaxSatStatus::Unsat);
  CHECK_THROWS(parse_model("garbage\n", 3));
  CHECK_THROWS(parse_model("s OPTIMUM FOUND\nv 1 x\n", 3));
}

TEST_CASE("solver round trip") {
  WcnfInstance w;
  w.nvars = 2;
  w.top = 10;
  w.clauses = {{10, {1, 2}}, {10, {-1, -2}}, {3, {1}}, {1, {2}}};
  auto m = solve_wcnf(w, {});
  REQUIRE(m.status == MaxSatStatus::Optimum);
  CHECK(m.cost == 1);
  CHECK(model_cost(w, m.value) == 1);
  w.clauses.push_back({10, {1}});
  w.clauses.push_back({10, {2}});
  CHECK(solve_wcnf(w, {}).status == MaxSatStatus::Unsat);
}

TEST_CASE("walk-through opportunity") {
  auto s = setup(kSimple);
  OrderContext oc(s.g, s.c);
  auto en = build_enumeration(oc, EnumMode::Full);
  auto e = encode(oc, en);
  auto w = to_wcnf(e);
  CHECK(w.nvars >= e.num_vars);
  auto m = solve_wcnf(w, {});
  REQUIRE(m.status == MaxSatStatus::Optimum);
  auto mo = decode(e, m.value, en, oc);
  REQUIRE(mo);
  CHECK(describe(s.g, mo->rule) == ".fruit,#broccoli,#tomato{color:red;font-size:large}");
  CHECK(mo->j == 4);

  auto bf = brute_force_best_opportunity(oc);
  REQUIRE(bf);
  CHECK(bf->weight == mo->weight);
  CHECK(describe(s.g, bf->rule) == describe(s.g, mo->rule));
  CHECK(bf->j == mo->j);

  SearchConfig sc;
  auto r = find_best_opportunity(oc, en, sc);
  REQUIRE(r.best);
  CHECK(r.best->weight == bf->weight);
  CHECK_FALSE(r.solver_error);
}

TEST_CASE("an assignment built from the exhaustive optimum decodes back to it") {
  std::mt19937 rng(17);
  int checked = 0;
  for (int i = 0; i < 40 && checked < 15; ++i) {
    auto s = setup(i == 0 ? std::string(kSimple) : oracle::random_stylesheet(rng, 12));
    OrderContext oc(s.g, s.c);
    auto en = build_enumeration(oc, EnumMode::Full);
    auto bf = brute_force_best_opportunity(oc);
    if (en.bicliques.empty() || !bf) continue;
    Biclique sub{bf->rule.sels, bf->rule.props};
    std::sort(sub.sels.begin(), sub.sels.end());
    std::sort(sub.props.begin(), sub.props.end());
    auto e = encode(oc, en);
    bool found = false;
    for (int k = 0; k < e.K && !found; ++k) {
      if (!contains(en.bicliques[k], sub)) continue;
      std::vector<char> v(e.num_vars + 1, 0);
      set_bits(v, e.inpos_bits, bf->j);
      set_bits(v, e.bc_bits, k);
      const auto& b = en.bicliques[k];
      for (const auto& [node, slot] : e.rho[k]) {
        const auto& side = node.first ? sub.sels : sub.props;
        v[e.excl[slot]] = !std::binary_search(side.begin(), side.end(), node.second);
      }
      if (!all_hard(e, v)) continue;
      auto mo = decode(e, v, en, oc);
      REQUIRE(mo);
      CHECK(mo->j == bf->j);
      CHECK(mo->weight == bf->weight);
      (void)b;
      found = true;
    }
    if (bf->weight < covering_weight(s.g, s.c)) {
      CHECK(found);
      ++checked;
    }
  }
  CHECK(checked > 5);
}

TEST_CASE("forbidden positions are never chosen") {
  auto s = setup(kOrder);
  OrderContext oc(s.g, s.c);
  auto en = build_enumeration(oc, EnumMode::Full);
  Biclique b{{s.g.find_sel(".a"), s.g.find_sel(".b")}, {s.g.find_prop("color:blue"), s.g.find_prop("color:green")}};
  std::sort(b.sels.begin(), b.sels.end());
  std::sort(b.props.begin(), b.props.end());
  auto it = std::find(en.bicliques.begin(), en.bicliques.end(), b);
  REQUIRE(it != en.bicliques.end());
  const int i = static_cast<int>(it - en.bicliques.begin());
  auto e = encode(oc, en);
  auto w = to_wcnf(e);
  // force bc = i: B spans rules 1 and 2, so the only position left is 2, where it is unorderable
  for (size_t k = 0; k < e.bc_bits.size(); ++k)
    w.clauses.push_back({w.top, {(i >> k & 1) ? e.bc_bits[k] : -e.bc_bits[k]}});
  CHECK(solve_wcnf(w, {}).status == MaxSatStatus::Unsat);

  auto bf = brute_force_best_opportunity(oc);
  auto r = find_best_opportunity(oc, en, {});
  // nothing saves bytes here: the only merge would need position 2
  const int now = covering_weight(s.g, s.c);
  CHECK((!bf || bf->weight >= now));
  CHECK((!r.best || r.best->weight >= now));
  if (r.best) CHECK(is_valid_covering(s.g, apply_opportunity(s.g, s.c, r.best->rule, r.best->j)));
}

TEST_CASE("empty enumeration is rejected") {
  auto s = setup(".a{color:red}");
  OrderContext oc(s.g, s.c);
  OrderableEnumeration en;
  CHECK_THROWS_AS(encode(oc, en), std::invalid_argument);
}
