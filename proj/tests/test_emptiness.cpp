#include "doctest.h"

#include <algorithm>
#include <tuple>

#include "cssmin/attr.hpp"
#include "cssmin/emptiness.hpp"
#include "cssmin/lia.hpp"
#include "oracle_support.hpp"

using namespace cssmin;

namespace {

CssAutomaton comp(const std::string& s) { return compile(normalize(parse_selector(s))); }

Emptiness opt(const std::string& s) { return check_nonempty_optimized(comp(s), {}).verdict; }
Emptiness full(const std::string& s) { return check_nonempty_full(comp(s), {}).verdict; }

Emptiness meet(const std::string& a, const std::string& b, Backend be = Backend::Optimized) {
  EmptinessConfig cfg;
  cfg.backend = be;
  return check_nonempty(intersect(comp(a), comp(b)), cfg).verdict;
}

AttrConstraint con(AttrOp op, const std::string& v) {
  AttrConstraint c;
  c.op = op;
  c.value = v;
  return c;
}

}  // namespace

TEST_CASE("type summary") {
  auto a = comp(".a");
  auto ts = compute_type_summary(a);
  // one fresh type for the .a transition plus the null type
  CHECK(ts.types.size() == 2);
  CHECK(ts.null_type == 1);
  int fresh = 0;
  for (int f : ts.fresh_of) fresh += f >= 0;
  CHECK(fresh == 1);

  auto b = comp("html|div");
  auto tb = compute_type_summary(b);
  CHECK(std::find(tb.types.begin(), tb.types.end(), QualType{"html", "div"}) != tb.types.end());
  CHECK(tb.null_type == static_cast<int>(tb.types.size()) - 1);
}

TEST_CASE("attribute word bound") {
  // ^xy$ needs the prefixes "", ^, ^x, ^xy, ^xy$ of the marked pattern
  ConstraintWordAutomaton w({con(AttrOp::Equals, "xy")});
  auto b1 = compute_attr_bound({{con(AttrOp::Equals, "xy")}});
  CHECK(b1.n == 1);
  CHECK(b1.c == 1);
  CHECK(b1.m == w.num_states());
  CHECK(b1.word_len == b1.m);
  auto b2 = compute_attr_bound({{con(AttrOp::Equals, "xy")}, {con(AttrOp::Prefix, "ab")}});
  CHECK(b2.n == 2);
  CHECK(b2.word_len == 2 * b2.m);
}

TEST_CASE("shortest attribute words") {
  auto w = solve_attr_set({con(AttrOp::Prefix, "ab"), con(AttrOp::Suffix, "ba")});
  REQUIRE(w);
  CHECK(*w == "aba");
  CHECK(word_satisfies({con(AttrOp::Prefix, "ab"), con(AttrOp::Suffix, "ba")}, *w));
  auto v = solve_attr_set({con(AttrOp::Includes, "v")});
  REQUIRE(v);
  CHECK(*v == "v");
  CHECK_FALSE(solve_attr_set({con(AttrOp::Equals, "a"), con(AttrOp::Equals, "b")}));
  auto neg = con(AttrOp::Substring, "a");
  neg.negated = true;
  auto n = solve_attr_set({con(AttrOp::Prefix, "b"), neg});
  REQUIRE(n);
  CHECK(*n == "b");
  auto d = assign_distinct({{con(AttrOp::Prefix, "a")}, {con(AttrOp::Prefix, "a")}});
  REQUIRE(d);
  CHECK((*d)[0] != (*d)[1]);
}

TEST_CASE("nomatch") {
  lia::VarPool pool;
  pool.declare("x", lia::Sort::Int);
  auto f = lia::nomatch(lia::Term::var("x"), 0, 5, pool);
  // x < 5 or x > 5
  CHECK(lia::to_smt(f) == "(or (<= x 4) (<= (* (- 1) x) (- 6)))");
  for (long x = 0; x <= 10; ++x) {
    lia::VarPool p;
    auto g = lia::nomatch(lia::Term::constant(x), 0, 5, p);
    auto r = lia::eval_closed(g);
    REQUIRE(r);
    CHECK(*r == (x != 5));
  }
}

TEST_CASE("nomatch grid sample") {
  // the whole grid is part of the acceptance run
  std::vector<std::pair<lia::F, lia::VarPool>> qs;
  std::vector<std::tuple<long, long, long>> at;
  for (long a = -10; a <= 10; a += 3)
    for (long b = -10; b <= 10; b += 4)
      for (long x = 0; x <= 40; ++x) {
        lia::VarPool p;
        auto f = lia::nomatch(lia::Term::constant(x), a, b, p);
        qs.emplace_back(f, p);
        at.emplace_back(x, a, b);
      }
  auto r = oracle::smt_batch(qs);
  for (size_t i = 0; i < qs.size(); ++i) {
    auto [x, a, b] = at[i];
    CHECK_MESSAGE(r[i] == (oracle::nomatch_brute(x, a, b) ? 1 : 0), "x=" << x << " a=" << a << " b=" << b);
  }
}

TEST_CASE("full encoding") {
  CHECK(full(".a") == Emptiness::NonEmpty);
  CHECK(full(":root:nth-child(1)") == Emptiness::Empty);
  CHECK(full(":not(:root):not(:nth-child(2n+2)):not(:nth-child(5n+3))") == Emptiness::NonEmpty);
  auto fe = encode_nonemptiness(comp("div > p.a"));
  CHECK(lia::undeclared(fe.formula, fe.pool).empty());
  CHECK(lia::emit_smtlib(fe.formula, fe.pool).find("(check-sat)") != std::string::npos);
}

TEST_CASE("optimized backend goldens") {
  CHECK(meet(".commercial--masterclasses .lineitem:nth-child(4)", ".commercial--soulmates:nth-child(n+3)") ==
        Emptiness::NonEmpty);
  CHECK(meet(".commercial--masterclasses .lineitem:nth-child(4)", ".commercial--soulmates:nth-child(2n+3)") ==
        Emptiness::Empty);
  CHECK(opt("#x#y") == Emptiness::Empty);
  CHECK(opt(":root ~ .a") == Emptiness::Empty);
  CHECK(opt("p:only-child:nth-child(2)") == Emptiness::Empty);
  CHECK(opt(":not(:root):not(:nth-child(2n+2)):not(:nth-child(5n+3))") == Emptiness::NonEmpty);
  CHECK(opt(".a:not(.a)") == Emptiness::Empty);
  CHECK(opt("[a^=x][a^=y]") == Emptiness::Empty);
  CHECK(opt("[a^=x][a$=y]") == Emptiness::NonEmpty);
}

TEST_CASE("selector-level intersection") {
  EmptinessConfig cfg;
  auto sel = [](const char* s) { return parse_selector(s); };
  CHECK(selectors_intersect(sel(".a"), sel(".b"), cfg).verdict == Emptiness::NonEmpty);
  CHECK(selectors_intersect(sel("#x"), sel("#y"), cfg).verdict == Emptiness::Empty);
  CHECK(selectors_intersect(sel("p::before"), sel("p"), cfg).verdict == Emptiness::Empty);
  CHECK(selectors_intersect(sel("p"), sel("div"), cfg).verdict == Emptiness::Empty);
}

TEST_CASE("backends agree on the selector corpus") {
  for (const auto& line : oracle::load_lines(CSSMIN_TEST_DATA "/selectors.txt")) {
    CAPTURE(line);
    auto o = opt(line);
    auto f = full(line);
    CHECK(o != Emptiness::Unknown);
    CHECK(o == f);
  }
}
