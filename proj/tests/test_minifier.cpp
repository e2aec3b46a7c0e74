#include "doctest.h"

#include "cssmin/minifier.hpp"
#include "json.hpp"
#include "oracle_support.hpp"

using namespace cssmin;

namespace {

const char* kSimple =
    "#apple { color:blue; font-size:small }\n"
    ".fruit, #broccoli { color:red; font-size:large }\n"
    "#orange { color:blue }\n"
    "#tomato { color:red; font-size:large;\n"
    "          background-color:lightblue }\n";

RunConfig det() {
  RunConfig cfg;
  cfg.deterministic = true;
  return cfg;
}

}  // namespace

TEST_CASE("walk-through end to end") {
  auto rep = run(parse_stylesheet(kSimple), det());
  REQUIRE(rep.iterations.size() == 2);
  CHECK(rep.iterations[0].rule == ".fruit,#broccoli,#tomato{color:red;font-size:large}");
  CHECK(rep.iterations[0].position == 4);
  CHECK(rep.iterations[1].rule == "#apple,#orange{color:blue}");
  CHECK(rep.iterations[1].position == 2);
  CHECK(rep.iterations[0].bytes_after < rep.iterations[0].bytes_before);
  CHECK(rep.iterations[1].bytes_after < rep.iterations[1].bytes_before);
  CHECK(serialize(rep.output) ==
        "#apple{font-size:small}#apple,#orange{color:blue}#tomato{background-color:lightblue}"
        ".fruit,#broccoli,#tomato{color:red;font-size:large}");
  CHECK_FALSE(rep.solver_failed);
  CHECK(rep.bytes_out < rep.bytes_in);
}

TEST_CASE("full mode gives the same walk-through") {
  auto cfg = det();
  cfg.mode = EnumMode::Full;
  auto rep = run(parse_stylesheet(kSimple), cfg);
  CHECK(serialize(rep.output) ==
        "#apple{font-size:small}#apple,#orange{color:blue}#tomato{background-color:lightblue}"
        ".fruit,#broccoli,#tomato{color:red;font-size:large}");
}

TEST_CASE("segments") {
  auto ss = parse_stylesheet(".a{color:red} @media print { .b{color:blue} } .c{color:red} .d{color:red}");
  auto segs = split_segments(ss);
  REQUIRE(segs.size() == 3);
  CHECK_FALSE(segs[0].passthrough);
  CHECK(segs[1].passthrough);
  CHECK(segs[2].rules.size() == 2);
  auto rep = run(ss, det());
  // .a cannot join .c and .d across the @media block
  CHECK(serialize(rep.output) == ".a{color:red}@media print { .b{color:blue} }.c,.d{color:red}");
}

TEST_CASE("validation verdicts") {
  ValidationBounds vb;
  auto simple = parse_stylesheet(kSimple);
  CHECK(validate_equivalence(simple, simple, vb).pass);

  auto bigger = parse_stylesheet(std::string(kSimple) + ".fruit, #broccoli, #tomato { color:red; font-size:large }");
  auto trimmed = parse_stylesheet(
      "#apple { color:blue; font-size:small } #orange { color:blue } #tomato { background-color:lightblue }"
      ".fruit, #broccoli, #tomato { color:red; font-size:large }");
  CHECK(compare_cascades(bigger, trimmed, vb).pass);
  CHECK(validate_equivalence(simple, trimmed, vb).pass);

  auto orig = parse_stylesheet(".a { color:red; font-size:large } .c { color:green } .b { color:red; font-size:large }");
  auto bad = parse_stylesheet(".a, .b { color:red; font-size:large } .c { color:green }");
  auto v = compare_cascades(orig, bad, vb);
  CHECK_FALSE(v.pass);
  REQUIRE(v.witness);
  CHECK(v.witness->property == "color");
  CHECK(v.witness->tree.find("b c") != std::string::npos);
  auto full = validate_equivalence(orig, bad, vb);
  CHECK_FALSE(full.pass);
  CHECK(full.reason.find("edge order") != std::string::npos);

  // a different file altogether
  auto other = parse_stylesheet("#apple { color:red }");
  CHECK_FALSE(validate_equivalence(simple, other, vb).pass);
}

TEST_CASE("small corpus file") {
  auto ss = parse_stylesheet(oracle::read_file(CSSMIN_TEST_DATA "/corpus/pure-tables.css"), true);
  auto cfg = det();
  cfg.validate = ValidationBounds{};
  auto rep = run(ss, cfg);
  CHECK(rep.bytes_out <= rep.bytes_in);
  REQUIRE(rep.validation);
  CHECK(rep.validation->pass);
  auto j = nlohmann::json::parse(report_json(rep));
  CHECK(j["schema"] == 1);
  CHECK(j["bytes_out"] == rep.bytes_out);
}

TEST_CASE("merges preserve cascades on random stylesheets") {
  std::mt19937 rng(99);
  for (int i = 0; i < 15; ++i) {
    auto css = oracle::random_stylesheet(rng, 16, 6);
    CAPTURE(css);
    auto cfg = det();
    cfg.validate = ValidationBounds{};
    auto rep = run(parse_stylesheet(css), cfg);
    REQUIRE(rep.validation);
    CHECK(rep.validation->pass);
    CHECK(rep.bytes_out <= rep.bytes_in);
  }
}

TEST_CASE("a broken solver is reported") {
  auto cfg = det();
  cfg.maxsat.command = {"/nonexistent/solver"};
  auto rep = run(parse_stylesheet(kSimple), cfg);
  CHECK(rep.solver_failed);
  CHECK_FALSE(rep.warnings.empty());
  // the input comes back unchanged
  CHECK(serialize(rep.output) == serialize(parse_stylesheet(kSimple)));
}
