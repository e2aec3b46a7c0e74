#include "oracle_support.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cssmin/minifier.hpp"
#include "cssmin/solver.hpp"

namespace oracle {

using namespace cssmin;

bool nomatch_brute(long x, long a, long b) {
  for (long n = 0; n <= 300; ++n)
    if (a * n + b == x) return false;
  return true;
}

std::pair<CssGraph, Covering> ordered_graph(const std::string& css) {
  auto ss = parse_stylesheet(css);
  std::vector<Rule> rules;
  for (const auto& it : ss.items) {
    if (it.passthrough) throw std::invalid_argument("passthrough block in test stylesheet");
    rules.push_back(it.rule);
  }
  auto gc = build_graph(rules);
  gc.first.order = extract_edge_order_serial(gc.first, gc.second, make_intersect({}));
  return gc;
}

std::vector<int> smt_batch(const std::vector<std::pair<lia::F, lia::VarPool>>& qs, double timeout_s) {
  std::string script = "(set-logic QF_LIA)\n";
  for (const auto& [f, pool] : qs) {
    script += "(push 1)\n";
    for (const auto& [name, sort] : pool.vars())
      script += "(declare-const " + name + (sort == lia::Sort::Int ? " Int)\n" : " Bool)\n");
    script += "(assert " + lia::to_smt(f) + ")\n(check-sat)\n(pop 1)\n";
  }
  const std::string path = write_temp_file(script, ".smt2");
  auto res = run_process({"z3", path}, timeout_s);
  std::remove(path.c_str());
  std::vector<int> out;
  std::istringstream in(res.out);
  std::string line;
  while (std::getline(in, line)) out.push_back(line == "sat" ? 1 : line == "unsat" ? 0 : -1);
  out.resize(qs.size(), -1);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> load_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
    if (line.empty() || line.rfind("//", 0) == 0) continue;
    out.push_back(line);
  }
  return out;
}

std::vector<NodeLabel> selector_alphabet(const Selector& s, size_t cap) {
  std::vector<NodeLabel> out;
  auto add = [&](const std::optional<NodeLabel>& l) {
    if (l && std::find(out.begin(), out.end(), *l) == out.end()) out.push_back(*l);
  };
  add(synthesize_label({&s.nodes.back()}));
  for (size_t k = 0; k + 1 < s.nodes.size(); ++k) add(synthesize_label({&s.nodes[k]}));
  add(synthesize_label({}));
  for (const auto& l : tight_labels({s}, 64)) add(l);
  if (out.size() > cap) out.resize(cap);
  return out;
}

namespace {

const std::vector<std::string> kSelectors = {".a", ".b", ".c", "#x", "#y", "p", ".a.b", "p.a", "div .b"};
const std::vector<std::string> kDecls = {"color:red",      "color:blue",     "color:green",
                                         "font-size:large", "font-size:small", "margin:0",
                                         "margin-top:1px", "padding:0"};

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937& rng) {
  return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

std::string random_stylesheet(std::mt19937& rng, int max_nodes, int max_rules) {
  std::uniform_int_distribution<int> nrules(2, max_rules), nsel(1, 3), ndecl(1, 3);
  for (;;) {
    std::set<std::string> sels, decls;
    std::string css;
    const int r = nrules(rng);
    for (int i = 0; i < r; ++i) {
      std::vector<std::string> ss, ds;
      for (int k = nsel(rng); k > 0; --k) {
        auto s = pick(kSelectors, rng);
        if (std::find(ss.begin(), ss.end(), s) == ss.end()) ss.push_back(s);
      }
      for (int k = ndecl(rng); k > 0; --k) {
        auto d = pick(kDecls, rng);
        if (std::find(ds.begin(), ds.end(), d) == ds.end()) ds.push_back(d);
      }
      sels.insert(ss.begin(), ss.end());
      decls.insert(ds.begin(), ds.end());
      for (size_t k = 0; k < ss.size(); ++k) css += (k ? ", " : "") + ss[k];
      css += " { ";
      for (size_t k = 0; k < ds.size(); ++k) css += (k ? "; " : "") + ds[k];
      css += " }\n";
    }
    if (static_cast<int>(sels.size() + decls.size()) <= max_nodes) return css;
  }
}

Covering random_covering(const CssGraph& g, const Covering& base, int extra, std::mt19937& rng) {
  Covering c = base;
  if (g.edges.empty()) return c;
  for (int i = 0; i < extra; ++i) {
    // Grow a biclique from one edge: a random subset of the selector's properties,
    // then every selector adjacent to all of them, then a random subset of those.
    auto [s0, p0] = pick(g.edges, rng);
    std::vector<int> props{p0};
    for (size_t p = 0; p < g.P.size(); ++p)
      if (static_cast<int>(p) != p0 && g.has_edge(s0, static_cast<int>(p)) && rng() % 2) props.push_back(static_cast<int>(p));
    std::shuffle(props.begin(), props.end(), rng);
    std::vector<int> sels{s0};
    for (size_t s = 0; s < g.S.size(); ++s) {
      if (static_cast<int>(s) == s0 || rng() % 2) continue;
      bool all = std::all_of(props.begin(), props.end(), [&](int p) { return g.has_edge(static_cast<int>(s), p); });
      if (all) sels.push_back(static_cast<int>(s));
    }
    const int j = std::uniform_int_distribution<int>(0, static_cast<int>(c.size()))(rng);
    c = insert_rule(c, CRule{sels, props}, j);
  }
  return c;
}

}  // namespace oracle
