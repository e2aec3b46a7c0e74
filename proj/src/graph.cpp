#include "cssmin/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace cssmin {

int CssGraph::find_sel(const std::string& text) const {
  for (size_t i = 0; i < S.size(); ++i)
    if (S[i].text == text) return static_cast<int>(i);
  return -1;
}

int CssGraph::find_prop(const std::string& text) const {
  for (size_t i = 0; i < P.size(); ++i)
    if (P[i].text == text) return static_cast<int>(i);
  return -1;
}

std::pair<CssGraph, Covering> build_graph(const std::vector<Rule>& rules) {
  CssGraph g;
  Covering c;
  std::map<std::string, int> sid, pid;
  for (const auto& r : rules) {
    CRule cr;
    for (const auto& s : r.selectors) {
      std::string t = serialize(s);
      auto [it, fresh] = sid.emplace(t, static_cast<int>(g.S.size()));
      if (fresh) g.S.push_back({t, text_weight(t), s});
      if (std::find(cr.sels.begin(), cr.sels.end(), it->second) == cr.sels.end()) cr.sels.push_back(it->second);
    }
    for (const auto& d : r.decls) {
      std::string t = d.text();
      auto [it, fresh] = pid.emplace(t, static_cast<int>(g.P.size()));
      if (fresh) g.P.push_back({t, text_weight(t), d});
      // an earlier identical declaration is always overridden by the later one
      auto old = std::find(cr.props.begin(), cr.props.end(), it->second);
      if (old != cr.props.end()) cr.props.erase(old);
      cr.props.push_back(it->second);
    }
    if (cr.sels.empty() || cr.props.empty()) continue;
    for (int s : cr.sels)
      for (int p : cr.props)
        if (g.edge_id.emplace(std::make_pair(s, p), static_cast<int>(g.edges.size())).second) g.edges.emplace_back(s, p);
    c.push_back(std::move(cr));
  }
  return {std::move(g), std::move(c)};
}

int edge_index(const Covering& c, int s, int p) {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    const auto& r = c[i];
    if (std::find(r.sels.begin(), r.sels.end(), s) != r.sels.end() &&
        std::find(r.props.begin(), r.props.end(), p) != r.props.end())
      return i + 1;
  }
  return 0;
}

std::vector<int> edge_indices(const CssGraph& g, const Covering& c) {
  std::vector<int> idx(g.edges.size(), 0);
  for (size_t i = 0; i < c.size(); ++i)
    for (int s : c[i].sels)
      for (int p : c[i].props) {
        int e = g.edge(s, p);
        if (e >= 0) idx[e] = static_cast<int>(i) + 1;
      }
  return idx;
}

Covering trim(const CssGraph& g, const Covering& c) {
  auto idx = edge_indices(g, c);
  Covering out;
  for (size_t i = 0; i < c.size(); ++i) {
    const int me = static_cast<int>(i) + 1;
    CRule r;
    for (int s : c[i].sels) {
      bool keep = false;
      for (int p : c[i].props) keep = keep || (g.edge(s, p) >= 0 && idx[g.edge(s, p)] == me);
      if (keep) r.sels.push_back(s);
    }
    for (int p : c[i].props) {
      bool keep = false;
      for (int s : c[i].sels) keep = keep || (g.edge(s, p) >= 0 && idx[g.edge(s, p)] == me);
      if (keep) r.props.push_back(p);
    }
    if (!r.sels.empty() && !r.props.empty()) out.push_back(std::move(r));
  }
  return out;
}

bool covers_exactly(const CssGraph& g, const Covering& c) {
  std::vector<char> seen(g.edges.size());
  for (const auto& r : c)
    for (int s : r.sels)
      for (int p : r.props) {
        int e = g.edge(s, p);
        if (e < 0) return false;
        seen[e] = 1;
      }
  return std::all_of(seen.begin(), seen.end(), [](char x) { return x; });
}

bool is_valid_covering(const CssGraph& g, const Covering& c, std::string* why) {
  if (!covers_exactly(g, c)) {
    if (why) *why = "covering does not cover exactly the edges of the graph";
    return false;
  }
  auto idx = edge_indices(g, c);
  for (const auto& o : g.order) {
    int m = idx[o.before], m2 = idx[o.after];
    if (m < m2) continue;
    if (m == m2) {
      const auto& props = c[m - 1].props;
      auto pa = std::find(props.begin(), props.end(), g.edges[o.before].second);
      auto pb = std::find(props.begin(), props.end(), g.edges[o.after].second);
      if (pa <= pb) continue;
    }
    if (why) {
      auto e = [&](int id) { return "(" + g.S[g.edges[id].first].text + ", " + g.P[g.edges[id].second].text + ")"; };
      *why = "edge order violated: " + e(o.before) + " must precede " + e(o.after);
    }
    return false;
  }
  return true;
}

Covering insert_rule(const Covering& c, const CRule& r, int j) {
  Covering out(c.begin(), c.begin() + j);
  out.push_back(r);
  out.insert(out.end(), c.begin() + j, c.end());
  return out;
}

Covering apply_opportunity(const CssGraph& g, const Covering& c, const CRule& r, int j) {
  return trim(g, insert_rule(c, r, j));
}

int rule_weight(const CssGraph& g, const CRule& r) {
  int w = 0;
  for (int s : r.sels) w += g.S[s].weight;
  for (int p : r.props) w += g.P[p].weight;
  return w;
}

int covering_weight(const CssGraph& g, const Covering& c) {
  int w = 0;
  for (const auto& r : c) w += rule_weight(g, r);
  return w;
}

std::vector<Rule> to_rules(const CssGraph& g, const Covering& c) {
  std::vector<Rule> out;
  for (const auto& r : c) {
    Rule rule;
    for (int s : r.sels) rule.selectors.push_back(g.S[s].sel);
    for (int p : r.props) rule.decls.push_back(g.P[p].decl);
    out.push_back(std::move(rule));
  }
  return out;
}

std::string serialize(const CssGraph& g, const Covering& c) {
  std::string out;
  for (const auto& r : to_rules(g, c)) out += serialize(r);
  return out;
}

std::string describe(const CssGraph& g, const CRule& r) {
  std::string out;
  for (size_t i = 0; i < r.sels.size(); ++i) out += (i ? "," : "") + g.S[r.sels[i]].text;
  out += "{";
  for (size_t i = 0; i < r.props.size(); ++i) out += (i ? ";" : "") + g.P[r.props[i]].text;
  return out + "}";
}

namespace {

struct Candidate {
  int e1, e2;
  int s1, s2;
};

// Edge pairs meeting every condition except selector intersection.
std::vector<Candidate> order_candidates(const CssGraph& g, const Covering& c) {
  // Last occurrence of each edge as (rule index, position of the property in that rule).
  auto idx = edge_indices(g, c);
  std::vector<std::pair<int, int>> at(g.edges.size());
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (idx[e] == 0) continue;
    const auto& props = c[idx[e] - 1].props;
    at[e] = {idx[e], static_cast<int>(std::find(props.begin(), props.end(), g.edges[e].second) - props.begin())};
  }
  std::vector<Specificity> spec(g.edges.size());
  std::map<Specificity, std::vector<int>> groups;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto [s, p] = g.edges[e];
    spec[e] = specificity(g.S[s].sel, g.P[p].decl.important);
    groups[spec[e]].push_back(static_cast<int>(e));
  }
  std::map<std::pair<int, int>, bool> related;
  auto rel = [&](int p1, int p2) {
    auto key = std::minmax(p1, p2);
    auto it = related.find(key);
    if (it != related.end()) return it->second;
    bool r = related_property_names(g.P[p1].decl.name, g.P[p2].decl.name);
    related.emplace(key, r);
    return r;
  };
  std::vector<Candidate> out;
  for (const auto& [sp, es] : groups) {
    for (int e1 : es) {
      for (int e2 : es) {
        const auto [s, p] = g.edges[e1];
        const auto [s2, p2] = g.edges[e2];
        if (p == p2 || at[e1] >= at[e2] || !rel(p, p2)) continue;
        int back = g.edge(s2, p);
        if (back >= 0 && at[back] >= at[e2]) continue;
        out.push_back({e1, e2, s, s2});
      }
    }
  }
  return out;
}

std::vector<EdgeOrderPair> assemble(const std::vector<Candidate>& cands,
                                    const std::map<std::pair<int, int>, bool>& meets) {
  std::vector<EdgeOrderPair> out;
  for (const auto& c : cands) {
    if (c.s1 == c.s2 || meets.at(std::minmax(c.s1, c.s2))) out.push_back({c.e1, c.e2});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> selector_pairs(const std::vector<Candidate>& cands) {
  std::set<std::pair<int, int>> ps;
  for (const auto& c : cands)
    if (c.s1 != c.s2) ps.insert(std::minmax(c.s1, c.s2));
  return {ps.begin(), ps.end()};
}

}  // namespace

std::vector<EdgeOrderPair> extract_edge_order_serial(const CssGraph& g, const Covering& c,
                                                     const IntersectFn& intersects, OrderStats* stats) {
  auto cands = order_candidates(g, c);
  auto pairs = selector_pairs(cands);
  std::map<std::pair<int, int>, bool> meets;
  long hits = 0;
  for (const auto& pr : pairs) {
    bool r = intersects(g.S[pr.first].sel, g.S[pr.second].sel);
    meets[pr] = r;
    hits += r;
  }
  if (stats) *stats = {static_cast<long>(pairs.size()), hits};
  return assemble(cands, meets);
}

std::vector<EdgeOrderPair> extract_edge_order(const CssGraph& g, const Covering& c, const IntersectFn& intersects,
                                              OrderStats* stats) {
  auto cands = order_candidates(g, c);
  auto pairs = selector_pairs(cands);
  std::vector<char> res(pairs.size());
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) res[i] = intersects(g.S[pairs[i].first].sel, g.S[pairs[i].second].sel);
  std::map<std::pair<int, int>, bool> meets;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    meets[pairs[i]] = res[i];
    hits += res[i];
  }
  if (stats) *stats = {n, hits};
  return assemble(cands, meets);
}

std::string graph_json(const CssGraph& g, const Covering& c) {
  using nlohmann::json;
  json j;
  j["selectors"] = json::array();
  for (const auto& s : g.S) j["selectors"].push_back({{"text", s.text}, {"weight", s.weight}});
  j["properties"] = json::array();
  for (const auto& p : g.P) j["properties"].push_back({{"text", p.text}, {"weight", p.weight}});
  j["edges"] = json::array();
  for (const auto& [s, p] : g.edges) j["edges"].push_back({s, p});
  j["order"] = json::array();
  for (const auto& o : g.order) j["order"].push_back({o.before, o.after});
  j["covering"] = json::array();
  for (const auto& r : c) j["covering"].push_back({{"selectors", r.sels}, {"properties", r.props}});
  return j.dump(1);
}

}  // namespace cssmin
