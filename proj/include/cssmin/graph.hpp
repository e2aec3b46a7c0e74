#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cssmin/selector.hpp"
#include "cssmin/stylesheet.hpp"

namespace cssmin {

struct SelNode {
  std::string text;  // canonical serialization
  int weight = 0;
  Selector sel;
};

struct PropNode {
  std::string text;
  int weight = 0;
  Declaration decl;
};

// A rule over graph node ids: selectors X (unordered) and properties Y (ordered).
struct CRule {
  std::vector<int> sels;
  std::vector<int> props;
  bool operator==(const CRule&) const = default;
};
using Covering = std::vector<CRule>;

struct EdgeOrderPair {
  int before, after;  // edge ids
  auto operator<=>(const EdgeOrderPair&) const = default;
};

struct CssGraph {
  std::vector<SelNode> S;
  std::vector<PropNode> P;
  std::vector<std::pair<int, int>> edges;  // (s, p)
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<EdgeOrderPair> order;        // the edge order, sorted

  bool has_edge(int s, int p) const { return edge_id.count({s, p}) > 0; }
  int edge(int s, int p) const {
    auto it = edge_id.find({s, p});
    return it == edge_id.end() ? -1 : it->second;
  }
  int find_sel(const std::string& text) const;
  int find_prop(const std::string& text) const;
  int node_weight(bool is_sel, int id) const { return is_sel ? S[id].weight : P[id].weight; }
};

// Graph and covering for a run of plain rules.  Identical selector or declaration texts
// share a node; a declaration repeated inside one rule keeps its last position.
std::pair<CssGraph, Covering> build_graph(const std::vector<Rule>& rules);

// 1-based index of the last rule containing (s, p); 0 if none.
int edge_index(const Covering& c, int s, int p);
// All edge indices at once, by edge id.
std::vector<int> edge_indices(const CssGraph& g, const Covering& c);

Covering trim(const CssGraph& g, const Covering& c);
bool covers_exactly(const CssGraph& g, const Covering& c);
bool is_valid_covering(const CssGraph& g, const Covering& c, std::string* why = nullptr);

// Insert `r` so that it becomes rule j+1 (0 <= j <= |c|), then trim.
Covering insert_rule(const Covering& c, const CRule& r, int j);
Covering apply_opportunity(const CssGraph& g, const Covering& c, const CRule& r, int j);

int covering_weight(const CssGraph& g, const Covering& c);
int rule_weight(const CssGraph& g, const CRule& r);
std::vector<Rule> to_rules(const CssGraph& g, const Covering& c);
std::string serialize(const CssGraph& g, const Covering& c);
std::string describe(const CssGraph& g, const CRule& r);

// Answers "may these two selectors match a common node?".  Must be conservative: true
// whenever unsure.
using IntersectFn = std::function<bool(const Selector&, const Selector&)>;

struct OrderStats {
  long candidate_pairs = 0;   // selector pairs that needed an intersection query
  long intersecting = 0;
};

// The edge order: same pair specificity, related but different declarations, selectors
// that intersect, m < m' and ((s', p) absent or its last occurrence before m').  An
// occurrence is placed by (rule index, position in the rule), so declarations of one
// rule are ordered too.
std::vector<EdgeOrderPair> extract_edge_order(const CssGraph& g, const Covering& c, const IntersectFn& intersects,
                                              OrderStats* stats = nullptr);
// Same result, single-threaded; kept as the reference for the parallel version.
std::vector<EdgeOrderPair> extract_edge_order_serial(const CssGraph& g, const Covering& c,
                                                     const IntersectFn& intersects, OrderStats* stats = nullptr);

std::string graph_json(const CssGraph& g, const Covering& c);

}  // namespace cssmin
