#include "cssmin/biclique.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace cssmin {

bool is_biclique(const CssGraph& g, const Biclique& b) {
  if (b.sels.empty() || b.props.empty()) return false;
  for (int s : b.sels)
    for (int p : b.props)
      if (!g.has_edge(s, p)) return false;
  return true;
}

bool contains(const Biclique& outer, const Biclique& inner) {
  return std::includes(outer.sels.begin(), outer.sels.end(), inner.sels.begin(), inner.sels.end()) &&
         std::includes(outer.props.begin(), outer.props.end(), inner.props.begin(), inner.props.end());
}

void canonical_sort(const CssGraph& g, std::vector<Biclique>& bs) {
  auto key = [&](const Biclique& b) {
    std::pair<std::vector<std::string>, std::vector<std::string>> k;
    for (int s : b.sels) k.first.push_back(g.S[s].text);
    for (int p : b.props) k.second.push_back(g.P[p].text);
    std::sort(k.first.begin(), k.first.end());
    std::sort(k.second.begin(), k.second.end());
    return k;
  };
  std::vector<std::pair<decltype(key(Biclique{})), Biclique>> keyed;
  for (auto& b : bs) keyed.emplace_back(key(b), std::move(b));
  std::sort(keyed.begin(), keyed.end());
  bs.clear();
  for (auto& [k, b] : keyed) bs.push_back(std::move(b));
}

namespace {

struct Adjacency {
  std::vector<std::vector<int>> sels_of;       // per property
  std::vector<std::vector<char>> has;          // [p][s]
  explicit Adjacency(const CssGraph& g)
      : sels_of(g.P.size()), has(g.P.size(), std::vector<char>(g.S.size())) {
    for (const auto& [s, p] : g.edges) {
      sels_of[p].push_back(s);
      has[p][s] = 1;
    }
    for (auto& v : sels_of) std::sort(v.begin(), v.end());
  }
};

// MBEA: L holds selectors, R/P/Q hold properties.
void mbea(const Adjacency& adj, const std::vector<int>& L, const std::vector<int>& R, std::vector<int> P,
          std::vector<int> Q, std::vector<Biclique>& out) {
  while (!P.empty()) {
    const int x = P.front();
    std::vector<int> Lx;
    for (int u : L)
      if (adj.has[x][u]) Lx.push_back(u);
    auto hits = [&](int v) {
      size_t n = 0;
      for (int u : Lx) n += adj.has[v][u];
      return n;
    };
    std::vector<int> Rx = R;
    Rx.push_back(x);
    std::vector<int> Px, Qx;
    bool maximal = true;
    for (int v : Q) {
      size_t n = hits(v);
      if (n == Lx.size()) {
        maximal = false;
        break;
      }
      if (n > 0) Qx.push_back(v);
    }
    if (maximal) {
      for (int v : P) {
        if (v == x) continue;
        size_t n = hits(v);
        if (n == Lx.size()) Rx.push_back(v);
        else if (n > 0) Px.push_back(v);
      }
      Biclique b{Lx, Rx};
      std::sort(b.props.begin(), b.props.end());
      out.push_back(std::move(b));
      if (!Px.empty()) mbea(adj, Lx, Rx, Px, Qx, out);
    }
    P.erase(P.begin());
    Q.push_back(x);
  }
}

}  // namespace

std::vector<Biclique> enumerate_maximal_bicliques(const CssGraph& g) {
  Adjacency adj(g);
  std::vector<int> L(g.S.size()), P;
  for (size_t s = 0; s < g.S.size(); ++s) L[s] = static_cast<int>(s);
  for (size_t p = 0; p < g.P.size(); ++p)
    if (!adj.sels_of[p].empty()) P.push_back(static_cast<int>(p));
  std::vector<Biclique> out;
  mbea(adj, L, {}, P, {}, out);
  canonical_sort(g, out);
  return out;
}

std::vector<Biclique> brute_force_maximal_bicliques(const CssGraph& g) {
  const size_t np = g.P.size();
  if (np > 20) throw std::invalid_argument("graph too large for brute force");
  Adjacency adj(g);
  std::vector<Biclique> out;
  for (unsigned long mask = 1; mask < (1ul << np); ++mask) {
    std::vector<int> X;
    for (size_t s = 0; s < g.S.size(); ++s) {
      bool all = true;
      for (size_t p = 0; p < np && all; ++p)
        if (mask >> p & 1) all = adj.has[p][s];
      if (all) X.push_back(static_cast<int>(s));
    }
    if (X.empty()) continue;
    std::vector<int> Y;
    unsigned long closure = 0;
    for (size_t p = 0; p < np; ++p) {
      bool all = true;
      for (int s : X) all = all && adj.has[p][s];
      if (all) {
        Y.push_back(static_cast<int>(p));
        closure |= 1ul << p;
      }
    }
    if (closure == mask) out.push_back({X, Y});
  }
  canonical_sort(g, out);
  return out;
}

OrderContext::OrderContext(const CssGraph& g, const Covering& c)
    : g_(g), c_(c), idx_(edge_indices(g, c)), slot_(g.edges.size(), -1) {
  int n = 0;
  for (const auto& o : g.order) {
    if (slot_[o.before] < 0) slot_[o.before] = n++;
    if (slot_[o.after] < 0) slot_[o.after] = n++;
  }
  std::vector<std::vector<int>> succ(n);
  for (const auto& o : g.order) succ[slot_[o.before]].push_back(slot_[o.after]);
  reach_.assign(n, std::vector<bool>(n));
  for (int a = 0; a < n; ++a) {
    std::vector<int> stack(succ[a].begin(), succ[a].end());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (reach_[a][v]) continue;
      reach_[a][v] = true;
      for (int w : succ[v])
        if (!reach_[a][w]) stack.push_back(w);
    }
  }
}

bool OrderContext::reaches(int e1, int e2) const {
  int a = slot_[e1], b = slot_[e2];
  return a >= 0 && b >= 0 && reach_[a][b];
}

std::vector<int> OrderContext::edges_last(const Biclique& b, int j) const {
  std::vector<int> out;
  for (int s : b.sels)
    for (int p : b.props) {
      int e = g_.edge(s, p);
      if (e >= 0 && idx_[e] <= j && slot_[e] >= 0) out.push_back(e);
    }
  return out;
}

std::set<std::pair<int, int>> OrderContext::prop_order(const Biclique& b, int j) const {
  std::set<std::pair<int, int>> rel;
  auto el = edges_last(b, j);
  for (int e1 : el)
    for (int e2 : el)
      if (reaches(e1, e2)) rel.emplace(g_.edges[e1].second, g_.edges[e2].second);
  return rel;
}

std::set<std::pair<bool, int>> OrderContext::order_nodes(const Biclique& b, int j) const {
  std::set<std::pair<bool, int>> out;
  auto el = edges_last(b, j);
  for (int e1 : el)
    for (int e2 : el)
      if (reaches(e1, e2)) {
        out.emplace(true, g_.edges[e1].first);
        out.emplace(true, g_.edges[e2].first);
        out.emplace(false, g_.edges[e1].second);
        out.emplace(false, g_.edges[e2].second);
      }
  return out;
}

Orderability check_orderable(const OrderContext& oc, const Biclique& b, int j) {
  auto rel = oc.prop_order(b, j);
  std::map<int, std::vector<int>> succ;
  for (const auto& [a, c] : rel) succ[a].push_back(c);
  Orderability res;
  // Cycles through two or more properties make the better witness; self-loops
  // ((s,p) reaching (s',p) through other edges) are reported only when none exists.
  for (bool self : {false, true}) {
    std::map<int, int> color;  // 0 white, 1 on stack, 2 done
    std::vector<int> path;
    std::function<bool(int)> dfs = [&](int v) {
      color[v] = 1;
      path.push_back(v);
      for (int w : succ[v]) {
        if (w == v && !self) continue;
        if (color[w] == 1) {
          auto it = std::find(path.begin(), path.end(), w);
          res.cycle.assign(it, path.end());
          res.cycle.push_back(w);
          return true;
        }
        if (color[w] == 0 && dfs(w)) return true;
      }
      path.pop_back();
      color[v] = 2;
      return false;
    };
    for (int p : b.props) {
      if (color[p] == 0 && dfs(p)) {
        res.orderable = false;
        return res;
      }
    }
  }
  return res;
}

bool is_orderable(const OrderContext& oc, const Biclique& b, int j) { return check_orderable(oc, b, j).orderable; }

std::optional<std::vector<int>> order_properties(const OrderContext& oc, const Biclique& b, int j) {
  auto rel = oc.prop_order(b, j);
  std::map<int, int> indeg;
  std::map<int, std::vector<int>> succ;
  for (int p : b.props) indeg[p] = 0;
  for (const auto& [a, c] : rel) {
    succ[a].push_back(c);
    ++indeg[c];
  }
  // Property ids follow first appearance, so the smallest ready id wins ties.
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (const auto& [p, d] : indeg)
    if (d == 0) ready.push(p);
  std::vector<int> out;
  while (!ready.empty()) {
    int p = ready.top();
    ready.pop();
    out.push_back(p);
    for (int q : succ[p])
      if (--indeg[q] == 0) ready.push(q);
  }
  if (out.size() != b.props.size()) return std::nullopt;
  return out;
}

bool OrderableEnumeration::forbidden_at(int i, int j) const {
  for (const auto& [pos, list] : forbidden_first) {
    if (pos > j) break;
    if (std::find(list.begin(), list.end(), i) != list.end()) return true;
  }
  return false;
}

namespace {

using NodeRef = std::pair<bool, int>;  // (is_selector, id)

Biclique without(const Biclique& b, NodeRef w) {
  Biclique r = b;
  auto& v = w.first ? r.sels : r.props;
  v.erase(std::remove(v.begin(), v.end(), w.second), v.end());
  return r;
}

// Orderable sub-bicliques of b at j, removing an increasing number of candidate nodes.
void orderable_sub(const OrderContext& oc, const Biclique& b, int j, const std::vector<NodeRef>& cand,
                   std::set<Biclique>& found, std::set<std::pair<Biclique, std::vector<NodeRef>>>& seen) {
  if (!seen.emplace(b, cand).second) return;
  std::vector<NodeRef> failed;
  for (const auto& w : cand) {
    Biclique r = without(b, w);
    if (r.sels.empty() || r.props.empty()) continue;
    if (is_orderable(oc, r, j)) found.insert(std::move(r));
    else failed.push_back(w);
  }
  for (const auto& w : failed) {
    std::vector<NodeRef> rest;
    for (const auto& u : failed)
      if (u != w) rest.push_back(u);
    orderable_sub(oc, without(b, w), j, rest, found, seen);
  }
}

}  // namespace

OrderableEnumeration build_enumeration(const OrderContext& oc, EnumMode mode) {
  return build_enumeration(oc, enumerate_maximal_bicliques(oc.graph()), mode);
}

OrderableEnumeration build_enumeration(const OrderContext& oc, std::vector<Biclique> maximal, EnumMode mode) {
  OrderableEnumeration en;
  const int m = oc.rules();
  en.maximal = static_cast<int>(maximal.size());
  std::vector<char> always;  // orderable at m, hence at every position
  for (const auto& b : maximal) {
    always.push_back(is_orderable(oc, b, m));
    en.unorderable_maximal += !always.back();
  }
  if (mode == EnumMode::Fast) {
    for (size_t i = 0; i < maximal.size(); ++i)
      if (always[i]) en.bicliques.push_back(std::move(maximal[i]));
    return en;
  }

  std::set<Biclique> listed(maximal.begin(), maximal.end());
  en.bicliques = std::move(maximal);
  std::vector<char> forbidden(en.bicliques.size());
  for (int j = 1; j <= m; ++j) {
    std::vector<int> bad;
    for (size_t i = 0; i < en.bicliques.size(); ++i) {
      if (forbidden[i] || (i < always.size() && always[i])) continue;
      const Biclique b = en.bicliques[i];
      if (is_orderable(oc, b, j)) continue;
      bad.push_back(static_cast<int>(i));
      forbidden[i] = 1;
      auto nodes = oc.order_nodes(b, j);
      std::set<Biclique> found;
      std::set<std::pair<Biclique, std::vector<NodeRef>>> seen;
      orderable_sub(oc, b, j, {nodes.begin(), nodes.end()}, found, seen);
      std::vector<Biclique> sub(found.begin(), found.end());
      canonical_sort(oc.graph(), sub);
      for (const auto& s : sub) {
        bool dominated = false;
        for (const auto& t : found) dominated = dominated || (t != s && contains(t, s));
        if (dominated || !listed.insert(s).second) continue;
        en.bicliques.push_back(s);
        forbidden.push_back(0);
      }
    }
    if (!bad.empty()) en.forbidden_first[j] = std::move(bad);
  }
  return en;
}

}  // namespace cssmin
