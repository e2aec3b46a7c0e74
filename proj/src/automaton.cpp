#include "cssmin/automaton.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cssmin {

const char* dir_name(Dir d) {
  switch (d) {
    case Dir::Child: return "child";
    case Dir::Neighbour: return "neighbour";
    case Dir::Sibling: return "sibling";
    case Dir::Last: return "last";
  }
  return "?";
}

bool is_any(const NodeSelector& s) { return s.type.is_any() && s.conds.empty(); }

NodeSelector bottom_node_selector() {
  NodeSelector s;
  Condition c;
  c.kind = Condition::Kind::Type;
  c.negated = true;
  s.conds.push_back(c);
  return s;
}

bool is_bottom(const NodeSelector& s) {
  for (const auto& c : s.conds)
    if (c.kind == Condition::Kind::Type && c.negated && c.type.is_any()) return true;
  return false;
}

CssAutomaton compile(const Selector& s) {
  CssAutomaton a;
  const int n = static_cast<int>(s.nodes.size());
  auto add_state = [&](const std::string& name) {
    a.names.push_back(name);
    return a.num_states++;
  };
  std::vector<int> sel(n);
  for (int i = 0; i < n; ++i) sel[i] = add_state("sel" + std::to_string(i + 1));
  const NodeSelector any;
  a.q0 = sel[0];
  a.trans.push_back({sel[0], Dir::Child, any, sel[0]});
  a.trans.push_back({sel[0], Dir::Sibling, any, sel[0]});
  for (int i = 0; i + 1 < n; ++i) {
    const auto& si = s.nodes[i];
    switch (s.combs[i]) {
      case Combinator::Descendant: {
        int m = add_state("mid" + std::to_string(i + 1));
        a.trans.push_back({sel[i], Dir::Child, si, sel[i + 1]});
        a.trans.push_back({sel[i], Dir::Child, si, m});
        a.trans.push_back({m, Dir::Child, any, m});
        a.trans.push_back({m, Dir::Sibling, any, m});
        a.trans.push_back({m, Dir::Neighbour, any, sel[i + 1]});
        a.trans.push_back({m, Dir::Child, any, sel[i + 1]});
        break;
      }
      case Combinator::Child: {
        int m = add_state("mid" + std::to_string(i + 1));
        a.trans.push_back({sel[i], Dir::Child, si, sel[i + 1]});
        a.trans.push_back({sel[i], Dir::Child, si, m});
        a.trans.push_back({m, Dir::Sibling, any, m});
        a.trans.push_back({m, Dir::Neighbour, any, sel[i + 1]});
        break;
      }
      case Combinator::Neighbour:
        a.trans.push_back({sel[i], Dir::Neighbour, si, sel[i + 1]});
        break;
      case Combinator::Sibling: {
        int m = add_state("mid" + std::to_string(i + 1));
        a.trans.push_back({sel[i], Dir::Neighbour, si, sel[i + 1]});
        a.trans.push_back({sel[i], Dir::Neighbour, si, m});
        a.trans.push_back({m, Dir::Sibling, any, m});
        a.trans.push_back({m, Dir::Neighbour, any, sel[i + 1]});
        break;
      }
    }
  }
  a.qf = add_state("qf");
  a.trans.push_back({sel[n - 1], Dir::Last, s.nodes[n - 1], a.qf});
  return a;
}

NodeSelector intersect_node_selectors(const NodeSelector& x, const NodeSelector& y) {
  using TK = TypeSel::Kind;
  const TypeSel& t1 = x.type;
  const TypeSel& t2 = y.type;
  TypeSel t;
  bool ok = true;
  auto ns_of = [](const TypeSel& s) { return s.kind == TK::AnyInNs || s.kind == TK::NsElement; };
  auto el_of = [](const TypeSel& s) { return s.kind == TK::Element || s.kind == TK::NsElement; };
  if (t1.is_any()) {
    t = t2;
  } else if (t2.is_any()) {
    t = t1;
  } else {
    bool has_ns = ns_of(t1) || ns_of(t2);
    bool has_el = el_of(t1) || el_of(t2);
    if (ns_of(t1) && ns_of(t2) && t1.ns != t2.ns) ok = false;
    if (el_of(t1) && el_of(t2) && t1.elem != t2.elem) ok = false;
    std::string ns = ns_of(t1) ? t1.ns : t2.ns;
    std::string el = el_of(t1) ? t1.elem : t2.elem;
    t.ns = has_ns ? ns : "";
    t.elem = has_el ? el : "";
    t.kind = has_ns ? (has_el ? TK::NsElement : TK::AnyInNs) : TK::Element;
  }
  if (!ok || is_bottom(x) || is_bottom(y)) return bottom_node_selector();
  NodeSelector out;
  out.type = t;
  out.conds = x.conds;
  for (const auto& c : y.conds)
    if (std::find(out.conds.begin(), out.conds.end(), c) == out.conds.end()) out.conds.push_back(c);
  return out;
}

CssAutomaton intersect(const CssAutomaton& a, const CssAutomaton& b) {
  const int nb = b.num_states;
  auto id = [&](int p, int q) { return p * nb + q; };
  struct Raw {
    int from;
    Dir dir;
    NodeSelector sel;
    int to;
  };
  std::vector<Raw> raw;
  std::vector<bool> b_sib_loop(b.num_states), a_sib_loop(a.num_states);
  for (const auto& t : a.trans)
    if (t.dir == Dir::Sibling && t.from == t.to) a_sib_loop[t.from] = true;
  for (const auto& t : b.trans)
    if (t.dir == Dir::Sibling && t.from == t.to) b_sib_loop[t.from] = true;
  for (const auto& t1 : a.trans) {
    for (const auto& t2 : b.trans) {
      if (t1.dir != t2.dir) continue;
      if (t1.dir == Dir::Sibling) {
        raw.push_back({id(t1.from, t2.from), Dir::Sibling, NodeSelector{}, id(t1.to, t2.to)});
      } else {
        auto s = intersect_node_selectors(t1.sel, t2.sel);
        if (!is_bottom(s)) raw.push_back({id(t1.from, t2.from), t1.dir, s, id(t1.to, t2.to)});
      }
    }
  }
  for (const auto& t1 : a.trans) {
    if (t1.dir != Dir::Neighbour) continue;
    for (int q = 0; q < b.num_states; ++q)
      if (b_sib_loop[q] && !is_bottom(t1.sel)) raw.push_back({id(t1.from, q), Dir::Neighbour, t1.sel, id(t1.to, q)});
  }
  for (const auto& t2 : b.trans) {
    if (t2.dir != Dir::Neighbour) continue;
    for (int p = 0; p < a.num_states; ++p)
      if (a_sib_loop[p] && !is_bottom(t2.sel)) raw.push_back({id(p, t2.from), Dir::Neighbour, t2.sel, id(p, t2.to)});
  }
  const int total = a.num_states * nb;
  const int init = id(a.q0, b.q0), fin = id(a.qf, b.qf);
  std::vector<std::vector<int>> fwd(total), bwd(total);
  for (size_t k = 0; k < raw.size(); ++k) {
    fwd[raw[k].from].push_back(static_cast<int>(k));
    bwd[raw[k].to].push_back(static_cast<int>(k));
  }
  std::vector<char> reach(total), coreach(total);
  std::vector<int> stack = {init};
  reach[init] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int k : fwd[s])
      if (!reach[raw[k].to]) reach[raw[k].to] = 1, stack.push_back(raw[k].to);
  }
  stack = {fin};
  coreach[fin] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int k : bwd[s])
      if (!coreach[raw[k].from]) coreach[raw[k].from] = 1, stack.push_back(raw[k].from);
  }
  CssAutomaton out;
  std::map<int, int> remap;
  auto state = [&](int s) {
    auto it = remap.find(s);
    if (it != remap.end()) return it->second;
    int p = s / nb, q = s % nb;
    out.names.push_back("(" + a.names[p] + "," + b.names[q] + ")");
    remap[s] = out.num_states;
    return out.num_states++;
  };
  out.q0 = state(init);
  for (const auto& r : raw) {
    if (reach[r.from] && coreach[r.from] && reach[r.to] && coreach[r.to])
      out.trans.push_back({state(r.from), r.dir, r.sel, state(r.to)});
  }
  out.qf = state(fin);
  return out;
}

std::vector<char> accepting_nodes(const CssAutomaton& a, const DocumentTree& t, LocalMatchCache* cache) {
  const int N = t.size();
  const int Q = a.num_states;
  std::vector<char> at(static_cast<size_t>(N) * Q, 0);
  std::vector<char> acc(N, 0);
  std::vector<std::vector<const Transition*>> out(Q);
  for (const auto& tr : a.trans) out[tr.from].push_back(&tr);
  auto label_ok = [&](const NodeSelector& s, int n) {
    if (is_any(s)) return true;
    bool loc = cache ? cache->get(s, t.label_id(n)) : local_match(s, t.label(n));
    if (!loc) return false;
    for (const auto& c : s.conds)
      if (!positional_condition(c, t, n)) return false;
    return true;
  };
  if (N == 0) return acc;
  at[static_cast<size_t>(0) * Q + a.q0] = 1;
  // Parents precede children and earlier siblings precede later ones in node order.
  for (int n = 0; n < N; ++n) {
    for (int q = 0; q < Q; ++q) {
      if (!at[static_cast<size_t>(n) * Q + q]) continue;
      for (const Transition* tr : out[q]) {
        if (!label_ok(tr->sel, n)) continue;
        switch (tr->dir) {
          case Dir::Last:
            if (tr->to == a.qf) acc[n] = 1;
            break;
          case Dir::Child:
            if (!t.children(n).empty()) at[static_cast<size_t>(t.children(n)[0]) * Q + tr->to] = 1;
            break;
          case Dir::Neighbour:
          case Dir::Sibling: {
            int p = t.parent(n);
            if (p < 0) break;
            const auto& sib = t.children(p);
            size_t i = static_cast<size_t>(t.position(n));  // index of the next sibling
            size_t end = tr->dir == Dir::Neighbour ? std::min(i + 1, sib.size()) : sib.size();
            for (; i < end; ++i) at[static_cast<size_t>(sib[i]) * Q + tr->to] = 1;
            break;
          }
        }
      }
    }
  }
  return acc;
}

bool run_accepts(const CssAutomaton& a, const DocumentTree& t, int n) { return accepting_nodes(a, t)[n]; }

std::vector<std::string> validate_automaton(const CssAutomaton& a) {
  std::vector<std::string> v;
  // 1: the graph without self-loops is acyclic.
  std::vector<std::vector<int>> g(a.num_states);
  for (const auto& t : a.trans)
    if (t.from != t.to) g[t.from].push_back(t.to);
  std::vector<int> color(a.num_states, 0);
  bool cyclic = false;
  std::function<void(int)> dfs = [&](int s) {
    color[s] = 1;
    for (int x : g[s]) {
      if (color[x] == 1) cyclic = true;
      else if (color[x] == 0) dfs(x);
    }
    color[s] = 2;
  };
  for (int s = 0; s < a.num_states; ++s)
    if (!color[s]) dfs(s);
  if (cyclic) v.push_back("condition 1: cycle through distinct states");
  for (const auto& t : a.trans) {
    std::string where = a.names.empty() ? std::to_string(t.from) : a.names[t.from];
    if (t.dir == Dir::Sibling && (t.from != t.to || !is_any(t.sel)))
      v.push_back("condition 2: sibling transition at " + where + " is not an any-labelled loop");
    if (t.dir == Dir::Neighbour && t.from == t.to) v.push_back("condition 3: neighbour loop at " + where);
    if ((t.to == a.qf) != (t.dir == Dir::Last))
      v.push_back("condition 4: last/qf mismatch at " + where);
    if (t.from == a.qf) v.push_back("condition 5: transition leaves qf");
  }
  return v;
}

std::string to_dot(const CssAutomaton& a) {
  std::ostringstream os;
  os << "digraph A {\n  rankdir=LR;\n";
  for (int s = 0; s < a.num_states; ++s) {
    os << "  s" << s << " [label=\"" << (a.names.empty() ? std::to_string(s) : a.names[s]) << "\""
       << (s == a.qf ? ",shape=doublecircle" : "") << "];\n";
  }
  os << "  start [shape=point];\n  start -> s" << a.q0 << ";\n";
  for (const auto& t : a.trans) {
    std::string lab = serialize(t.sel);
    for (auto& c : lab)
      if (c == '"') c = '\'';
    os << "  s" << t.from << " -> s" << t.to << " [label=\"" << dir_name(t.dir) << "," << lab << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cssmin
