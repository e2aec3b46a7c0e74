#include "cssmin/dom.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cssmin {

std::string describe(const NodeLabel& l) {
  std::string out = l.ns.empty() ? l.elem : l.ns + "|" + l.elem;
  for (const auto& [k, v] : l.attrs) {
    out += " ";
    if (!k.first.empty()) out += k.first + "|";
    out += k.second + "=\"" + v + "\"";
  }
  for (int p = 0; p < kNumPseudoClasses; ++p)
    if (l.pcs & (1u << p)) out += std::string(" :") + pseudo_class_name(static_cast<PseudoClass>(p));
  return out;
}

int DocumentTree::owned_label(const NodeLabel& l) {
  // Hand-built trees own their table.
  auto* tab = const_cast<std::vector<NodeLabel>*>(table_.get());
  tab->push_back(l);
  return static_cast<int>(tab->size()) - 1;
}

int DocumentTree::add_root(const NodeLabel& l) { return add_root_id(owned_label(l)); }
int DocumentTree::add_child(int p, const NodeLabel& l) { return add_child_id(p, owned_label(l)); }

int DocumentTree::add_root_id(int id) {
  parent_.assign(1, -1);
  label_of_.assign(1, id);
  pos_.assign(1, 0);
  children_.assign(1, {});
  return 0;
}

int DocumentTree::add_child_id(int p, int id) {
  int n = size();
  parent_.push_back(p);
  label_of_.push_back(id);
  children_.emplace_back();
  children_[p].push_back(n);
  pos_.push_back(static_cast<int>(children_[p].size()));
  return n;
}

int DocumentTree::sibling_count(int n) const {
  return parent_[n] < 0 ? 1 : static_cast<int>(children_[parent_[n]].size());
}

std::string DocumentTree::dump() const {
  std::ostringstream os;
  std::function<void(int, int)> rec = [&](int n, int d) {
    os << std::string(2 * d, ' ') << "<" << describe(label(n)) << ">\n";
    for (int c : children_[n]) rec(c, d + 1);
  };
  if (size()) rec(0, 0);
  return os.str();
}

std::vector<Violation> validate_tree(const DocumentTree& t) {
  std::vector<Violation> out;
  std::map<std::string, int> ids;  // ns + '\0' + value -> node
  int target = -1;
  for (int n = 0; n < t.size(); ++n) {
    const auto& l = t.label(n);
    for (const auto& [k, v] : l.attrs) {
      if (k.second != "id") continue;
      auto [it, fresh] = ids.emplace(k.first + '\0' + v, n);
      if (!fresh) out.push_back({n, "duplicate-id"});
    }
    if (l.has(PseudoClass::Link) && l.has(PseudoClass::Visited)) out.push_back({n, "link-and-visited"});
    if (l.has(PseudoClass::Enabled) && l.has(PseudoClass::Disabled))
      out.push_back({n, "enabled-and-disabled"});
    if (l.has(PseudoClass::Target)) {
      if (target >= 0) out.push_back({n, "multiple-targets"});
      target = n;
    }
    if (l.has(PseudoClass::Root) && n != 0) out.push_back({n, "root-not-at-root"});
    if (l.has(PseudoClass::Empty) && !t.children(n).empty()) out.push_back({n, "empty-with-children"});
  }
  return out;
}

bool attr_op_matches(AttrOp op, const std::string& v, const std::string& val) {
  auto starts = [&](const std::string& p) { return val.compare(0, p.size(), p) == 0 && val.size() >= p.size(); };
  auto ends = [&](const std::string& p) {
    return val.size() >= p.size() && val.compare(val.size() - p.size(), p.size(), p) == 0;
  };
  switch (op) {
    case AttrOp::Equals: return val == v;
    case AttrOp::Includes:
      return val == v || starts(v + " ") || ends(" " + v) || val.find(" " + v + " ") != std::string::npos;
    case AttrOp::DashMatch: return val == v || starts(v + "-");
    case AttrOp::Prefix: return starts(v);
    case AttrOp::Suffix: return ends(v);
    case AttrOp::Substring: return val.find(v) != std::string::npos;
  }
  return false;
}

namespace {

bool type_matches(const TypeSel& t, const std::string& ns, const std::string& elem) {
  switch (t.kind) {
    case TypeSel::Kind::Any: return true;
    case TypeSel::Kind::AnyInNs: return ns == t.ns;
    case TypeSel::Kind::Element: return elem == t.elem;
    case TypeSel::Kind::NsElement: return ns == t.ns && elem == t.elem;
  }
  return false;
}

bool positive_attr(const Condition& c, const NodeLabel& l) {
  auto test = [&](const std::string& val) {
    return c.kind == Condition::Kind::AttrExists || attr_op_matches(c.op, c.value, val);
  };
  if (c.attr_any_ns) {
    for (const auto& [k, v] : l.attrs)
      if (k.second == c.attr && test(v)) return true;
    return false;
  }
  auto it = l.attrs.find({c.attr_ns, c.attr});
  return it != l.attrs.end() && test(it->second);
}

bool nth(long a, long b, long x) {
  if (a == 0) return x == b;
  long d = x - b;
  return d % a == 0 && d / a >= 0;
}

bool same_type(const NodeLabel& x, const NodeLabel& y) { return x.ns == y.ns && x.elem == y.elem; }

}  // namespace

bool local_condition(const Condition& c, const NodeLabel& l) {
  using K = Condition::Kind;
  bool r;
  switch (c.kind) {
    case K::Type: r = type_matches(c.type, l.ns, l.elem); break;
    case K::AttrExists:
    case K::Attr: r = positive_attr(c, l); break;
    case K::Pseudo: r = l.has(c.pc); break;
    case K::Lang: {
      Condition a;
      a.kind = K::Attr;
      a.attr_ns = kLangNamespace;
      a.attr = "lang";
      a.op = AttrOp::DashMatch;
      a.value = c.value;
      r = positive_attr(a, l);
      break;
    }
    default: return true;  // positional, checked elsewhere
  }
  return c.negated ? !r : r;
}

bool local_match(const NodeSelector& s, const NodeLabel& l) {
  if (!type_matches(s.type, l.ns, l.elem)) return false;
  for (const auto& c : s.conds) {
    if (c.kind == Condition::Kind::Pseudo && c.pc == PseudoClass::Root) continue;
    if (!c.is_positional() && !local_condition(c, l)) return false;
  }
  return true;
}

bool positional_condition(const Condition& c, const DocumentTree& t, int n) {
  using K = Condition::Kind;
  bool r;
  if (c.kind == K::Pseudo && c.pc == PseudoClass::Root) {
    r = n == 0;
  } else if (!c.is_positional()) {
    return true;
  } else if (t.parent(n) < 0) {
    r = false;
  } else {
    const auto& sib = t.children(t.parent(n));
    long cnt = static_cast<long>(sib.size());
    long pos = t.position(n);
    long tpos = 0, tcnt = 0;
    const auto& me = t.label(n);
    for (int s : sib) {
      if (!same_type(t.label(s), me)) continue;
      ++tcnt;
      if (t.position(s) <= pos) ++tpos;
    }
    switch (c.kind) {
      case K::NthChild: r = nth(c.a, c.b, pos); break;
      case K::NthLastChild: r = nth(c.a, c.b, cnt - pos + 1); break;
      case K::NthOfType: r = nth(c.a, c.b, tpos); break;
      case K::NthLastOfType: r = nth(c.a, c.b, tcnt - tpos + 1); break;
      case K::OnlyChild: r = cnt == 1; break;
      case K::OnlyOfType: r = tcnt == 1; break;
      case K::FirstChild: r = pos == 1; break;
      case K::LastChild: r = pos == cnt; break;
      case K::FirstOfType: r = tpos == 1; break;
      case K::LastOfType: r = tpos == tcnt; break;
      default: r = true;
    }
  }
  return c.negated ? !r : r;
}

bool node_matches(const NodeSelector& s, const DocumentTree& t, int n) {
  if (!local_match(s, t.label(n))) return false;
  for (const auto& c : s.conds)
    if (!positional_condition(c, t, n)) return false;
  return true;
}

bool LocalMatchCache::get(const NodeSelector& s, int id) {
  auto& v = memo_[&s];
  if (v.empty()) v.assign(table_->size(), -1);
  if (v[id] < 0) v[id] = local_match(s, (*table_)[id]) ? 1 : 0;
  return v[id] == 1;
}

std::vector<char> match_all_normalized(const DocumentTree& t, const Selector& s, LocalMatchCache* cache) {
  const int N = t.size();
  std::vector<char> cur(N), prev(N), reach(N);
  auto node_ok = [&](const NodeSelector& ns, int n) {
    bool loc = cache ? cache->get(ns, t.label_id(n)) : local_match(ns, t.label(n));
    if (!loc) return false;
    for (const auto& c : ns.conds)
      if (!positional_condition(c, t, n)) return false;
    return true;
  };
  for (int n = 0; n < N; ++n) cur[n] = node_ok(s.nodes[0], n);
  for (size_t k = 1; k < s.nodes.size(); ++k) {
    prev.swap(cur);
    // reach[n]: the previous node selector matched a node in the required relation to n.
    switch (s.combs[k - 1]) {
      case Combinator::Descendant:
        // Nodes are created parent-first, so a single forward pass suffices.
        for (int n = 0; n < N; ++n) {
          int p = t.parent(n);
          reach[n] = p >= 0 && (prev[p] || reach[p]);
        }
        break;
      case Combinator::Child:
        for (int n = 0; n < N; ++n) reach[n] = t.parent(n) >= 0 && prev[t.parent(n)];
        break;
      case Combinator::Neighbour:
      case Combinator::Sibling:
        std::fill(reach.begin(), reach.end(), 0);
        for (int n = 0; n < N; ++n) {
          bool seen = false;
          const auto& ch = t.children(n);
          for (size_t i = 0; i < ch.size(); ++i) {
            if (i > 0) {
              if (s.combs[k - 1] == Combinator::Neighbour) reach[ch[i]] = prev[ch[i - 1]];
              else reach[ch[i]] = seen;
            }
            seen = seen || prev[ch[i]];
          }
        }
        break;
    }
    for (int n = 0; n < N; ++n) cur[n] = reach[n] && node_ok(s.nodes[k], n);
  }
  return cur;
}

bool matches(const DocumentTree& t, int n, const Selector& s) {
  return match_all_normalized(t, normalize(s))[n];
}

bool ComputedStyle::same_values(const ComputedStyle& o) const {
  if (props.size() != o.props.size()) return false;
  auto a = props.begin();
  auto b = o.props.begin();
  for (; a != props.end(); ++a, ++b)
    if (a->first != b->first || a->second.first != b->second.first) return false;
  return true;
}

CascadeEvaluator::CascadeEvaluator(const Stylesheet& ss) {
  int rule = 0;
  for (const auto& it : ss.items) {
    if (it.passthrough) continue;
    ++rule;
    for (const auto& s : it.rule.selectors) {
      int si = static_cast<int>(sels_.size());
      sels_.push_back(normalize(s));
      by_sel_.emplace_back();
      for (size_t k = 0; k < it.rule.decls.size(); ++k) {
        const auto& d = it.rule.decls[k];
        by_sel_[si].push_back(
            {si, rule, static_cast<int>(k) + 1, specificity(s, d.important), d.text(), &longhand_leaves(d.name)});
      }
    }
  }
}

std::vector<ComputedStyle> CascadeEvaluator::styles(const DocumentTree& t, PseudoElement pe,
                                                    LocalMatchCache* cache) const {
  std::vector<ComputedStyle> out(t.size());
  for (size_t si = 0; si < sels_.size(); ++si) {
    if (sels_[si].pe != pe) continue;
    auto m = match_all_normalized(t, sels_[si], cache);
    for (int n = 0; n < t.size(); ++n) {
      if (!m[n]) continue;
      for (const auto& e : by_sel_[si]) {
        CascadeKey key{e.spec, e.rule, e.pos};
        for (const auto& leaf : *e.leaves) {
          auto& slot = out[n].props[leaf];
          if (slot.first.empty() || slot.second < key) slot = {e.text, key};
        }
      }
    }
  }
  // "all" (leaf "*") competes for every other leaf present on the node.
  for (auto& st : out) {
    auto all = st.props.find("*");
    if (all == st.props.end()) continue;
    for (auto& [leaf, slot] : st.props)
      if (leaf != "*" && slot.second < all->second.second) slot = all->second;
  }
  return out;
}

ComputedStyle compute_cascade(const DocumentTree& t, int n, const Stylesheet& ss, PseudoElement pe) {
  return CascadeEvaluator(ss).styles(t, pe)[n];
}

std::vector<std::vector<int>> enumerate_shapes(int max_depth, int max_branch) {
  // Subtrees of depth <= d as preorder parent arrays (root parent -1).
  std::vector<std::vector<int>> level = {{-1}};
  for (int d = 2; d <= max_depth; ++d) {
    std::vector<std::vector<int>> next;
    std::vector<size_t> pick;
    for (int k = 0; k <= max_branch; ++k) {
      pick.assign(k, 0);
      while (true) {
        std::vector<int> shape = {-1};
        for (int i = 0; i < k; ++i) {
          int off = static_cast<int>(shape.size());
          const auto& sub = level[pick[i]];
          for (size_t j = 0; j < sub.size(); ++j) shape.push_back(sub[j] < 0 ? 0 : sub[j] + off);
        }
        next.push_back(std::move(shape));
        int i = k - 1;
        while (i >= 0 && ++pick[i] == level.size()) pick[i--] = 0;
        if (i < 0) break;
      }
    }
    level = std::move(next);
  }
  return level;
}

long enumerate_trees(const TreeBounds& b, const std::function<bool(const DocumentTree&)>& visit) {
  if (b.labels.empty() || b.max_depth < 1) return 0;
  auto table = std::make_shared<const std::vector<NodeLabel>>(b.labels);
  const int L = static_cast<int>(b.labels.size());
  struct Info {
    std::vector<std::string> ids;
    bool target, empty, bad;
  };
  std::vector<Info> info(L);
  for (int i = 0; i < L; ++i) {
    const auto& l = b.labels[i];
    for (const auto& [k, v] : l.attrs)
      if (k.second == "id") info[i].ids.push_back(k.first + '\0' + v);
    info[i].target = l.has(PseudoClass::Target);
    info[i].empty = l.has(PseudoClass::Empty);
    info[i].bad = (l.has(PseudoClass::Link) && l.has(PseudoClass::Visited)) ||
                  (l.has(PseudoClass::Enabled) && l.has(PseudoClass::Disabled));
  }
  long visited = 0;
  std::vector<std::string> seen_ids;
  for (const auto& shape : enumerate_shapes(b.max_depth, b.max_branch)) {
    const int N = static_cast<int>(shape.size());
    DocumentTree t(table);
    t.add_root_id(0);
    for (int n = 1; n < N; ++n) t.add_child_id(shape[n], 0);
    std::vector<int> lab(N, 0);
    while (true) {
      bool ok = true;
      int targets = 0;
      seen_ids.clear();
      for (int n = 0; n < N && ok; ++n) {
        const auto& in = info[lab[n]];
        if (in.bad || (in.empty && !t.children(n).empty()) ||
            b.labels[lab[n]].has(PseudoClass::Root) != (n == 0 && b.labels[lab[n]].has(PseudoClass::Root))) {
          ok = false;
          break;
        }
        targets += in.target;
        for (const auto& id : in.ids) {
          if (std::find(seen_ids.begin(), seen_ids.end(), id) != seen_ids.end()) ok = false;
          seen_ids.push_back(id);
        }
      }
      if (ok && targets <= 1) {
        for (int n = 0; n < N; ++n) t.set_label_id(n, lab[n]);
        ++visited;
        if (!visit(t)) return visited;
      }
      int i = N - 1;
      while (i >= 0 && ++lab[i] == L) lab[i--] = 0;
      if (i < 0) break;
    }
  }
  return visited;
}

std::vector<NodeLabel> cartesian_labels(
    const std::vector<std::pair<std::string, std::string>>& types,
    const std::vector<std::pair<std::pair<std::string, std::string>, std::vector<std::string>>>& attrs,
    const std::vector<PseudoClass>& pcs) {
  std::vector<NodeLabel> out;
  for (const auto& [ns, e] : types) {
    NodeLabel base;
    base.ns = ns;
    base.elem = e;
    out.push_back(base);
  }
  for (const auto& [key, values] : attrs) {
    std::vector<NodeLabel> next;
    for (const auto& l : out) {
      next.push_back(l);
      for (const auto& v : values) {
        NodeLabel x = l;
        x.attrs[key] = v;
        next.push_back(x);
      }
    }
    out.swap(next);
  }
  for (PseudoClass pc : pcs) {
    std::vector<NodeLabel> next;
    for (const auto& l : out) {
      next.push_back(l);
      NodeLabel x = l;
      x.set(pc);
      next.push_back(x);
    }
    out.swap(next);
  }
  return out;
}

namespace {

// Shortest string (over concatenations of a few pieces) meeting every positive and no
// negative constraint.
std::optional<std::string> find_value(const std::vector<const Condition*>& pos,
                                      const std::vector<const Condition*>& neg) {
  std::vector<std::string> pieces;
  for (auto* c : pos)
    if (c->kind == Condition::Kind::Attr) pieces.push_back(c->value);
  for (auto* c : neg)
    if (c->kind == Condition::Kind::Attr) pieces.push_back(c->value);
  for (const char* x : {" ", "-", "z"}) pieces.push_back(x);
  std::sort(pieces.begin(), pieces.end());
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  auto ok = [&](const std::string& v) {
    for (auto* c : pos)
      if (c->kind == Condition::Kind::Attr && !attr_op_matches(c->op, c->value, v)) return false;
    for (auto* c : neg)
      if (c->kind == Condition::Kind::Attr && attr_op_matches(c->op, c->value, v)) return false;
    return true;
  };
  std::vector<std::string> cand = {""};
  std::vector<std::string> frontier = {""};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<std::string> next;
    for (const auto& f : frontier)
      for (const auto& p : pieces) next.push_back(f + p);
    cand.insert(cand.end(), next.begin(), next.end());
    frontier.swap(next);
  }
  std::stable_sort(cand.begin(), cand.end(),
                   [](const std::string& x, const std::string& y) { return x.size() < y.size(); });
  for (const auto& v : cand)
    if (ok(v)) return v;
  return std::nullopt;
}

Condition positive_of(const Condition& c) {
  Condition p = c;
  p.negated = false;
  return p;
}

}  // namespace

std::optional<NodeLabel> synthesize_label(const std::vector<const NodeSelector*>& reqs, const Condition* force) {
  using K = Condition::Kind;
  std::vector<TypeSel> pos_types, neg_types;
  std::vector<Condition> conds;
  for (auto* r : reqs) {
    pos_types.push_back(r->type);
    for (const auto& c : r->conds) conds.push_back(c);
  }
  if (force) conds.push_back(positive_of(*force));
  std::vector<const Condition*> pos_attr, neg_attr;
  uint16_t pos_pc = 0, neg_pc = 0;
  for (const auto& c : conds) {
    if (c.is_positional()) continue;
    if (c.kind == K::Type) {
      (c.negated ? neg_types : pos_types).push_back(c.type);
    } else if (c.kind == K::Pseudo) {
      if (c.pc == PseudoClass::Root) continue;
      (c.negated ? neg_pc : pos_pc) |= static_cast<uint16_t>(1u << static_cast<int>(c.pc));
    } else if (c.kind == K::Lang) {
      return std::nullopt;  // callers pass normalized selectors
    } else {
      (c.negated ? neg_attr : pos_attr).push_back(&c);
    }
  }
  NodeLabel l;
  l.pcs = pos_pc;
  if (pos_pc & neg_pc) return std::nullopt;
  if ((l.has(PseudoClass::Link) && l.has(PseudoClass::Visited)) ||
      (l.has(PseudoClass::Enabled) && l.has(PseudoClass::Disabled)))
    return std::nullopt;

  std::optional<std::string> rns, relem;
  for (const auto& t : pos_types) {
    if (t.kind == TypeSel::Kind::AnyInNs || t.kind == TypeSel::Kind::NsElement) {
      if (rns && *rns != t.ns) return std::nullopt;
      rns = t.ns;
    }
    if (t.kind == TypeSel::Kind::Element || t.kind == TypeSel::Kind::NsElement) {
      if (relem && *relem != t.elem) return std::nullopt;
      relem = t.elem;
    }
  }
  std::vector<std::string> ns_c = rns ? std::vector<std::string>{*rns} : std::vector<std::string>{"", "zns"};
  std::vector<std::string> el_c = relem ? std::vector<std::string>{*relem} : std::vector<std::string>{"zz", "zy"};
  bool found = false;
  for (const auto& ns : ns_c) {
    for (const auto& e : el_c) {
      bool ok = true;
      for (const auto& t : neg_types) ok = ok && !type_matches(t, ns, e);
      if (ok && !found) {
        l.ns = ns;
        l.elem = e;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;

  // Attribute keys: explicit ones first, then any-namespace conditions placed on an
  // existing key with that name or on a fresh namespace.
  std::map<std::pair<std::string, std::string>, std::vector<const Condition*>> groups;
  std::vector<const Condition*> any_pos;
  for (auto* c : pos_attr) {
    if (c->attr_any_ns) any_pos.push_back(c);
    else groups[{c->attr_ns, c->attr}].push_back(c);
  }
  std::function<std::optional<NodeLabel>(size_t, decltype(groups)&)> place =
      [&](size_t k, decltype(groups)& g) -> std::optional<NodeLabel> {
    if (k == any_pos.size()) {
      NodeLabel out = l;
      for (const auto& [key, ps] : g) {
        std::vector<const Condition*> ns;
        for (auto* c : neg_attr) {
          if (c->attr != key.second) continue;
          if (!c->attr_any_ns && c->attr_ns != key.first) continue;
          if (c->kind == K::AttrExists) return std::nullopt;
          ns.push_back(c);
        }
        auto v = find_value(ps, ns);
        if (!v) return std::nullopt;
        out.attrs[key] = *v;
      }
      return out;
    }
    const Condition* c = any_pos[k];
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& [key, ps] : g)
      if (key.second == c->attr) keys.push_back(key);
    keys.push_back({"zns" + std::to_string(k), c->attr});
    for (const auto& key : keys) {
      g[key].push_back(c);
      auto r = place(k + 1, g);
      g[key].pop_back();
      if (g[key].empty()) g.erase(key);
      if (r) return r;
    }
    return std::nullopt;
  };
  return place(0, groups);
}

std::vector<NodeLabel> tight_labels(const std::vector<Selector>& raw, size_t cap) {
  std::vector<Selector> sels;
  for (const auto& s : raw) sels.push_back(normalize(s));
  std::vector<NodeLabel> out;
  auto add = [&](std::optional<NodeLabel> l) {
    if (l && std::find(out.begin(), out.end(), *l) == out.end()) out.push_back(*l);
  };
  if (sels.size() > 1) {
    std::vector<const NodeSelector*> subj;
    for (const auto& s : sels) subj.push_back(&s.nodes.back());
    add(synthesize_label(subj));
  }
  for (const auto& s : sels) add(synthesize_label({&s.nodes.back()}));
  add(synthesize_label({}));
  for (const auto& s : sels)
    for (size_t k = 0; k + 1 < s.nodes.size(); ++k) add(synthesize_label({&s.nodes[k]}));
  for (const auto& s : sels) {
    for (const auto& n : s.nodes) {
      for (size_t c = 0; c < n.conds.size(); ++c) {
        const auto& cond = n.conds[c];
        if (!cond.negated || cond.is_positional()) continue;
        if (cond.kind == Condition::Kind::Pseudo && cond.pc == PseudoClass::Root) continue;
        NodeSelector rest = n;
        rest.conds.erase(rest.conds.begin() + static_cast<long>(c));
        add(synthesize_label({&rest}, &cond));
      }
    }
  }
  if (out.size() > cap) out.resize(cap);
  return out;
}

std::optional<Witness> oracle_intersection(const Selector& s1, const Selector& s2, const TreeBounds& b) {
  Selector n1 = normalize(s1), n2 = normalize(s2);
  if (n1.pe != n2.pe) return std::nullopt;
  std::optional<Witness> found;
  LocalMatchCache cache(&b.labels);
  enumerate_trees(b, [&](const DocumentTree& t) {
    auto m1 = match_all_normalized(t, n1, &cache);
    auto m2 = match_all_normalized(t, n2, &cache);
    for (int n = 0; n < t.size(); ++n) {
      if (m1[n] && m2[n]) {
        found = Witness{t, n};
        return false;
      }
    }
    return true;
  });
  return found;
}

}  // namespace cssmin
