#include "cssmin/emptiness.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace cssmin {

using namespace lia;

namespace {

bool type_fits(const TypeSel& t, const QualType& q) {
  switch (t.kind) {
    case TypeSel::Kind::Any: return true;
    case TypeSel::Kind::AnyInNs: return q.first == t.ns;
    case TypeSel::Kind::Element: return q.second == t.elem;
    case TypeSel::Kind::NsElement: return q.first == t.ns && q.second == t.elem;
  }
  return false;
}

Term V(const std::string& s) { return Term::var(s); }
Term C(long v) { return Term::constant(v); }
std::string I(long v) { return std::to_string(v); }

}  // namespace

TypeSummary compute_type_summary(const CssAutomaton& a) {
  TypeSummary ts;
  std::set<QualType> mentioned;
  std::set<std::string> nss, els;
  auto note = [&](const TypeSel& t) {
    if (t.kind == TypeSel::Kind::AnyInNs || t.kind == TypeSel::Kind::NsElement) nss.insert(t.ns);
    if (t.kind == TypeSel::Kind::Element || t.kind == TypeSel::Kind::NsElement) els.insert(t.elem);
    if (t.kind == TypeSel::Kind::NsElement) mentioned.insert({t.ns, t.elem});
  };
  for (const auto& tr : a.trans) {
    note(tr.sel.type);
    for (const auto& c : tr.sel.conds)
      if (c.kind == Condition::Kind::Type) note(c.type);
  }
  ts.types.assign(mentioned.begin(), mentioned.end());
  int f = 0;
  auto fresh_ns = [&] {
    std::string n = "~n" + I(f++);
    nss.insert(n);
    return n;
  };
  auto fresh_el = [&] {
    std::string e = "~e" + I(f++);
    els.insert(e);
    return e;
  };
  for (const auto& tr : a.trans) {
    if (is_any(tr.sel)) {
      ts.fresh_of.push_back(-1);
      continue;
    }
    const auto& t = tr.sel.type;
    switch (t.kind) {
      case TypeSel::Kind::NsElement: {
        auto it = std::find(ts.types.begin(), ts.types.end(), QualType{t.ns, t.elem});
        ts.fresh_of.push_back(static_cast<int>(it - ts.types.begin()));
        continue;
      }
      case TypeSel::Kind::AnyInNs: ts.types.push_back({t.ns, fresh_el()}); break;
      case TypeSel::Kind::Element: ts.types.push_back({fresh_ns(), t.elem}); break;
      case TypeSel::Kind::Any: {
        auto n = fresh_ns();
        ts.types.push_back({n, fresh_el()});
        break;
      }
    }
    ts.fresh_of.push_back(static_cast<int>(ts.types.size()) - 1);
  }
  auto n = fresh_ns();
  ts.types.push_back({n, fresh_el()});
  ts.null_type = static_cast<int>(ts.types.size()) - 1;
  ts.namespaces.assign(nss.begin(), nss.end());
  ts.elements.assign(els.begin(), els.end());
  return ts;
}

std::vector<int> allowed_types(const NodeSelector& s, const TypeSummary& ts) {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(ts.types.size()); ++k) {
    bool ok = type_fits(s.type, ts.types[k]);
    for (const auto& c : s.conds)
      if (ok && c.kind == Condition::Kind::Type && c.negated && type_fits(c.type, ts.types[k])) ok = false;
    if (ok) out.push_back(k);
  }
  return out;
}

std::optional<std::vector<AttrGroup>> attr_groups(const NodeSelector& s, const std::string& fresh_tag) {
  std::map<std::string, std::vector<AttrConstraint>> any_neg;
  std::set<std::string> any_neg_exists;
  for (const auto& c : s.conds) {
    if (!c.is_attribute() || !c.attr_any_ns || !c.negated) continue;
    if (c.kind == Condition::Kind::AttrExists) any_neg_exists.insert(c.attr);
    else any_neg[c.attr].push_back(to_constraint(c));
  }
  std::map<std::pair<std::string, std::string>, AttrGroup> expl;
  std::vector<AttrGroup> out;
  int k = 0;
  for (const auto& c : s.conds) {
    if (!c.is_attribute()) continue;
    if (c.attr_any_ns) {
      if (c.negated) continue;
      if (any_neg_exists.count(c.attr)) return std::nullopt;
      AttrGroup g;
      g.ns = fresh_tag + "#" + I(k++);
      g.attr = c.attr;
      g.fresh = true;
      g.must_define = true;
      g.set.push_back(to_constraint(c));
      auto it = any_neg.find(c.attr);
      if (it != any_neg.end()) g.set.insert(g.set.end(), it->second.begin(), it->second.end());
      out.push_back(std::move(g));
      continue;
    }
    auto& g = expl[{c.attr_ns, c.attr}];
    g.ns = c.attr_ns;
    g.attr = c.attr;
    g.set.push_back(to_constraint(c));
    if (!c.negated) g.must_define = true;
  }
  for (auto& [key, g] : expl) {
    auto it = any_neg.find(g.attr);
    if (it != any_neg.end()) g.set.insert(g.set.end(), it->second.begin(), it->second.end());
    if (any_neg_exists.count(g.attr)) {
      if (g.must_define) return std::nullopt;
      AttrConstraint undefined;
      undefined.exists_only = true;
      undefined.negated = true;
      g.set.push_back(undefined);
    }
    if (g.must_define) {
      for (const auto& a : g.set)
        if (a.exists_only && a.negated) return std::nullopt;
    }
    out.push_back(std::move(g));
  }
  return out;
}

bool locally_consistent(const NodeSelector& s, const TypeSummary& ts) {
  if (allowed_types(s, ts).empty()) return false;
  uint32_t pos = 0, neg = 0;
  for (const auto& c : s.conds) {
    if (c.kind != Condition::Kind::Pseudo) continue;
    (c.negated ? neg : pos) |= 1u << static_cast<int>(c.pc);
  }
  auto bit = [](PseudoClass p) { return 1u << static_cast<int>(p); };
  if (pos & neg) return false;
  if ((pos & bit(PseudoClass::Link)) && (pos & bit(PseudoClass::Visited))) return false;
  if ((pos & bit(PseudoClass::Enabled)) && (pos & bit(PseudoClass::Disabled))) return false;
  auto groups = attr_groups(s, "~");
  if (!groups) return false;
  for (const auto& g : *groups)
    if (g.must_define && !solve_attr_set(g.set)) return false;
  return true;
}

namespace {

bool has_pc(const NodeSelector& s, PseudoClass pc, bool negated) {
  for (const auto& c : s.conds)
    if (c.kind == Condition::Kind::Pseudo && c.pc == pc && c.negated == negated) return true;
  return false;
}

bool has_positional(const NodeSelector& s, bool positive_only) {
  for (const auto& c : s.conds)
    if (c.is_positional() && (!positive_only || !c.negated)) return true;
  return false;
}

std::string fresh_tag(int t) { return "~t" + I(t); }

// Attribute-value formulas over character slots w[0..b-1] (0 is the null character).
struct WordEnc {
  const std::vector<Term>& w;

  F chars_at(size_t at, const std::string& v) const {
    if (at + v.size() > w.size()) return bottom();
    std::vector<F> xs;
    for (size_t k = 0; k < v.size(); ++k) xs.push_back(eq(w[at + k], C(static_cast<unsigned char>(v[k]))));
    return land(std::move(xs));
  }
  F null_at(size_t at) const { return at < w.size() ? eq(w[at], C(0)) : bottom(); }
  F equals(const std::string& v) const { return land(chars_at(0, v), null_at(v.size())); }
  F prefix(const std::string& v) const {
    // the last slot is always null, so a prefix must leave room for it
    return v.size() < w.size() ? chars_at(0, v) : bottom();
  }
  F suffix(const std::string& v) const {
    if (v.empty()) return top();
    std::vector<F> xs;
    for (size_t len = v.size(); len < w.size(); ++len) xs.push_back(land(chars_at(len - v.size(), v), null_at(len)));
    return lor(std::move(xs));
  }
  F substring(const std::string& v) const {
    if (v.empty()) return top();
    std::vector<F> xs;
    for (size_t s = 0; s + v.size() < w.size(); ++s) xs.push_back(chars_at(s, v));
    return lor(std::move(xs));
  }
  F positive(const AttrConstraint& a) const {
    if (a.exists_only) return top();
    switch (a.op) {
      case AttrOp::Equals: return equals(a.value);
      case AttrOp::Includes:
        return lor({equals(a.value), prefix(a.value + " "), suffix(" " + a.value), substring(" " + a.value + " ")});
      case AttrOp::DashMatch: return lor(equals(a.value), prefix(a.value + "-"));
      case AttrOp::Prefix: return prefix(a.value);
      case AttrOp::Suffix: return suffix(a.value);
      case AttrOp::Substring: return substring(a.value);
    }
    return bottom();
  }
  F set(const std::vector<AttrConstraint>& s) const {
    std::vector<F> xs;
    for (const auto& a : s) xs.push_back(a.negated ? lnot(positive(a)) : positive(a));
    return land(std::move(xs));
  }
};

class FullEncoder {
 public:
  FullEncoder(const CssAutomaton& a, const TypeSummary& ts, long b, FullEncoding& out)
      : a_(a), ts_(ts), b_(b), P_(out.pool), n_(static_cast<int>(a.trans.size())), K_(static_cast<int>(ts.types.size())) {
    for (int t = 0; t < n_; ++t) groups_.push_back(attr_groups(a.trans[t].sel, fresh_tag(t)));
  }

  F build() {
    std::vector<F> all;
    declare_core(all);
    all.push_back(eq(V(q(0)), C(a_.q0)));
    all.push_back(eq(V(q(n_)), C(a_.qf)));
    for (int i = 0; i < n_; ++i) {
      std::vector<F> alts{eq(V(q(i)), C(a_.qf))};
      for (int t = 0; t < n_; ++t) {
        const auto& tr = a_.trans[t];
        if (i == 0 && (tr.dir == Dir::Neighbour || tr.dir == Dir::Sibling)) continue;
        alts.push_back(land({eq(V(q(i)), C(tr.from)), eq(V(q(i + 1)), C(tr.to)),
                             eq(V(dir(i)), C(static_cast<long>(tr.dir))), node(t, i)}));
      }
      all.push_back(lor(std::move(alts)));
      bookkeeping(i, all);
    }
    consistent(all);
    for (auto& d : domains_) all.push_back(d);
    return land(std::move(all));
  }

 private:
  const CssAutomaton& a_;
  const TypeSummary& ts_;
  long b_;
  VarPool& P_;
  int n_, K_;
  std::vector<std::optional<std::vector<AttrGroup>>> groups_;
  std::map<std::pair<std::string, std::string>, int> keys_;
  std::map<std::pair<int, int>, std::vector<Term>> words_;  // (key, position) -> slots
  std::vector<F> domains_;

  static std::string q(int i) { return "q!" + I(i); }
  static std::string ty(int i) { return "t!" + I(i); }
  static std::string dir(int i) { return "D!" + I(i); }
  static std::string x(int i) { return "x!" + I(i); }
  static std::string y(int i) { return "y!" + I(i); }
  static std::string xt(int i, int k) { return "xt!" + I(i) + "!" + I(k); }
  static std::string yt(int i, int k) { return "yt!" + I(i) + "!" + I(k); }
  static std::string dl(int i, int k) { return "dl!" + I(i) + "!" + I(k); }
  static std::string pc(int i, PseudoClass p) { return std::string("p!") + I(i) + "!" + pseudo_class_name(p); }
  static std::string def(int key, int i) { return "def!" + I(key) + "!" + I(i); }

  void declare_core(std::vector<F>& all) {
    for (int i = 0; i <= n_; ++i) {
      P_.declare(q(i), Sort::Int);
      P_.declare(ty(i), Sort::Int);
      P_.declare(x(i), Sort::Int);
      P_.declare(y(i), Sort::Int);
      all.push_back(land(ge(V(q(i)), C(0)), le(V(q(i)), C(a_.num_states - 1))));
      all.push_back(land(ge(V(ty(i)), C(0)), le(V(ty(i)), C(K_ - 1))));
      for (int p = 0; p < kNumPseudoClasses; ++p)
        if (static_cast<PseudoClass>(p) != PseudoClass::Root) P_.declare(pc(i, static_cast<PseudoClass>(p)), Sort::Bool);
      for (int k = 0; k < K_; ++k) {
        P_.declare(xt(i, k), Sort::Int);
        P_.declare(yt(i, k), Sort::Int);
        if (i >= 1) {
          all.push_back(ge(V(xt(i, k)), C(0)));
          all.push_back(ge(V(yt(i, k)), C(0)));
        }
      }
      if (i < n_) {
        P_.declare(dir(i), Sort::Int);
        all.push_back(land(ge(V(dir(i)), C(0)), le(V(dir(i)), C(3))));
        for (int k = 0; k < K_; ++k) {
          P_.declare(dl(i, k), Sort::Int);
          all.push_back(ge(V(dl(i, k)), C(0)));
        }
      }
    }
  }

  F is_type(int i, int k) { return eq(V(ty(i)), C(k)); }

  void bookkeeping(int i, std::vector<F>& all) {
    std::vector<F> child{lnot(bvar(pc(i, PseudoClass::Empty))), eq(V(x(i + 1)), C(1))};
    for (int k = 0; k < K_; ++k) child.push_back(eq(V(xt(i + 1, k)), C(0)));
    all.push_back(implies(eq(V(dir(i)), C(static_cast<long>(Dir::Child))), land(std::move(child))));
    for (Dir d : {Dir::Neighbour, Dir::Sibling}) {
      std::vector<F> xs;
      for (int k = 0; k < K_; ++k) {
        Term shift = d == Dir::Sibling ? V(dl(i, k)) : C(0);
        xs.push_back(implies(is_type(i, k), eq(V(xt(i + 1, k)), V(xt(i, k)) + shift + 1)));
        xs.push_back(implies(lnot(is_type(i, k)), eq(V(xt(i + 1, k)), V(xt(i, k)) + shift)));
        xs.push_back(implies(is_type(i + 1, k), eq(V(yt(i + 1, k)), V(yt(i, k)) - shift - 1)));
        xs.push_back(implies(lnot(is_type(i + 1, k)), eq(V(yt(i + 1, k)), V(yt(i, k)) - shift)));
      }
      all.push_back(implies(eq(V(dir(i)), C(static_cast<long>(d))), land(std::move(xs))));
    }
  }

  int key_id(const AttrGroup& g) {
    auto [it, fresh] = keys_.emplace(std::make_pair(g.ns, g.attr), static_cast<int>(keys_.size()));
    return it->second;
  }

  const std::vector<Term>& word(int key, int i) {
    auto it = words_.find({key, i});
    if (it != words_.end()) return it->second;
    P_.declare(def(key, i), Sort::Bool);
    std::vector<Term> w;
    for (long j = 0; j < b_; ++j) {
      std::string name = "w!" + I(key) + "!" + I(i) + "!" + I(j);
      P_.declare(name, Sort::Int);
      w.push_back(V(name));
      domains_.push_back(lor(eq(w.back(), C(0)), land(ge(w.back(), C(1)), le(w.back(), C(255)))));
      if (j > 0) domains_.push_back(implies(eq(w[j - 1], C(0)), eq(w[j], C(0))));
    }
    domains_.push_back(eq(w.back(), C(0)));
    return words_.emplace(std::make_pair(key, i), std::move(w)).first->second;
  }

  F positional(const Condition& c, int i, const std::vector<int>& types) {
    using K = Condition::Kind;
    if (i == 0) return c.negated ? top() : bottom();
    auto nth = [&](const Term& t) { return c.negated ? nomatch(t, c.a, c.b, P_) : nth_match(t, c.a, c.b, P_); };
    switch (c.kind) {
      case K::NthChild: return nth(V(x(i)));
      case K::NthLastChild: return nth(V(y(i)));
      case K::OnlyChild: {
        F f = land(eq(V(x(i)), C(1)), eq(V(y(i)), C(1)));
        return c.negated ? lnot(f) : f;
      }
      case K::NthOfType:
      case K::NthLastOfType:
      case K::OnlyOfType: {
        std::vector<F> alts;
        for (int k : types) {
          F f;
          if (c.kind == K::NthOfType) f = nth(V(xt(i, k)) + 1);
          else if (c.kind == K::NthLastOfType) f = nth(V(yt(i, k)) + 1);
          else {
            f = land(eq(V(xt(i, k)), C(0)), eq(V(yt(i, k)), C(0)));
            if (c.negated) f = lnot(f);
          }
          alts.push_back(land(is_type(i, k), f));
        }
        return lor(std::move(alts));
      }
      default: return top();
    }
  }

  F node(int t, int i) {
    const auto& s = a_.trans[t].sel;
    std::vector<F> xs;
    auto types = allowed_types(s, ts_);
    std::vector<F> tys;
    for (int k : types) tys.push_back(is_type(i, k));
    xs.push_back(lor(std::move(tys)));
    for (const auto& c : s.conds) {
      if (c.kind == Condition::Kind::Pseudo) {
        F f = c.pc == PseudoClass::Root ? (i == 0 ? top() : bottom()) : bvar(pc(i, c.pc));
        xs.push_back(c.negated ? lnot(f) : f);
      } else if (c.is_positional()) {
        xs.push_back(positional(c, i, types));
      }
    }
    if (!groups_[t]) return bottom();
    for (const auto& g : *groups_[t]) {
      int key = key_id(g);
      const auto& w = word(key, i);
      F body = WordEnc{w}.set(g.set);
      F d = bvar(def(key, i));
      xs.push_back(g.must_define ? land(d, body) : implies(d, body));
    }
    return land(std::move(xs));
  }

  void consistent(std::vector<F>& all) {
    for (int i = 1; i <= n_; ++i) {
      Term sx = C(1), sy = C(1);
      for (int k = 0; k < K_; ++k) {
        sx = sx + V(xt(i, k));
        sy = sy + V(yt(i, k));
      }
      all.push_back(eq(V(x(i)), sx));
      all.push_back(eq(V(y(i)), sy));
    }
    // ids are unique per namespace, the root included
    for (const auto& [key, id] : keys_) {
      if (key.second != "id" || key.first.rfind("~t", 0) == 0) continue;
      for (int i = 0; i <= n_; ++i) {
        for (int j = i + 1; j <= n_; ++j) {
          auto wi = words_.find({id, i}), wj = words_.find({id, j});
          if (wi == words_.end() || wj == words_.end()) continue;
          std::vector<F> diff;
          for (long s = 0; s < b_; ++s) diff.push_back(ne(wi->second[s], wj->second[s]));
          all.push_back(implies(land(bvar(def(id, i)), bvar(def(id, j))), lor(std::move(diff))));
        }
      }
    }
    for (int i = 0; i <= n_; ++i) {
      all.push_back(lnot(land(bvar(pc(i, PseudoClass::Link)), bvar(pc(i, PseudoClass::Visited)))));
      all.push_back(lnot(land(bvar(pc(i, PseudoClass::Enabled)), bvar(pc(i, PseudoClass::Disabled)))));
      for (int j = i + 1; j <= n_; ++j)
        all.push_back(lnot(land(bvar(pc(i, PseudoClass::Target)), bvar(pc(j, PseudoClass::Target)))));
    }
  }
};

}  // namespace

long effective_attr_bound(const CssAutomaton& a, const TypeSummary& ts) {
  (void)ts;
  const size_t positions = a.trans.size() + 1;
  std::vector<std::vector<AttrConstraint>> all_sets;
  std::vector<std::pair<std::vector<AttrConstraint>, size_t>> needed;
  for (size_t t = 0; t < a.trans.size(); ++t) {
    auto gs = attr_groups(a.trans[t].sel, fresh_tag(static_cast<int>(t)));
    if (!gs) continue;
    for (const auto& g : *gs) {
      all_sets.push_back(g.set);
      if (g.must_define) needed.emplace_back(g.set, g.attr == "id" && !g.fresh ? positions : 1);
    }
  }
  if (needed.empty()) return 1;
  AttrBound th = compute_attr_bound(all_sets);
  long b = 1;
  for (const auto& [set, k] : needed) {
    ConstraintWordAutomaton w(set);
    for (const auto& s : w.solutions(k, static_cast<size_t>(th.word_len) + 1))
      b = std::max<long>(b, static_cast<long>(s.size()) + 1);
  }
  return b;
}

FullEncoding encode_nonemptiness(const CssAutomaton& a, const TypeSummary& ts, long attr_len) {
  FullEncoding fe;
  fe.steps = static_cast<int>(a.trans.size());
  fe.attr_len = attr_len;
  std::vector<std::vector<AttrConstraint>> sets;
  for (size_t t = 0; t < a.trans.size(); ++t) {
    auto gs = attr_groups(a.trans[t].sel, fresh_tag(static_cast<int>(t)));
    if (gs)
      for (const auto& g : *gs) sets.push_back(g.set);
  }
  fe.theoretical = compute_attr_bound(sets);
  FullEncoder enc(a, ts, attr_len, fe);
  fe.formula = enc.build();
  return fe;
}

FullEncoding encode_nonemptiness(const CssAutomaton& a) {
  auto ts = compute_type_summary(a);
  return encode_nonemptiness(a, ts, effective_attr_bound(a, ts));
}

const char* emptiness_name(Emptiness e) {
  switch (e) {
    case Emptiness::Empty: return "empty";
    case Emptiness::NonEmpty: return "non-empty";
    case Emptiness::Unknown: return "unknown";
  }
  return "?";
}

namespace {

bool trivially_empty(const CssAutomaton& a) {
  for (const auto& t : a.trans)
    if (t.dir == Dir::Last && t.to == a.qf) return false;
  return true;
}

EmptinessResult from_answer(const SmtAnswer& ans) {
  EmptinessResult r;
  if (ans.result == SatResult::Sat) r.verdict = Emptiness::NonEmpty;
  else if (ans.result == SatResult::Unsat) r.verdict = Emptiness::Empty;
  else r.detail = ans.error;
  return r;
}

}  // namespace

EmptinessResult check_nonempty_full(const CssAutomaton& a, const EmptinessConfig& cfg) {
  if (trivially_empty(a)) return {Emptiness::Empty, ""};
  auto fe = encode_nonemptiness(a);
  return from_answer(solve_smt(emit_smtlib(fe.formula, fe.pool), cfg.smt));
}

namespace {

// Backwards search from the final state.  An item describes a suffix of a run: the
// records of the current sibling level (leftmost first) and every record seen so far.
class BackwardSearch {
 public:
  BackwardSearch(const CssAutomaton& a, const EmptinessConfig& cfg)
      : a_(a), cfg_(cfg), ts_(compute_type_summary(a)), into_(a.num_states) {
    const int n = static_cast<int>(a.trans.size());
    for (int t = 0; t < n; ++t) {
      const auto& s = a.trans[t].sel;
      Info in;
      in.ok = locally_consistent(s, ts_);
      in.root = has_pc(s, PseudoClass::Root, false);
      in.not_root = has_pc(s, PseudoClass::Root, true);
      in.target = has_pc(s, PseudoClass::Target, false);
      in.empty = has_pc(s, PseudoClass::Empty, false);
      in.positional = has_positional(s, false);
      in.positive_positional = has_positional(s, true);
      in.types = allowed_types(s, ts_);
      if (auto gs = attr_groups(s, fresh_tag(t)))
        for (const auto& g : *gs)
          if (g.must_define && g.attr == "id" && !g.fresh) in.ids.emplace_back(g.ns, g.set);
      info_.push_back(std::move(in));
      into_[a.trans[t].to].push_back(t);
    }
  }

  EmptinessResult run() {
    std::vector<Item> stack;
    for (int t = 0; t < static_cast<int>(a_.trans.size()); ++t) {
      const auto& tr = a_.trans[t];
      if (tr.dir != Dir::Last || tr.to != a_.qf || !info_[t].ok) continue;
      Item it;
      it.state = tr.from;
      it.level = {t};
      it.records = {t};
      it.must_be_root = info_[t].root;
      it.targets = info_[t].target;
      stack.push_back(std::move(it));
    }
    while (!stack.empty()) {
      Item it = std::move(stack.back());
      stack.pop_back();
      if (!seen_.insert(key(it)).second) continue;
      if (accepts(it)) {
        if (uncertain_) return {Emptiness::Unknown, error_};
        return {Emptiness::NonEmpty, ""};
      }
      if (it.must_be_root) continue;
      for (int t : into_[it.state]) expand(it, t, stack);
    }
    return {Emptiness::Empty, ""};
  }

 private:
  struct Info {
    bool ok, root, not_root, target, empty, positional, positive_positional;
    std::vector<int> types;
    std::vector<std::pair<std::string, std::vector<AttrConstraint>>> ids;
  };
  struct Item {
    int state = 0;
    std::vector<int> level, records, used_loops;
    bool must_be_root = false;
    int targets = 0;
  };

  const CssAutomaton& a_;
  const EmptinessConfig& cfg_;
  TypeSummary ts_;
  std::vector<Info> info_;
  std::vector<std::vector<int>> into_;
  std::set<std::string> seen_;
  std::map<std::vector<int>, bool> level_memo_;
  bool uncertain_ = false;
  std::string error_;

  static std::string key(const Item& it) {
    std::string s = I(it.state) + "|" + (it.must_be_root ? "r" : "") + I(it.targets) + "|";
    for (int t : it.level) s += I(t) + ",";
    s += "|";
    std::vector<int> r = it.records;
    std::sort(r.begin(), r.end());
    for (int t : r) s += I(t) + ",";
    s += "|";
    for (int t : it.used_loops) s += I(t) + ",";
    return s;
  }

  bool accepts(const Item& it) {
    if (it.state != a_.q0 || it.level.size() != 1) return false;
    const auto& in = info_[it.level[0]];
    if (in.not_root || in.positive_positional) return false;
    return ids_distinct(it.records);
  }

  bool ids_distinct(const std::vector<int>& records) {
    std::map<std::string, std::vector<std::vector<AttrConstraint>>> by_ns;
    for (int t : records)
      for (const auto& [ns, set] : info_[t].ids) by_ns[ns].push_back(set);
    for (const auto& [ns, sets] : by_ns)
      if (sets.size() > 1 && !assign_distinct(sets)) return false;
    return true;
  }

  void expand(const Item& it, int t, std::vector<Item>& stack) {
    const auto& tr = a_.trans[t];
    const auto& in = info_[t];
    if (!in.ok || tr.dir == Dir::Last) return;
    if (it.targets + in.target > 1) return;
    Item nx;
    nx.state = tr.from;
    nx.targets = it.targets + in.target;
    if (tr.from == tr.to) {
      if (std::find(it.used_loops.begin(), it.used_loops.end(), t) != it.used_loops.end()) return;
      nx.used_loops = it.used_loops;
      nx.used_loops.push_back(t);
      std::sort(nx.used_loops.begin(), nx.used_loops.end());
    }
    nx.records = it.records;
    nx.records.push_back(t);
    if (tr.dir == Dir::Child) {
      if (in.empty) return;
      if (!level_ok(it.level)) return;
      nx.level = {t};
      nx.must_be_root = in.root;
    } else {
      if (in.root) return;  // the root has no siblings
      nx.level.push_back(t);
      nx.level.insert(nx.level.end(), it.level.begin(), it.level.end());
    }
    stack.push_back(std::move(nx));
  }

  // The level's leftmost record is a first child; are the positional conditions of all
  // records satisfiable together?
  bool level_ok(const std::vector<int>& level) {
    bool any = false;
    for (int t : level) any = any || info_[t].positional;
    if (!any) return true;
    auto memo = level_memo_.find(level);
    if (memo != level_memo_.end()) return memo->second;
    VarPool P;
    std::vector<F> xs;
    const int m = static_cast<int>(level.size());
    const int K = static_cast<int>(ts_.types.size());
    auto cnt = [&](int j, int k) { return "c!" + I(j) + "!" + I(k); };
    auto tyv = [&](int j) { return "ty!" + I(j); };
    auto tot = [&](int k) { return "tot!" + I(k); };
    for (int j = 0; j < m; ++j) {
      P.declare(tyv(j), Sort::Int);
      std::vector<F> alts;
      for (int k : info_[level[j]].types) alts.push_back(eq(V(tyv(j)), C(k)));
      xs.push_back(lor(std::move(alts)));
      for (int k = 0; k < K; ++k) {
        P.declare(cnt(j, k), Sort::Int);
        xs.push_back(j == 0 ? eq(V(cnt(j, k)), C(0)) : ge(V(cnt(j, k)), C(0)));
      }
    }
    for (int j = 0; j + 1 < m; ++j) {
      bool exact = a_.trans[level[j]].dir == Dir::Neighbour;
      for (int k = 0; k < K; ++k) {
        Term gap = C(0);
        if (!exact) {
          std::string g = P.fresh("gap", Sort::Int);
          xs.push_back(ge(V(g), C(0)));
          gap = V(g);
        }
        F is = eq(V(tyv(j)), C(k));
        xs.push_back(implies(is, eq(V(cnt(j + 1, k)), V(cnt(j, k)) + gap + 1)));
        xs.push_back(implies(lnot(is), eq(V(cnt(j + 1, k)), V(cnt(j, k)) + gap)));
      }
    }
    Term total = C(0);
    for (int k = 0; k < K; ++k) {
      P.declare(tot(k), Sort::Int);
      F is = eq(V(tyv(m - 1)), C(k));
      xs.push_back(implies(is, ge(V(tot(k)), V(cnt(m - 1, k)) + 1)));
      xs.push_back(ge(V(tot(k)), V(cnt(m - 1, k))));
      total = total + V(tot(k));
    }
    for (int j = 0; j < m; ++j) {
      Term pos = C(1);
      for (int k = 0; k < K; ++k) pos = pos + V(cnt(j, k));
      for (const auto& c : a_.trans[level[j]].sel.conds) {
        if (!c.is_positional()) continue;
        using CK = Condition::Kind;
        auto nth = [&](const Term& x) { return c.negated ? nomatch(x, c.a, c.b, P) : nth_match(x, c.a, c.b, P); };
        auto neg = [&](F f) { return c.negated ? lnot(f) : f; };
        switch (c.kind) {
          case CK::NthChild: xs.push_back(nth(pos)); break;
          case CK::NthLastChild: xs.push_back(nth(total - pos + 1)); break;
          case CK::OnlyChild: xs.push_back(neg(eq(total, C(1)))); break;
          case CK::NthOfType:
          case CK::NthLastOfType:
          case CK::OnlyOfType: {
            std::vector<F> alts;
            for (int k : info_[level[j]].types) {
              F f;
              if (c.kind == CK::NthOfType) f = nth(V(cnt(j, k)) + 1);
              else if (c.kind == CK::NthLastOfType) f = nth(V(tot(k)) - V(cnt(j, k)));
              else f = neg(eq(V(tot(k)), C(1)));
              alts.push_back(land(eq(V(tyv(j)), C(k)), f));
            }
            xs.push_back(lor(std::move(alts)));
            break;
          }
          default: break;
        }
      }
    }
    auto ans = solve_smt(emit_smtlib(land(std::move(xs)), P), cfg_.smt);
    bool ok = ans.result != SatResult::Unsat;
    if (ans.result == SatResult::Unknown) {
      uncertain_ = true;
      error_ = ans.error;
    }
    level_memo_[level] = ok;
    return ok;
  }
};

}  // namespace

EmptinessResult check_nonempty_optimized(const CssAutomaton& a, const EmptinessConfig& cfg) {
  if (trivially_empty(a)) return {Emptiness::Empty, ""};
  return BackwardSearch(a, cfg).run();
}

EmptinessResult check_nonempty(const CssAutomaton& a, const EmptinessConfig& cfg) {
  switch (cfg.backend) {
    case Backend::Optimized: return check_nonempty_optimized(a, cfg);
    case Backend::Full: return check_nonempty_full(a, cfg);
    case Backend::Both: {
      auto o = check_nonempty_optimized(a, cfg);
      auto f = check_nonempty_full(a, cfg);
      if (o.verdict == Emptiness::Unknown) return f;
      if (f.verdict == Emptiness::Unknown || f.verdict == o.verdict) return o;
      return {Emptiness::Unknown, "backends disagree"};
    }
  }
  return {};
}

namespace {

std::vector<std::pair<std::string, std::string>> required_ids(const NodeSelector& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : s.conds)
    if (c.kind == Condition::Kind::Attr && !c.negated && !c.attr_any_ns && c.attr == "id" && c.op == AttrOp::Equals)
      out.emplace_back(c.attr_ns, c.value);
  return out;
}

std::mutex g_pair_mu;
std::map<std::string, EmptinessResult> g_pair_cache;

}  // namespace

EmptinessResult selectors_intersect(const Selector& s1, const Selector& s2, const EmptinessConfig& cfg) {
  Selector a = normalize(s1), b = normalize(s2);
  if (a.pe != b.pe) return {Emptiness::Empty, ""};
  for (const auto& [ns1, v1] : required_ids(a.subject()))
    for (const auto& [ns2, v2] : required_ids(b.subject()))
      if (ns1 == ns2 && v1 != v2) return {Emptiness::Empty, ""};
  std::string ka = serialize(a), kb = serialize(b);
  // synthetic conditions are not serialized but pe is the same on both sides
  if (kb < ka) std::swap(ka, kb);
  std::string ck = ka + '\n' + kb + '\n' + std::to_string(static_cast<int>(cfg.backend));
  {
    std::lock_guard<std::mutex> lock(g_pair_mu);
    auto it = g_pair_cache.find(ck);
    if (it != g_pair_cache.end()) return it->second;
  }
  auto prod = intersect(compile(a), compile(b));
  auto r = check_nonempty(prod, cfg);
  if (r.verdict != Emptiness::Unknown) {
    std::lock_guard<std::mutex> lock(g_pair_mu);
    g_pair_cache[ck] = r;
  }
  return r;
}

}  // namespace cssmin
