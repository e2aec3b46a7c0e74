#include "cssmin/lia.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace cssmin::lia {

Term Term::var(const std::string& name, long k) {
  Term t;
  if (k) t.coef[name] = k;
  return t;
}

Term Term::constant(long v) {
  Term t;
  t.c = v;
  return t;
}

Term operator+(Term a, const Term& b) {
  for (const auto& [v, k] : b.coef) {
    long& x = a.coef[v];
    x += k;
    if (x == 0) a.coef.erase(v);
  }
  a.c += b.c;
  return a;
}

Term operator*(long k, Term a) {
  if (k == 0) return Term{};
  for (auto& [v, x] : a.coef) x *= k;
  a.c *= k;
  return a;
}

Term operator-(Term a, const Term& b) { return a + (-1) * b; }
Term operator+(Term a, long k) {
  a.c += k;
  return a;
}
Term operator-(Term a, long k) {
  a.c -= k;
  return a;
}

namespace {

F make(Node::Op op) {
  auto n = std::make_shared<Node>();
  n->op = op;
  return n;
}

const F& kTrue() {
  static const F t = make(Node::Op::True);
  return t;
}
const F& kFalse() {
  static const F f = make(Node::Op::False);
  return f;
}

F cmp(Node::Op op, Term t) {
  if (t.is_constant()) {
    bool r = op == Node::Op::LeZero ? t.c <= 0 : t.c == 0;
    return r ? kTrue() : kFalse();
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->t = std::move(t);
  return n;
}

}  // namespace

F top() { return kTrue(); }
F bottom() { return kFalse(); }

F bvar(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::BoolVar;
  n->name = name;
  return n;
}

F le(const Term& a, const Term& b) { return cmp(Node::Op::LeZero, a - b); }
F lt(const Term& a, const Term& b) { return cmp(Node::Op::LeZero, a - b + 1); }
F ge(const Term& a, const Term& b) { return le(b, a); }
F gt(const Term& a, const Term& b) { return lt(b, a); }
F eq(const Term& a, const Term& b) { return cmp(Node::Op::EqZero, a - b); }
F ne(const Term& a, const Term& b) { return lnot(eq(a, b)); }

F land(std::vector<F> xs) {
  std::vector<F> keep;
  for (auto& x : xs) {
    if (x->op == Node::Op::False) return kFalse();
    if (x->op == Node::Op::True) continue;
    if (x->op == Node::Op::And) {
      keep.insert(keep.end(), x->kids.begin(), x->kids.end());
    } else {
      keep.push_back(std::move(x));
    }
  }
  if (keep.empty()) return kTrue();
  if (keep.size() == 1) return keep[0];
  auto n = std::make_shared<Node>();
  n->op = Node::Op::And;
  n->kids = std::move(keep);
  return n;
}

F lor(std::vector<F> xs) {
  std::vector<F> keep;
  for (auto& x : xs) {
    if (x->op == Node::Op::True) return kTrue();
    if (x->op == Node::Op::False) continue;
    if (x->op == Node::Op::Or) {
      keep.insert(keep.end(), x->kids.begin(), x->kids.end());
    } else {
      keep.push_back(std::move(x));
    }
  }
  if (keep.empty()) return kFalse();
  if (keep.size() == 1) return keep[0];
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Or;
  n->kids = std::move(keep);
  return n;
}

F lnot(const F& x) {
  if (x->op == Node::Op::True) return kFalse();
  if (x->op == Node::Op::False) return kTrue();
  if (x->op == Node::Op::Not) return x->kids[0];
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Not;
  n->kids = {x};
  return n;
}

F implies(const F& a, const F& b) { return lor(lnot(a), b); }
F iff(const F& a, const F& b) { return land(implies(a, b), implies(b, a)); }

const std::string& VarPool::declare(const std::string& name, Sort s) {
  return vars_.emplace(name, s).first->first;
}

std::string VarPool::fresh(const std::string& prefix, Sort s) {
  int& k = counters_[prefix];
  std::string name;
  do {
    name = prefix + "!" + std::to_string(k++);
  } while (vars_.count(name));
  vars_.emplace(name, s);
  return name;
}

std::vector<std::string> undeclared(const F& f, const VarPool& pool) {
  std::set<std::string> bad;
  std::function<void(const F&)> rec = [&](const F& x) {
    if (x->op == Node::Op::BoolVar && !pool.declared(x->name)) bad.insert(x->name);
    for (const auto& [v, k] : x->t.coef)
      if (!pool.declared(v)) bad.insert(v);
    for (const auto& k : x->kids) rec(k);
  };
  rec(f);
  return {bad.begin(), bad.end()};
}

namespace {

std::string num(long v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

std::string quote(const std::string& name) {
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '!' || c == '.' || c == '-'))
      return "|" + name + "|";
  }
  return name;
}

}  // namespace

std::string to_smt(const Term& t) {
  std::vector<std::string> parts;
  for (const auto& [v, k] : t.coef) parts.push_back(k == 1 ? quote(v) : "(* " + num(k) + " " + quote(v) + ")");
  if (t.c != 0 || parts.empty()) parts.push_back(num(t.c));
  if (parts.size() == 1) return parts[0];
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

namespace {

void write(std::ostream& os, const F& f) {
  switch (f->op) {
    case Node::Op::True: os << "true"; return;
    case Node::Op::False: os << "false"; return;
    case Node::Op::BoolVar: os << quote(f->name); return;
    case Node::Op::LeZero:
    case Node::Op::EqZero: {
      // Move the constant to the right-hand side for readability.
      Term lhs = f->t;
      long rhs = -lhs.c;
      lhs.c = 0;
      os << (f->op == Node::Op::LeZero ? "(<= " : "(= ") << to_smt(lhs) << " " << num(rhs) << ")";
      return;
    }
    case Node::Op::Not:
      os << "(not ";
      write(os, f->kids[0]);
      os << ")";
      return;
    case Node::Op::And:
    case Node::Op::Or:
      os << (f->op == Node::Op::And ? "(and" : "(or");
      for (const auto& k : f->kids) {
        os << " ";
        write(os, k);
      }
      os << ")";
      return;
  }
}

}  // namespace

std::string to_smt(const F& f) {
  std::ostringstream os;
  write(os, f);
  return os.str();
}

std::string emit_smtlib(const F& f, const VarPool& pool) {
  std::ostringstream os;
  os << "(set-logic QF_LIA)\n";
  for (const auto& [name, sort] : pool.vars())
    os << "(declare-fun " << quote(name) << " () " << (sort == Sort::Int ? "Int" : "Bool") << ")\n";
  os << "(assert ";
  write(os, f);
  os << ")\n(check-sat)\n(get-model)\n";
  return os.str();
}

F nth_match(const Term& x, long a, long b, VarPool& pool) {
  if (a == 0) return eq(x, Term::constant(b));
  std::string n = pool.fresh("nth", Sort::Int);
  return land(ge(Term::var(n), Term::constant(0)), eq(x, a * Term::var(n) + b));
}

F nomatch(const Term& x, long a, long b, VarPool& pool) {
  // b = a*b1 + b2 with 0 <= b2 < |a|.  x matches iff x is on the right side of b and
  // leaves the same remainder b2.
  std::vector<F> alts;
  if (a >= 0) alts.push_back(lt(x, Term::constant(b)));
  if (a <= 0) alts.push_back(gt(x, Term::constant(b)));
  if (a != 0) {
    long m = a < 0 ? -a : a;
    long b2 = ((b % m) + m) % m;
    long b1 = (b - b2) / a;
    std::string n = pool.fresh("nm_n", Sort::Int);
    std::string r = pool.fresh("nm_r", Sort::Int);
    Term R = Term::var(r);
    alts.push_back(land({ge(R, Term::constant(0)), lt(R, Term::constant(m)), ne(R, Term::constant(b2)),
                         eq(x, a * Term::var(n) + Term::constant(a * b1) + R)}));
  }
  return lor(std::move(alts));
}

std::optional<bool> eval_closed(const F& f) {
  switch (f->op) {
    case Node::Op::True: return true;
    case Node::Op::False: return false;
    case Node::Op::BoolVar: return std::nullopt;
    case Node::Op::LeZero:
      if (!f->t.is_constant()) return std::nullopt;
      return f->t.c <= 0;
    case Node::Op::EqZero:
      if (!f->t.is_constant()) return std::nullopt;
      return f->t.c == 0;
    case Node::Op::Not: {
      auto v = eval_closed(f->kids[0]);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Node::Op::And:
    case Node::Op::Or: {
      bool is_and = f->op == Node::Op::And;
      bool unknown = false;
      for (const auto& k : f->kids) {
        auto v = eval_closed(k);
        if (!v) unknown = true;
        else if (*v != is_and) return !is_and;
      }
      if (unknown) return std::nullopt;
      return is_and;
    }
  }
  return std::nullopt;
}

}  // namespace cssmin::lia
