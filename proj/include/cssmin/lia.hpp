#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cssmin::lia {

// sum(coef * var) + constant
struct Term {
  std::map<std::string, long> coef;
  long c = 0;

  static Term var(const std::string& name, long k = 1);
  static Term constant(long v);
  bool is_constant() const { return coef.empty(); }
};
Term operator+(Term a, const Term& b);
Term operator-(Term a, const Term& b);
Term operator*(long k, Term a);
Term operator+(Term a, long k);
Term operator-(Term a, long k);

struct Node;
using F = std::shared_ptr<const Node>;

struct Node {
  enum class Op { True, False, BoolVar, LeZero, EqZero, And, Or, Not };
  Op op;
  std::string name;  // BoolVar
  Term t;            // LeZero: t <= 0, EqZero: t == 0
  std::vector<F> kids;
};

F top();
F bottom();
F bvar(const std::string& name);
F le(const Term& a, const Term& b);
F lt(const Term& a, const Term& b);
F ge(const Term& a, const Term& b);
F gt(const Term& a, const Term& b);
F eq(const Term& a, const Term& b);
F ne(const Term& a, const Term& b);
F land(std::vector<F> xs);
F lor(std::vector<F> xs);
F lnot(const F& x);
F implies(const F& a, const F& b);
F iff(const F& a, const F& b);
inline F land(const F& a, const F& b) { return land(std::vector<F>{a, b}); }
inline F lor(const F& a, const F& b) { return lor(std::vector<F>{a, b}); }

enum class Sort { Int, Bool };

// Variable inventory; every emitted formula may only use declared names.
class VarPool {
 public:
  const std::string& declare(const std::string& name, Sort s);
  std::string fresh(const std::string& prefix, Sort s);
  const std::map<std::string, Sort>& vars() const { return vars_; }
  bool declared(const std::string& name) const { return vars_.count(name) > 0; }

 private:
  std::map<std::string, Sort> vars_;
  std::map<std::string, int> counters_;
};

// Names used by `f` that are not declared in `pool`.
std::vector<std::string> undeclared(const F& f, const VarPool& pool);

std::string to_smt(const F& f);
std::string to_smt(const Term& t);
// A complete QF_LIA script: declarations, one assertion, check-sat, get-model.
std::string emit_smtlib(const F& f, const VarPool& pool);

// nomatch(x, a, b) <=> there is no n >= 0 with x = a*n + b.  Uses fresh variables, so
// only valid where the result occurs positively.
F nomatch(const Term& x, long a, long b, VarPool& pool);
// x = a*n + b for some fresh n >= 0.
F nth_match(const Term& x, long a, long b, VarPool& pool);

// Evaluates a closed formula (no variables).  Used by tests of the builders.
std::optional<bool> eval_closed(const F& f);

}  // namespace cssmin::lia
