#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cssmin/attr.hpp"
#include "cssmin/automaton.hpp"
#include "cssmin/lia.hpp"
#include "cssmin/solver.hpp"

namespace cssmin {

using QualType = std::pair<std::string, std::string>;  // (namespace, element)

struct TypeSummary {
  std::vector<QualType> types;     // mentioned types, then fresh ones, null last
  std::vector<int> fresh_of;       // per transition: index into types, -1 if none
  int null_type = 0;
  std::vector<std::string> namespaces, elements;  // N-hat, E-hat (mentioned plus fresh)
};

TypeSummary compute_type_summary(const CssAutomaton& a);

// Type indices a node selector admits (type part and negated type conditions).
std::vector<int> allowed_types(const NodeSelector& s, const TypeSummary& ts);

// The attribute constraints of a node selector grouped by the attribute they apply to.
// Positive "*|a" conditions each get a fresh namespace of their own.
struct AttrGroup {
  std::string ns, attr;
  bool fresh = false;
  bool must_define = false;  // otherwise the set applies only if the attribute is present
  std::vector<AttrConstraint> set;
};
// nullopt when the conditions contradict each other syntactically (e.g. [a] and :not([a])).
std::optional<std::vector<AttrGroup>> attr_groups(const NodeSelector& s, const std::string& fresh_tag);

// Everything about a node selector that can be decided without looking at other nodes:
// type part, pseudo-class exclusions, satisfiability of each attribute group.
bool locally_consistent(const NodeSelector& s, const TypeSummary& ts);

struct FullEncoding {
  lia::F formula;
  lia::VarPool pool;
  int steps = 0;        // n = |transitions|
  long attr_len = 1;    // b, the number of character slots per attribute value
  AttrBound theoretical;
};

// Attribute word length sufficient for this automaton: the k-th shortest solution of
// every constraint set (k = number of run positions for id attributes, 1 otherwise).
long effective_attr_bound(const CssAutomaton& a, const TypeSummary& ts);

FullEncoding encode_nonemptiness(const CssAutomaton& a, const TypeSummary& ts, long attr_len);
FullEncoding encode_nonemptiness(const CssAutomaton& a);

enum class Backend { Optimized, Full, Both };
enum class Emptiness { Empty, NonEmpty, Unknown };
const char* emptiness_name(Emptiness e);

struct EmptinessConfig {
  SmtConfig smt;
  Backend backend = Backend::Optimized;
};

struct EmptinessResult {
  Emptiness verdict = Emptiness::Unknown;
  std::string detail;  // solver error or backend disagreement
};

EmptinessResult check_nonempty_full(const CssAutomaton& a, const EmptinessConfig& cfg);
EmptinessResult check_nonempty_optimized(const CssAutomaton& a, const EmptinessConfig& cfg);
EmptinessResult check_nonempty(const CssAutomaton& a, const EmptinessConfig& cfg);

// Whether some node of some tree matches both selectors (with equal pseudo-element).
// Cheap syntactic filters first, then the automaton product.
EmptinessResult selectors_intersect(const Selector& s1, const Selector& s2, const EmptinessConfig& cfg);

}  // namespace cssmin
