#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cssmin/selector.hpp"

namespace cssmin {

// One constraint on the value of a single (namespace, attribute) pair.  A set of them
// describes a defined attribute: "exists" constraints are trivially true, a negated
// "exists" makes the set unsatisfiable.
struct AttrConstraint {
  bool exists_only = false;
  AttrOp op = AttrOp::Equals;
  std::string value;
  bool negated = false;

  bool operator==(const AttrConstraint&) const = default;
};

AttrConstraint to_constraint(const Condition& c);
bool word_satisfies(const std::vector<AttrConstraint>& set, const std::string& w);

// Deterministic automaton over words framed as ^w$.  States are the prefixes of the
// marked patterns of every constraint (an Aho-Corasick trie); runs additionally track
// which positive constraints were seen and whether a negative one was hit.
class ConstraintWordAutomaton {
 public:
  explicit ConstraintWordAutomaton(std::vector<AttrConstraint> set);

  int num_states() const { return static_cast<int>(next_.size()); }
  bool trivially_unsat() const { return unsat_; }
  const std::string& alphabet() const { return alphabet_; }

  // Up to k accepted words in length-lexicographic order, skipping `exclude`, no longer
  // than max_len.
  std::vector<std::string> solutions(size_t k, size_t max_len,
                                     const std::vector<std::string>& exclude = {}) const;

 private:
  std::vector<AttrConstraint> set_;
  std::string alphabet_;                 // sorted, without the two markers
  std::vector<std::vector<int>> next_;   // trie state x symbol (alphabet, then ^, $)
  std::vector<uint64_t> out_;            // constraints whose pattern ends here
  uint64_t required_ = 0, forbidden_ = 0;
  bool unsat_ = false;

  int sym(char c) const;
};

// Shortest (then lexicographically least) word satisfying `set` not in distinct_from.
std::optional<std::string> solve_attr_set(const std::vector<AttrConstraint>& set,
                                          const std::vector<std::string>& distinct_from = {});

struct AttrBound {
  long n = 0, m = 0, c = 0;
  long word_len = 0;  // n*m*c
  long b = 1;         // word_len + 1 trailing null slot
};
AttrBound compute_attr_bound(const std::vector<std::vector<AttrConstraint>>& sets);

// Pairwise distinct words, one per set, or nullopt.  Each set gets its |sets| shortest
// solutions as candidates, which is enough for a matching to exist whenever any
// distinct assignment exists.
std::optional<std::vector<std::string>> assign_distinct(
    const std::vector<std::vector<AttrConstraint>>& sets);

}  // namespace cssmin
