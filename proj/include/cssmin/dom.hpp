#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cssmin/selector.hpp"
#include "cssmin/stylesheet.hpp"

namespace cssmin {

struct NodeLabel {
  std::string ns, elem;
  std::map<std::pair<std::string, std::string>, std::string> attrs;  // (ns, name) -> value
  uint16_t pcs = 0;

  bool has(PseudoClass pc) const { return pcs & (1u << static_cast<int>(pc)); }
  void set(PseudoClass pc) { pcs |= static_cast<uint16_t>(1u << static_cast<int>(pc)); }
  bool operator==(const NodeLabel&) const = default;
};

std::string describe(const NodeLabel& l);

// Nodes are numbered in creation order; node 0 is the root.  Labels live in a table so
// enumerated trees can share them and callers can cache per-label results.
class DocumentTree {
 public:
  DocumentTree() : table_(std::make_shared<std::vector<NodeLabel>>()) {}
  explicit DocumentTree(std::shared_ptr<const std::vector<NodeLabel>> table) : table_(std::move(table)) {}

  int add_root(const NodeLabel& l);
  int add_child(int parent, const NodeLabel& l);
  int add_root_id(int label_id);
  int add_child_id(int parent, int label_id);

  int size() const { return static_cast<int>(parent_.size()); }
  int parent(int n) const { return parent_[n]; }
  const std::vector<int>& children(int n) const { return children_[n]; }
  int label_id(int n) const { return label_of_[n]; }
  const NodeLabel& label(int n) const { return (*table_)[label_of_[n]]; }
  const std::vector<NodeLabel>& label_table() const { return *table_; }
  void set_label_id(int n, int id) { label_of_[n] = id; }

  // 1-based position among siblings; 0 for the root.
  int position(int n) const { return pos_[n]; }
  int sibling_count(int n) const;

  std::string dump() const;

 private:
  std::shared_ptr<const std::vector<NodeLabel>> table_;
  std::vector<int> parent_, label_of_, pos_;
  std::vector<std::vector<int>> children_;
  int owned_label(const NodeLabel& l);
};

struct Violation {
  int node;
  std::string constraint;
};
std::vector<Violation> validate_tree(const DocumentTree& t);

// The paper's attribute operator semantics.
bool attr_op_matches(AttrOp op, const std::string& v, const std::string& value);

// Conditions that only look at the node's own label (type, attributes, pseudo-classes).
bool local_condition(const Condition& c, const NodeLabel& l);
bool local_match(const NodeSelector& s, const NodeLabel& l);
bool positional_condition(const Condition& c, const DocumentTree& t, int n);
bool node_matches(const NodeSelector& s, const DocumentTree& t, int n);

// Per-(node selector, label) cache of local_match results.
class LocalMatchCache {
 public:
  explicit LocalMatchCache(const std::vector<NodeLabel>* table) : table_(table) {}
  bool get(const NodeSelector& s, int label_id);

 private:
  const std::vector<NodeLabel>* table_;
  std::map<const NodeSelector*, std::vector<int8_t>> memo_;
};

// `s` must already be normalized.  Ignores the pseudo-element tag.
std::vector<char> match_all_normalized(const DocumentTree& t, const Selector& s,
                                       LocalMatchCache* cache = nullptr);
bool matches(const DocumentTree& t, int n, const Selector& s);

struct CascadeKey {
  Specificity spec;  // spec.important carries the !important flag
  int rule = 0;
  int pos = 0;
  auto operator<=>(const CascadeKey&) const = default;
};

struct ComputedStyle {
  // longhand leaf -> (winning declaration text, key)
  std::map<std::string, std::pair<std::string, CascadeKey>> props;
  bool same_values(const ComputedStyle& o) const;
};

// Precomputes normalized selectors and specificities for repeated cascade queries.
class CascadeEvaluator {
 public:
  explicit CascadeEvaluator(const Stylesheet& ss);
  // Styles for every node of `t` for the given pseudo-element target.
  std::vector<ComputedStyle> styles(const DocumentTree& t, PseudoElement pe,
                                    LocalMatchCache* cache = nullptr) const;
  const std::vector<Selector>& selectors() const { return sels_; }

 private:
  struct Entry {
    int sel;
    int rule;
    int pos;
    Specificity spec;
    std::string text;
    const std::vector<std::string>* leaves;
  };
  std::vector<Selector> sels_;
  std::vector<std::vector<Entry>> by_sel_;
};

ComputedStyle compute_cascade(const DocumentTree& t, int n, const Stylesheet& ss,
                              PseudoElement pe = PseudoElement::None);

struct TreeBounds {
  int max_depth = 3;   // levels, the root alone is depth 1
  int max_branch = 3;
  std::vector<NodeLabel> labels;
};

// Tree shapes as parent arrays in preorder.
std::vector<std::vector<int>> enumerate_shapes(int max_depth, int max_branch);

// Visits every valid tree within bounds in a fixed order; stop by returning false.
// Returns the number of trees visited.
long enumerate_trees(const TreeBounds& b, const std::function<bool(const DocumentTree&)>& visit);

// Label universe as a cartesian product: types x (each attribute absent or one value) x pcs subsets.
std::vector<NodeLabel> cartesian_labels(
    const std::vector<std::pair<std::string, std::string>>& types,
    const std::vector<std::pair<std::pair<std::string, std::string>, std::vector<std::string>>>& attrs,
    const std::vector<PseudoClass>& pcs);

// A label satisfying all non-positional conditions of every node selector in `reqs`,
// with the positive form of `force` added when given.  nullopt if none was found.
std::optional<NodeLabel> synthesize_label(const std::vector<const NodeSelector*>& reqs,
                                          const Condition* force = nullptr);

// Small label alphabet that exercises the given selectors: subject labels, a blank label,
// labels for the other node selectors and labels violating each negation.
std::vector<NodeLabel> tight_labels(const std::vector<Selector>& sels, size_t cap);

struct Witness {
  DocumentTree tree;
  int node;
};
std::optional<Witness> oracle_intersection(const Selector& s1, const Selector& s2,
                                           const TreeBounds& b);

}  // namespace cssmin
