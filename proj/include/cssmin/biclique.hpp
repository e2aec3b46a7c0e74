#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cssmin/graph.hpp"

namespace cssmin {

// X x Y contained in the edges.  Both id lists are kept sorted.
struct Biclique {
  std::vector<int> sels, props;
  auto operator<=>(const Biclique&) const = default;
  size_t size() const { return sels.size() + props.size(); }
};

bool is_biclique(const CssGraph& g, const Biclique& b);
bool contains(const Biclique& outer, const Biclique& inner);

// Inclusion-maximal bicliques (MBEA), in canonical order.
std::vector<Biclique> enumerate_maximal_bicliques(const CssGraph& g);
// Closure over every property subset; only for small graphs.
std::vector<Biclique> brute_force_maximal_bicliques(const CssGraph& g);

// Sorts by node texts so numbering does not depend on enumeration order.
void canonical_sort(const CssGraph& g, std::vector<Biclique>& bs);

// Reachability under the edge order, computed once per (graph, covering).
class OrderContext {
 public:
  OrderContext(const CssGraph& g, const Covering& c);

  const CssGraph& graph() const { return g_; }
  const Covering& covering() const { return c_; }
  int index(int edge) const { return idx_[edge]; }
  int rules() const { return static_cast<int>(c_.size()); }
  bool reaches(int e1, int e2) const;  // e1 ≺+ e2
  bool in_order(int edge) const { return slot_[edge] >= 0; }

  // Pairs (p1, p2) of B's properties with p1 forced before p2 at position j.
  std::set<std::pair<int, int>> prop_order(const Biclique& b, int j) const;
  // Nodes taking part in prop_order(b, j), tagged (is_selector, id).
  std::set<std::pair<bool, int>> order_nodes(const Biclique& b, int j) const;

 private:
  std::vector<int> edges_last(const Biclique& b, int j) const;

  const CssGraph& g_;
  const Covering& c_;
  std::vector<int> idx_;
  std::vector<int> slot_;  // edge id -> row in reach_, -1 if not in the order
  std::vector<std::vector<bool>> reach_;
};

struct Orderability {
  bool orderable = true;
  std::vector<int> cycle;  // property ids, first repeated at the end
};

Orderability check_orderable(const OrderContext& oc, const Biclique& b, int j);
bool is_orderable(const OrderContext& oc, const Biclique& b, int j);

// Topological order of b's properties; ties go to the property seen first in the
// stylesheet.  nullopt if not orderable at j.
std::optional<std::vector<int>> order_properties(const OrderContext& oc, const Biclique& b, int j);

enum class EnumMode { Fast, Full };

struct OrderableEnumeration {
  std::vector<Biclique> bicliques;
  std::map<int, std::vector<int>> forbidden_first;  // position -> biclique indices

  // Whether biclique i is unorderable at position j.
  bool forbidden_at(int i, int j) const;
  int unorderable_maximal = 0;  // maximal bicliques unorderable at some position
  int maximal = 0;
};

OrderableEnumeration build_enumeration(const OrderContext& oc, EnumMode mode);
// Same, from an already computed list of maximal bicliques.
OrderableEnumeration build_enumeration(const OrderContext& oc, std::vector<Biclique> maximal, EnumMode mode);

}  // namespace cssmin
