#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cssmin/biclique.hpp"
#include "cssmin/graph.hpp"

namespace cssmin {

// Hash-consed boolean formulas over numbered variables.
namespace bx {

enum class Kind { True, False, Var, Not, And, Or };

struct Node {
  Kind kind = Kind::True;
  int var = 0;
  std::vector<int> kids;
};

class Pool {
 public:
  Pool();
  int tru() const { return 0; }
  int fls() const { return 1; }
  int var(int v);
  int neg(int a);
  int all(std::vector<int> ks);
  int any(std::vector<int> ks);
  const Node& at(int f) const { return nodes_[f]; }
  size_t size() const { return nodes_.size(); }

 private:
  int make(Node n);
  std::vector<Node> nodes_;
  std::map<std::pair<int, std::vector<int>>, int> cons_;
};

// value[v] for v >= 1.
bool eval(const Pool& p, int f, const std::vector<char>& value);

}  // namespace bx

struct EncodeOptions {
  bool restrict_exclusions = false;  // exclusion variables only for nodes on ordered edges
  bool position_bounds = true;
  std::vector<int> allowed;          // biclique indices this instance may pick; empty = all
};

struct SoftConstraint {
  int f = 0;
  long weight = 0;
};

struct Encoding {
  bx::Pool pool;
  int num_vars = 0;
  int m = 0;                          // rules in the covering
  int K = 0;                          // bicliques
  std::vector<int> inpos_bits;        // least significant first
  std::vector<int> bc_bits;           // holds the 0-based biclique index
  std::vector<int> excl;              // shared pool x_1..x_M
  std::vector<std::map<std::pair<bool, int>, int>> rho;  // per biclique: (is_sel, id) -> slot in excl
  std::vector<int> hard;
  std::vector<SoftConstraint> soft;
};

// The covering of `oc` must be trimmed and the enumeration non-empty.
Encoding encode(const OrderContext& oc, const OrderableEnumeration& en, const EncodeOptions& opt = {});

struct WClause {
  long weight = 0;  // == top for hard clauses
  std::vector<int> lits;
  bool operator==(const WClause&) const = default;
};

struct WcnfInstance {
  int nvars = 0;
  long top = 1;
  std::vector<WClause> clauses;
  bool operator==(const WcnfInstance&) const = default;
};

WcnfInstance to_wcnf(const Encoding& e);
std::string emit_dimacs(const WcnfInstance& w);
WcnfInstance parse_dimacs(const std::string& text);

enum class MaxSatStatus { Optimum, Unsat, Unknown };

struct MaxSatModel {
  MaxSatStatus status = MaxSatStatus::Unknown;
  long cost = -1;
  std::vector<char> value;  // index 0 unused
  std::string error;
};

// Reads "s", "o" and "v" lines.  Throws std::runtime_error on output it cannot read.
MaxSatModel parse_model(const std::string& text, int nvars);

// Sum of falsified soft weights, or -1 if a hard clause is falsified.
long model_cost(const WcnfInstance& w, const std::vector<char>& value);

struct MaxSatConfig {
  std::vector<std::string> command{"rc2.py", "-vv"};  // the instance path is appended
  double timeout_s = 300;
  std::string emit_dir;
};

MaxSatModel solve_wcnf(const WcnfInstance& w, const MaxSatConfig& cfg, const std::atomic<bool>* cancel = nullptr);

struct MergeOpportunity {
  CRule rule;         // properties in insertion order
  int j = 0;          // the rule becomes rule j+1
  int weight = 0;     // weight of the covering after applying it
};

struct Assignment {
  int inpos = 0, bc = 0;
  std::vector<char> excluded;  // per excl slot
};
Assignment read_assignment(const Encoding& e, const std::vector<char>& value);

std::optional<MergeOpportunity> decode(const Encoding& e, const std::vector<char>& value,
                                       const OrderableEnumeration& en, const OrderContext& oc);

// Exhaustive search over sub-bicliques of maximal bicliques, positions and property
// orders.  Ties: smaller weight, then smaller j, then rule text.
std::optional<MergeOpportunity> brute_force_best_opportunity(const OrderContext& oc);

struct SearchConfig {
  MaxSatConfig solver;
  EncodeOptions encode;
  int workers = 1;
  int partitions = 1;        // per worker
  int iteration = 0;         // picks the partition each worker searches
  double grace = 0.1;        // wait this fraction of the fastest time for the others
};

struct SearchResult {
  std::optional<MergeOpportunity> best;
  bool solver_error = false;
  std::string error;
  int instances = 0;
  long vars = 0, clauses = 0;
};

SearchResult find_best_opportunity(const OrderContext& oc, const OrderableEnumeration& en, const SearchConfig& cfg);

}  // namespace cssmin
