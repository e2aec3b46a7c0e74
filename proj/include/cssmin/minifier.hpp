#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cssmin/biclique.hpp"
#include "cssmin/dom.hpp"
#include "cssmin/emptiness.hpp"
#include "cssmin/graph.hpp"
#include "cssmin/maxsat.hpp"
#include "cssmin/stylesheet.hpp"

namespace cssmin {

// A maximal run of plain rules, or one passthrough block.  Rules never move across a
// passthrough block, so each run is minified on its own.
struct Segment {
  bool passthrough = false;
  std::string raw;
  std::vector<Rule> rules;
};
std::vector<Segment> split_segments(const Stylesheet& ss);

// Intersection as used for the edge order: anything short of a proof of emptiness counts.
IntersectFn make_intersect(const EmptinessConfig& cfg);

struct ValidationBounds {
  int depth = 2;
  int branch = 2;
  size_t label_cap = 5;
};

struct Counterexample {
  std::string tree;  // DocumentTree::dump()
  int node = 0;
  std::string label;  // describe() of the node's label
  std::string pseudo_element;
  std::string property, original, minified;
};

struct Verdict {
  bool pass = true;
  std::string reason;
  std::optional<Counterexample> witness;
  long groups = 0, trees = 0;
};

// (a) the minified rules form a valid covering of the original graph under its edge
// order; (b) both stylesheets compute the same styles on every bounded tree built from
// labels that exercise each pair of selectors with related properties.
Verdict validate_equivalence(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b,
                             const EmptinessConfig& ec = {});
// Part (b) alone.  Groups are checked in parallel; the first failing group in group order
// supplies the witness, so both versions report the same one.
Verdict compare_cascades(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b);
Verdict compare_cascades_serial(const Stylesheet& original, const Stylesheet& minified, const ValidationBounds& b);

struct RunConfig {
  double timeout_s = 300;
  int workers = 1;
  int partitions = 1;               // per worker
  bool auto_partitions = false;     // size partitions from the node count instead
  int nodes_per_partition = 750;
  EnumMode mode = EnumMode::Fast;
  EmptinessConfig emptiness;
  MaxSatConfig maxsat;
  std::string emit_graph_file;
  std::optional<ValidationBounds> validate;
  int max_iterations = 100;
  bool deterministic = false;
};

struct IterationReport {
  int segment = 0;
  std::string rule;
  int position = 0;
  long bytes_before = 0, bytes_after = 0;
  double seconds = 0;
};

struct RunReport {
  std::vector<IterationReport> iterations;
  long bytes_in = 0, bytes_out = 0;
  long order_pairs = 0, intersection_queries = 0;
  long bicliques = 0, unorderable_bicliques = 0;
  double order_seconds = 0, seconds = 0;
  bool timed_out = false;
  bool solver_failed = false;
  std::vector<std::string> warnings;
  std::optional<Verdict> validation;
  Stylesheet output;
};

RunReport run(const Stylesheet& input, const RunConfig& cfg);
std::string report_json(const RunReport& r);

}  // namespace cssmin
