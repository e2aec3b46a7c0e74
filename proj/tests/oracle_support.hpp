#pragma once

// Independent reference computations shared by the unit tests and the acceptance run.

#include <random>
#include <string>
#include <vector>

#include "cssmin/dom.hpp"
#include "cssmin/graph.hpp"
#include "cssmin/lia.hpp"
#include "cssmin/selector.hpp"

namespace oracle {

// True iff no n in [0, 300] has a*n + b == x.  For |x| <= 200 and |a|, |b| <= 10 every
// solution has n <= 210.
bool nomatch_brute(long x, long a, long b);

// Graph, edge order (optimized backend) and covering of a stylesheet without passthrough
// blocks.  The covering is left untrimmed.
std::pair<cssmin::CssGraph, cssmin::Covering> ordered_graph(const std::string& css);

// Decides satisfiability of each formula (free variables read existentially) with one
// z3 process: 1 sat, 0 unsat, -1 anything else.
std::vector<int> smt_batch(const std::vector<std::pair<cssmin::lia::F, cssmin::lia::VarPool>>& qs,
                           double timeout_s = 600);

// Non-empty, non-comment lines ("//") of a selector list file.
std::vector<std::string> load_lines(const std::string& path);
std::string read_file(const std::string& path);

// Labels for one (normalized) selector: the subject, the other node selectors, then a
// blank label and labels violating each negation.  At most `cap`.
std::vector<cssmin::NodeLabel> selector_alphabet(const cssmin::Selector& s, size_t cap);

// Small random stylesheet text whose graph has at most max_nodes selector and
// property nodes together.  Selectors and declarations come from a fixed pool chosen
// so that intersections and related properties are common.
std::string random_stylesheet(std::mt19937& rng, int max_nodes, int max_rules = 5);

// The covering of `g` plus `extra` random bicliques of `g` inserted at random places.
cssmin::Covering random_covering(const cssmin::CssGraph& g, const cssmin::Covering& base, int extra,
                                 std::mt19937& rng);

}  // namespace oracle
