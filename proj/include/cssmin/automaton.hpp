#pragma once

#include <string>
#include <vector>

#include "cssmin/dom.hpp"
#include "cssmin/selector.hpp"

namespace cssmin {

// child: move to the first child; neighbour: to the next sibling; sibling: k > 0 siblings
// to the right; last: accept at the current node.  Every transition checks the node the
// run is currently at.
enum class Dir : uint8_t { Child, Neighbour, Sibling, Last };
const char* dir_name(Dir d);

struct Transition {
  int from;
  Dir dir;
  NodeSelector sel;
  int to;
};

struct CssAutomaton {
  int num_states = 0;
  int q0 = 0;
  int qf = 0;
  std::vector<Transition> trans;
  std::vector<std::string> names;
};

bool is_any(const NodeSelector& s);
// The unsatisfiable node selector :not(*).
NodeSelector bottom_node_selector();
bool is_bottom(const NodeSelector& s);

// `s` is normalized; its pseudo-element tag is ignored.
CssAutomaton compile(const Selector& s);

NodeSelector intersect_node_selectors(const NodeSelector& a, const NodeSelector& b);
CssAutomaton intersect(const CssAutomaton& a, const CssAutomaton& b);

bool run_accepts(const CssAutomaton& a, const DocumentTree& t, int n);
std::vector<char> accepting_nodes(const CssAutomaton& a, const DocumentTree& t,
                                  LocalMatchCache* cache = nullptr);

std::vector<std::string> validate_automaton(const CssAutomaton& a);
std::string to_dot(const CssAutomaton& a);

}  // namespace cssmin
