#pragma once

#include <string>
#include <vector>

#include "cssmin/selector.hpp"

namespace cssmin {

struct Declaration {
  std::string name;   // lowercase
  std::string value;  // whitespace collapsed
  bool important = false;

  std::string text() const;
  bool operator==(const Declaration&) const = default;
};

struct Rule {
  std::vector<Selector> selectors;
  std::vector<Declaration> decls;
};

// A rule, or a block kept verbatim (@-rules, rules we cannot model in lenient mode).
struct StyleItem {
  bool passthrough = false;
  Rule rule;
  std::string raw;
};

struct Stylesheet {
  std::vector<StyleItem> items;

  size_t rule_count() const;
};

Declaration parse_declaration(const std::string& text);
Stylesheet parse_stylesheet(const std::string& text, bool lenient = false);

std::string serialize(const Rule& r);
std::string serialize(const Stylesheet& ss);

// Non-whitespace character count of the canonical serialization.
int total_weight(const Stylesheet& ss);

// Longhand names a property sets.  Unknown names map to themselves; "all" maps to "*".
const std::vector<std::string>& longhand_leaves(const std::string& name);
bool related_property_names(const std::string& p1, const std::string& p2);

}  // namespace cssmin
