#include <map>
#include <mutex>
#include <set>

#include "cssmin/stylesheet.hpp"

namespace cssmin {

namespace {

// Shorthand snapshot (CSS 2.1 plus CSS3 modules in common use, 2024).
const std::map<std::string, std::vector<std::string>>& shorthand_table() {
  static const std::map<std::string, std::vector<std::string>> kTable = [] {
    std::map<std::string, std::vector<std::string>> t;
    const char* sides[] = {"top", "right", "bottom", "left"};
    for (const char* box : {"margin", "padding"}) {
      for (const char* s : sides) t[box].push_back(std::string(box) + "-" + s);
    }
    for (const char* part : {"width", "style", "color"}) {
      std::string sh = std::string("border-") + part;
      for (const char* s : sides) t[sh].push_back(std::string("border-") + s + "-" + part);
    }
    for (const char* s : sides) {
      std::string sh = std::string("border-") + s;
      for (const char* part : {"width", "style", "color"}) t[sh].push_back(sh + "-" + part);
      t["border"].push_back(sh);
    }
    t["border"].push_back("border-image");
    t["border-image"] = {"border-image-source", "border-image-slice", "border-image-width",
                         "border-image-outset", "border-image-repeat"};
    t["border-radius"] = {"border-top-left-radius", "border-top-right-radius",
                          "border-bottom-right-radius", "border-bottom-left-radius"};
    t["background"] = {"background-color",  "background-image",  "background-repeat",
                       "background-attachment", "background-position", "background-size",
                       "background-origin", "background-clip"};
    t["background-position"] = {"background-position-x", "background-position-y"};
    t["font"] = {"font-style",   "font-variant", "font-weight",      "font-stretch",
                 "font-size",    "line-height",  "font-family",      "font-size-adjust",
                 "font-kerning", "font-variant-caps", "font-variant-numeric"};
    t["list-style"] = {"list-style-type", "list-style-position", "list-style-image"};
    t["outline"] = {"outline-color", "outline-style", "outline-width"};
    t["overflow"] = {"overflow-x", "overflow-y"};
    t["columns"] = {"column-width", "column-count"};
    t["column-rule"] = {"column-rule-width", "column-rule-style", "column-rule-color"};
    t["flex"] = {"flex-grow", "flex-shrink", "flex-basis"};
    t["flex-flow"] = {"flex-direction", "flex-wrap"};
    t["transition"] = {"transition-property", "transition-duration",
                       "transition-timing-function", "transition-delay"};
    t["animation"] = {"animation-name",          "animation-duration",  "animation-timing-function",
                      "animation-delay",         "animation-iteration-count",
                      "animation-direction",     "animation-fill-mode", "animation-play-state"};
    t["text-decoration"] = {"text-decoration-line", "text-decoration-color",
                            "text-decoration-style"};
    t["grid-template"] = {"grid-template-rows", "grid-template-columns", "grid-template-areas"};
    t["grid"] = {"grid-template", "grid-auto-rows", "grid-auto-columns", "grid-auto-flow"};
    t["grid-area"] = {"grid-row", "grid-column"};
    t["grid-row"] = {"grid-row-start", "grid-row-end"};
    t["grid-column"] = {"grid-column-start", "grid-column-end"};
    t["gap"] = {"row-gap", "column-gap"};
    t["grid-gap"] = {"row-gap", "column-gap"};
    t["place-items"] = {"align-items", "justify-items"};
    t["place-content"] = {"align-content", "justify-content"};
    t["place-self"] = {"align-self", "justify-self"};
    t["inset"] = {"top", "right", "bottom", "left"};
    return t;
  }();
  return kTable;
}

void expand(const std::string& name, std::set<std::string>& out) {
  const auto& t = shorthand_table();
  auto it = t.find(name);
  if (it == t.end()) {
    out.insert(name);
    return;
  }
  for (const auto& sub : it->second) expand(sub, out);
}

std::string strip_vendor(const std::string& n) {
  if (n.size() > 1 && n[0] == '-' && n[1] != '-') {
    size_t d = n.find('-', 1);
    if (d != std::string::npos) return n.substr(d + 1);
  }
  return n;
}

bool dash_prefix(const std::string& a, const std::string& b) {
  return b.size() > a.size() && b.compare(0, a.size(), a) == 0 && b[a.size()] == '-';
}

bool related_plain(const std::string& a, const std::string& b) {
  if (a == b || dash_prefix(a, b) || dash_prefix(b, a)) return true;
  const auto& la = longhand_leaves(a);
  const auto& lb = longhand_leaves(b);
  for (const auto& x : la)
    for (const auto& y : lb)
      if (x == y) return true;
  return false;
}

}  // namespace

const std::vector<std::string>& longhand_leaves(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, std::vector<std::string>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  std::vector<std::string> leaves;
  if (name == "all") {
    leaves = {"*"};
  } else {
    std::set<std::string> s;
    expand(name, s);
    leaves.assign(s.begin(), s.end());
  }
  return cache.emplace(name, std::move(leaves)).first->second;
}

bool related_property_names(const std::string& p1, const std::string& p2) {
  if (p1 == "all" || p2 == "all") return true;
  // Custom properties only interact by exact name.
  if (p1.rfind("--", 0) == 0 || p2.rfind("--", 0) == 0) return p1 == p2;
  if (related_plain(p1, p2)) return true;
  // Prefixed names are often aliases of the standard property.
  return related_plain(strip_vendor(p1), strip_vendor(p2));
}

}  // namespace cssmin
