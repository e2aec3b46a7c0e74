#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cssmin {

enum class Combinator : uint8_t { Descendant, Child, Neighbour, Sibling };

enum class PseudoElement : uint8_t { None, FirstLine, FirstLetter, Before, After };

// Order matters: bit positions in NodeLabel::pcs.
enum class PseudoClass : uint8_t {
  Link, Visited, Hover, Active, Focus, Target, Enabled, Disabled, Checked, Root, Empty
};
constexpr int kNumPseudoClasses = 11;
const char* pseudo_class_name(PseudoClass pc);

enum class AttrOp : uint8_t { Equals, Includes, DashMatch, Prefix, Suffix, Substring };
const char* attr_op_text(AttrOp op);

// Namespace reserved for the :lang() rewrite.
inline constexpr const char* kLangNamespace = "__lang";

struct TypeSel {
  enum class Kind : uint8_t { Any, AnyInNs, Element, NsElement };
  Kind kind = Kind::Any;
  std::string ns;
  std::string elem;

  bool is_any() const { return kind == Kind::Any; }
  bool operator==(const TypeSel&) const = default;
};

struct Condition {
  enum class Kind : uint8_t {
    Type,           // only under negation
    AttrExists,
    Attr,
    Pseudo,
    NthChild,
    NthLastChild,
    NthOfType,
    NthLastOfType,
    OnlyChild,
    OnlyOfType,
    // surface syntax, removed by normalize()
    FirstChild,
    LastChild,
    FirstOfType,
    LastOfType,
    Lang,
  };
  enum class Shorthand : uint8_t { None, Class, Id };

  Kind kind = Kind::AttrExists;
  bool negated = false;
  // Added by normalize() for ::first-line/::first-letter; not serialized, not counted.
  bool synthetic = false;
  Shorthand shorthand = Shorthand::None;

  TypeSel type;
  // attr_any_ns: "*|a".  Otherwise attr_ns names the namespace; "" is no namespace.
  bool attr_any_ns = false;
  std::string attr_ns;
  std::string attr;
  AttrOp op = AttrOp::Equals;
  std::string value;
  PseudoClass pc = PseudoClass::Link;
  long a = 0, b = 0;

  bool is_positional() const;
  bool is_attribute() const { return kind == Kind::AttrExists || kind == Kind::Attr; }
  bool operator==(const Condition&) const = default;
};

struct NodeSelector {
  TypeSel type;
  std::vector<Condition> conds;
  bool operator==(const NodeSelector&) const = default;
};

struct Selector {
  std::vector<NodeSelector> nodes;     // nodes.size() == combs.size() + 1
  std::vector<Combinator> combs;       // combs[i] sits between nodes[i] and nodes[i+1]
  PseudoElement pe = PseudoElement::None;
  bool pe_legacy = false;              // written as ":before" rather than "::before"

  const NodeSelector& subject() const { return nodes.back(); }
  bool operator==(const Selector&) const = default;
};

struct Specificity {
  int important = 0, ids = 0, classes = 0, types = 0;
  auto operator<=>(const Specificity&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

std::vector<Selector> parse_selector_group(const std::string& text);
Selector parse_selector(const std::string& text);

Specificity specificity(const Selector& s, bool important);
Selector normalize(const Selector& s);

std::string serialize(const Selector& s);
std::string serialize(const NodeSelector& n);
std::string serialize(const Condition& c);
std::string serialize(const TypeSel& t);
std::string serialize_group(const std::vector<Selector>& g);

// Number of non-whitespace characters plus one.
int text_weight(const std::string& canonical_text);
int selector_text_length(const Selector& s);

// CSS identifier escaping used by the serializer.
std::string escape_ident(const std::string& s);
bool is_plain_ident(const std::string& s);

}  // namespace cssmin
