#include <cctype>
#include <cstdio>

#include "cssmin/selector.hpp"

namespace cssmin {

const char* pseudo_class_name(PseudoClass pc) {
  static const char* kNames[] = {"link",    "visited",  "hover",   "active", "focus", "target",
                                 "enabled", "disabled", "checked", "root",   "empty"};
  return kNames[static_cast<int>(pc)];
}

const char* attr_op_text(AttrOp op) {
  switch (op) {
    case AttrOp::Equals: return "=";
    case AttrOp::Includes: return "~=";
    case AttrOp::DashMatch: return "|=";
    case AttrOp::Prefix: return "^=";
    case AttrOp::Suffix: return "$=";
    case AttrOp::Substring: return "*=";
  }
  return "=";
}

bool Condition::is_positional() const {
  switch (kind) {
    case Kind::NthChild:
    case Kind::NthLastChild:
    case Kind::NthOfType:
    case Kind::NthLastOfType:
    case Kind::OnlyChild:
    case Kind::OnlyOfType:
    case Kind::FirstChild:
    case Kind::LastChild:
    case Kind::FirstOfType:
    case Kind::LastOfType:
      return true;
    default:
      return false;
  }
}

namespace {

bool name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

void hex_escape(std::string& out, unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\%x ", c);
  out += buf;
}

// Escapes a name token; leading-digit rules apply only to identifiers.
std::string escape_name(const std::string& s, bool ident) {
  std::string out;
  for (size_t k = 0; k < s.size(); ++k) {
    unsigned char c = static_cast<unsigned char>(s[k]);
    bool lead_digit = ident && std::isdigit(c) &&
                      (k == 0 || (k == 1 && s[0] == '-'));
    if (lead_digit || c < 0x20 || c == 0x7f) {
      hex_escape(out, c);
    } else if (name_char(c)) {
      out += static_cast<char>(c);
    } else {
      out += '\\';
      out += static_cast<char>(c);
    }
  }
  if (ident && s == "-") return "\\-";
  return out;
}

std::string nth_text(long a, long b) {
  if (a == 0) return std::to_string(b);
  if (a == 2 && b == 1) return "odd";
  std::string out;
  if (a == 1) out = "n";
  else if (a == -1) out = "-n";
  else out = std::to_string(a) + "n";
  if (b > 0) out += "+" + std::to_string(b);
  else if (b < 0) out += std::to_string(b);
  return out;
}

std::string attr_value_text(const std::string& v) {
  if (is_plain_ident(v)) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\a ";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string positive_text(const Condition& c) {
  using K = Condition::Kind;
  switch (c.kind) {
    case K::Type: return serialize(c.type);
    case K::AttrExists:
    case K::Attr: {
      if (c.kind == K::Attr && !c.attr_any_ns && c.attr_ns.empty()) {
        if (c.shorthand == Condition::Shorthand::Class) return "." + escape_ident(c.value);
        if (c.shorthand == Condition::Shorthand::Id) return "#" + escape_name(c.value, false);
      }
      std::string out = "[";
      if (c.attr_any_ns) out += "*|";
      else if (!c.attr_ns.empty()) out += escape_ident(c.attr_ns) + "|";
      out += escape_ident(c.attr);
      if (c.kind == K::Attr) out += std::string(attr_op_text(c.op)) + attr_value_text(c.value);
      return out + "]";
    }
    case K::Pseudo: return std::string(":") + pseudo_class_name(c.pc);
    case K::NthChild: return ":nth-child(" + nth_text(c.a, c.b) + ")";
    case K::NthLastChild: return ":nth-last-child(" + nth_text(c.a, c.b) + ")";
    case K::NthOfType: return ":nth-of-type(" + nth_text(c.a, c.b) + ")";
    case K::NthLastOfType: return ":nth-last-of-type(" + nth_text(c.a, c.b) + ")";
    case K::OnlyChild: return ":only-child";
    case K::OnlyOfType: return ":only-of-type";
    case K::FirstChild: return ":first-child";
    case K::LastChild: return ":last-child";
    case K::FirstOfType: return ":first-of-type";
    case K::LastOfType: return ":last-of-type";
    case K::Lang: return ":lang(" + escape_ident(c.value) + ")";
  }
  return "";
}

const char* pe_name(PseudoElement pe) {
  switch (pe) {
    case PseudoElement::FirstLine: return "first-line";
    case PseudoElement::FirstLetter: return "first-letter";
    case PseudoElement::Before: return "before";
    case PseudoElement::After: return "after";
    default: return "";
  }
}

void count_condition(const Condition& c, Specificity& sp) {
  if (c.synthetic) return;
  if (c.kind == Condition::Kind::Type) {
    if (c.type.kind == TypeSel::Kind::Element || c.type.kind == TypeSel::Kind::NsElement) ++sp.types;
    return;
  }
  if (c.kind == Condition::Kind::Attr && c.shorthand == Condition::Shorthand::Id) {
    ++sp.ids;
    return;
  }
  ++sp.classes;
}

}  // namespace

bool is_plain_ident(const std::string& s) {
  if (s.empty()) return false;
  size_t k = 0;
  if (s[0] == '-') {
    if (s.size() == 1) return false;
    k = 1;
  }
  unsigned char f = static_cast<unsigned char>(s[k]);
  if (!(std::isalpha(f) || f == '_' || f >= 0x80 || (k == 1 && f == '-'))) return false;
  for (; k < s.size(); ++k)
    if (!name_char(static_cast<unsigned char>(s[k]))) return false;
  return true;
}

std::string escape_ident(const std::string& s) { return escape_name(s, true); }

std::string serialize(const TypeSel& t) {
  switch (t.kind) {
    case TypeSel::Kind::Any: return "*";
    case TypeSel::Kind::AnyInNs: return escape_ident(t.ns) + "|*";
    case TypeSel::Kind::Element: return escape_ident(t.elem);
    case TypeSel::Kind::NsElement: return escape_ident(t.ns) + "|" + escape_ident(t.elem);
  }
  return "*";
}

std::string serialize(const Condition& c) {
  if (c.negated) return ":not(" + positive_text(c) + ")";
  return positive_text(c);
}

std::string serialize(const NodeSelector& n) {
  std::string conds;
  for (const auto& c : n.conds)
    if (!c.synthetic) conds += serialize(c);
  if (n.type.is_any() && !conds.empty()) return conds;
  return serialize(n.type) + conds;
}

std::string serialize(const Selector& s) {
  std::string out = serialize(s.nodes[0]);
  for (size_t k = 0; k < s.combs.size(); ++k) {
    switch (s.combs[k]) {
      case Combinator::Descendant: out += ' '; break;
      case Combinator::Child: out += '>'; break;
      case Combinator::Neighbour: out += '+'; break;
      case Combinator::Sibling: out += '~'; break;
    }
    out += serialize(s.nodes[k + 1]);
  }
  if (s.pe != PseudoElement::None) {
    // "*::before" reads better as "::before".
    if (out == "*") out.clear();
    out += s.pe_legacy ? ":" : "::";
    out += pe_name(s.pe);
  }
  return out;
}

std::string serialize_group(const std::vector<Selector>& g) {
  std::string out;
  for (size_t k = 0; k < g.size(); ++k) {
    if (k) out += ',';
    out += serialize(g[k]);
  }
  return out;
}

Specificity specificity(const Selector& s, bool important) {
  Specificity sp;
  sp.important = important ? 1 : 0;
  for (const auto& n : s.nodes) {
    if (n.type.kind == TypeSel::Kind::Element || n.type.kind == TypeSel::Kind::NsElement) ++sp.types;
    for (const auto& c : n.conds) count_condition(c, sp);
  }
  if (s.pe != PseudoElement::None) ++sp.types;
  return sp;
}

Selector normalize(const Selector& s) {
  Selector out = s;
  using K = Condition::Kind;
  for (auto& n : out.nodes) {
    for (auto& c : n.conds) {
      switch (c.kind) {
        case K::FirstChild: c.kind = K::NthChild; c.a = 0; c.b = 1; break;
        case K::LastChild: c.kind = K::NthLastChild; c.a = 0; c.b = 1; break;
        case K::FirstOfType: c.kind = K::NthOfType; c.a = 0; c.b = 1; break;
        case K::LastOfType: c.kind = K::NthLastOfType; c.a = 0; c.b = 1; break;
        case K::Lang:
          c.kind = K::Attr;
          c.attr_any_ns = false;
          c.attr_ns = kLangNamespace;
          c.attr = "lang";
          c.op = AttrOp::DashMatch;
          break;
        default: break;
      }
    }
  }
  if (out.pe == PseudoElement::FirstLine || out.pe == PseudoElement::FirstLetter) {
    auto& conds = out.nodes.back().conds;
    bool have = false;
    for (const auto& c : conds) have = have || c.synthetic;
    if (!have) {
      Condition ne;
      ne.kind = K::Pseudo;
      ne.pc = PseudoClass::Empty;
      ne.negated = true;
      ne.synthetic = true;
      conds.push_back(ne);
    }
  }
  return out;
}

int text_weight(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (!(c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f')) ++n;
  return n + 1;
}

int selector_text_length(const Selector& s) { return text_weight(serialize(s)); }

}  // namespace cssmin
