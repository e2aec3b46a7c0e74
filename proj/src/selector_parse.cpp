#include "cssmin/selector.hpp"

#include <cctype>
#include <cstdlib>

namespace cssmin {

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return is_name_start(c) || std::isdigit(c) || c == '-'; }
bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  std::vector<Selector> group() {
    std::vector<Selector> out;
    skip_ws();
    if (eof()) fail("empty selector");
    while (true) {
      out.push_back(selector());
      skip_ws();
      if (eof()) break;
      if (peek() != ',') fail("unexpected character '" + std::string(1, peek()) + "'");
      ++i_;
      skip_ws();
    }
    return out;
  }

 private:
  const std::string& s_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }
  bool eof() const { return i_ >= s_.size(); }
  char peek(size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
  void skip_ws() {
    while (!eof()) {
      if (is_ws(peek())) {
        ++i_;
      } else if (peek() == '/' && peek(1) == '*') {
        size_t e = s_.find("*/", i_ + 2);
        if (e == std::string::npos) fail("unterminated comment");
        i_ = e + 2;
      } else {
        break;
      }
    }
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  bool at_ident_start() const {
    unsigned char c = static_cast<unsigned char>(peek());
    if (is_name_start(c) || c == '\\') return true;
    if (c == '-') {
      unsigned char d = static_cast<unsigned char>(peek(1));
      return is_name_start(d) || d == '-' || d == '\\';
    }
    return false;
  }

  void escape_into(std::string& out) {
    ++i_;  // backslash
    if (eof()) fail("dangling escape");
    if (std::isxdigit(static_cast<unsigned char>(peek()))) {
      size_t st = i_;
      while (i_ - st < 6 && std::isxdigit(static_cast<unsigned char>(peek()))) ++i_;
      unsigned long cp = std::strtoul(s_.substr(st, i_ - st).c_str(), nullptr, 16);
      if (is_ws(peek())) ++i_;
      append_utf8(out, cp);
    } else {
      out += s_[i_++];
    }
  }

  std::string name() {
    std::string out;
    while (!eof()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_name_char(c)) {
        out += static_cast<char>(c);
        ++i_;
      } else if (c == '\\') {
        escape_into(out);
      } else {
        break;
      }
    }
    if (out.empty()) fail("expected name");
    return out;
  }

  std::string ident() {
    if (!at_ident_start()) fail("expected identifier");
    return name();
  }

  std::string string_lit() {
    char q = peek();
    ++i_;
    std::string out;
    while (true) {
      if (eof()) fail("unterminated string");
      char c = peek();
      if (c == q) {
        ++i_;
        break;
      }
      if (c == '\\') {
        if (peek(1) == '\n') {
          i_ += 2;
          continue;
        }
        escape_into(out);
        continue;
      }
      if (c == '\n') fail("newline in string");
      out += c;
      ++i_;
    }
    return out;
  }

  Selector selector() {
    Selector sel;
    sel.nodes.push_back(compound(sel));
    while (true) {
      size_t save = i_;
      bool had_ws = false;
      while (!eof() && (is_ws(peek()) || (peek() == '/' && peek(1) == '*'))) {
        had_ws = true;
        skip_ws();
      }
      if (eof() || peek() == ',') {
        i_ = save;
        skip_ws();
        break;
      }
      Combinator comb = Combinator::Descendant;
      if (peek() == '>' || peek() == '+' || peek() == '~') {
        char c = peek();
        ++i_;
        comb = c == '>' ? Combinator::Child : c == '+' ? Combinator::Neighbour : Combinator::Sibling;
        skip_ws();
      } else if (!had_ws) {
        fail("unexpected character '" + std::string(1, peek()) + "'");
      }
      if (sel.pe != PseudoElement::None) fail("pseudo-element must be last");
      sel.combs.push_back(comb);
      sel.nodes.push_back(compound(sel));
    }
    return sel;
  }

  // Reads "prefix|" if present.  Returns true and fills ns/any when a prefix was found.
  bool ns_prefix(std::string& ns, bool& any) {
    size_t save = i_;
    if (peek() == '|' && peek(1) != '=') {
      ++i_;
      ns.clear();
      any = false;
      return true;
    }
    if (peek() == '*' && peek(1) == '|' && peek(2) != '=') {
      i_ += 2;
      any = true;
      ns.clear();
      return true;
    }
    if (at_ident_start()) {
      std::string p = name();
      if (peek() == '|' && peek(1) != '=') {
        ++i_;
        ns = p;
        any = false;
        return true;
      }
    }
    i_ = save;
    return false;
  }

  bool type_selector(TypeSel& t) {
    if (!(peek() == '*' || peek() == '|' || at_ident_start())) return false;
    std::string ns;
    bool any_ns = false;
    bool has_ns = ns_prefix(ns, any_ns);
    if (peek() == '*') {
      ++i_;
      if (!has_ns || any_ns) {
        t.kind = TypeSel::Kind::Any;
      } else {
        t.kind = TypeSel::Kind::AnyInNs;
        t.ns = ns;
      }
      return true;
    }
    if (!at_ident_start()) {
      if (has_ns) fail("expected element name after namespace");
      return false;
    }
    std::string e = lower(name());
    if (!has_ns || any_ns) {
      t.kind = TypeSel::Kind::Element;
    } else {
      t.kind = TypeSel::Kind::NsElement;
      t.ns = ns;
    }
    t.elem = e;
    return true;
  }

  NodeSelector compound(Selector& sel) {
    NodeSelector n;
    bool any = type_selector(n.type);
    while (!eof()) {
      char c = peek();
      if (c == '#' || c == '.' || c == '[' || c == ':') {
        if (sel.pe != PseudoElement::None) fail("pseudo-element must be last");
        if (c == ':' && pseudo_element(sel)) {
          any = true;
          continue;
        }
        n.conds.push_back(simple(false));
        any = true;
      } else {
        break;
      }
    }
    if (!any) fail("expected selector");
    return n;
  }

  bool pseudo_element(Selector& sel) {
    size_t save = i_;
    bool dbl = peek(1) == ':';
    i_ += dbl ? 2 : 1;
    if (!at_ident_start()) {
      i_ = save;
      if (dbl) fail("expected pseudo-element name");
      return false;
    }
    std::string nm = lower(name());
    PseudoElement pe = PseudoElement::None;
    if (nm == "first-line") pe = PseudoElement::FirstLine;
    else if (nm == "first-letter") pe = PseudoElement::FirstLetter;
    else if (nm == "before") pe = PseudoElement::Before;
    else if (nm == "after") pe = PseudoElement::After;
    if (pe == PseudoElement::None) {
      if (dbl) {
        i_ = save;
        fail("unsupported pseudo-element '" + nm + "'");
      }
      i_ = save;
      return false;
    }
    sel.pe = pe;
    sel.pe_legacy = !dbl;
    return true;
  }

  Condition simple(bool in_not) {
    Condition c;
    char ch = peek();
    if (ch == '#') {
      ++i_;
      c.kind = Condition::Kind::Attr;
      c.attr = "id";
      c.op = AttrOp::Equals;
      c.value = name();
      c.shorthand = Condition::Shorthand::Id;
    } else if (ch == '.') {
      ++i_;
      c.kind = Condition::Kind::Attr;
      c.attr = "class";
      c.op = AttrOp::Includes;
      c.value = ident();
      c.shorthand = Condition::Shorthand::Class;
    } else if (ch == '[') {
      attribute(c);
    } else if (ch == ':') {
      ++i_;
      if (peek() == ':') fail("pseudo-element not allowed here");
      pseudo(c, in_not);
    } else {
      fail("expected simple selector");
    }
    return c;
  }

  void attribute(Condition& c) {
    expect('[');
    skip_ws();
    std::string ns;
    bool any = false;
    if (ns_prefix(ns, any)) {
      c.attr_any_ns = any;
      c.attr_ns = ns;
    }
    c.attr = lower(ident());
    skip_ws();
    if (peek() == ']') {
      ++i_;
      c.kind = Condition::Kind::AttrExists;
      return;
    }
    c.kind = Condition::Kind::Attr;
    char o = peek();
    if (o == '=') {
      c.op = AttrOp::Equals;
      ++i_;
    } else {
      if (peek(1) != '=') fail("expected attribute operator");
      switch (o) {
        case '~': c.op = AttrOp::Includes; break;
        case '|': c.op = AttrOp::DashMatch; break;
        case '^': c.op = AttrOp::Prefix; break;
        case '$': c.op = AttrOp::Suffix; break;
        case '*': c.op = AttrOp::Substring; break;
        default: fail("expected attribute operator");
      }
      i_ += 2;
    }
    skip_ws();
    if (peek() == '"' || peek() == '\'') {
      c.value = string_lit();
    } else {
      c.value = ident();
    }
    skip_ws();
    if (peek() == 'i' || peek() == 'I') fail("attribute case flags unsupported");
    expect(']');
  }

  void nth_args(long& a, long& b) {
    skip_ws();
    size_t st = i_;
    std::string tok;
    while (!eof() && peek() != ')') tok += s_[i_++];
    std::string t;
    for (char ch : tok)
      if (!is_ws(ch)) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto bad = [&] {
      i_ = st;
      fail("malformed an+b");
    };
    if (t == "odd") {
      a = 2, b = 1;
      return;
    }
    if (t == "even") {
      a = 2, b = 0;
      return;
    }
    if (t.empty()) bad();
    size_t npos = t.find('n');
    auto parse_int = [&](const std::string& x, long& out) {
      if (x.empty()) bad();
      size_t k = 0;
      bool neg = false;
      if (x[0] == '+' || x[0] == '-') {
        neg = x[0] == '-';
        k = 1;
      }
      if (k >= x.size()) bad();
      long v = 0;
      for (; k < x.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(x[k]))) bad();
        v = v * 10 + (x[k] - '0');
        if (v > 1000000) bad();
      }
      out = neg ? -v : v;
    };
    if (npos == std::string::npos) {
      a = 0;
      parse_int(t, b);
      return;
    }
    std::string co = t.substr(0, npos);
    if (co.empty() || co == "+") a = 1;
    else if (co == "-") a = -1;
    else parse_int(co, a);
    std::string rest = t.substr(npos + 1);
    if (rest.empty()) {
      b = 0;
    } else {
      if (rest[0] != '+' && rest[0] != '-') bad();
      parse_int(rest, b);
    }
  }

  void pseudo(Condition& c, bool in_not) {
    std::string nm = lower(ident());
    using K = Condition::Kind;
    if (peek() == '(') {
      ++i_;
      if (nm == "not") {
        if (in_not) fail("nested negation");
        skip_ws();
        Condition inner;
        TypeSel t;
        if (type_selector(t)) {
          skip_ws();
          if (peek() != ')') fail("negation of compound selector");
          inner.kind = K::Type;
          inner.type = t;
        } else {
          inner = simple(true);
          skip_ws();
          if (peek() != ')') fail("negation of compound selector");
        }
        ++i_;
        inner.negated = true;
        c = inner;
        return;
      }
      if (nm == "lang") {
        skip_ws();
        c.kind = K::Lang;
        c.value = ident();
        skip_ws();
        expect(')');
        return;
      }
      if (nm == "nth-child") c.kind = K::NthChild;
      else if (nm == "nth-last-child") c.kind = K::NthLastChild;
      else if (nm == "nth-of-type") c.kind = K::NthOfType;
      else if (nm == "nth-last-of-type") c.kind = K::NthLastOfType;
      else fail("unsupported pseudo-class '" + nm + "()'");
      nth_args(c.a, c.b);
      expect(')');
      return;
    }
    static const std::pair<const char*, PseudoClass> kPcs[] = {
        {"link", PseudoClass::Link},       {"visited", PseudoClass::Visited},
        {"hover", PseudoClass::Hover},     {"active", PseudoClass::Active},
        {"focus", PseudoClass::Focus},     {"target", PseudoClass::Target},
        {"enabled", PseudoClass::Enabled}, {"disabled", PseudoClass::Disabled},
        {"checked", PseudoClass::Checked}, {"root", PseudoClass::Root},
        {"empty", PseudoClass::Empty}};
    for (auto& [n, pc] : kPcs) {
      if (nm == n) {
        c.kind = K::Pseudo;
        c.pc = pc;
        return;
      }
    }
    if (nm == "first-child") c.kind = K::FirstChild;
    else if (nm == "last-child") c.kind = K::LastChild;
    else if (nm == "first-of-type") c.kind = K::FirstOfType;
    else if (nm == "last-of-type") c.kind = K::LastOfType;
    else if (nm == "only-child") c.kind = K::OnlyChild;
    else if (nm == "only-of-type") c.kind = K::OnlyOfType;
    else fail("unsupported pseudo-class ':" + nm + "'");
  }
};

}  // namespace

std::vector<Selector> parse_selector_group(const std::string& text) {
  return Parser(text).group();
}

Selector parse_selector(const std::string& text) {
  auto g = parse_selector_group(text);
  if (g.size() != 1) throw ParseError("expected a single selector", 0);
  return g[0];
}

}  // namespace cssmin
