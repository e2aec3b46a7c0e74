#include "cssmin/stylesheet.hpp"

#include <cctype>

namespace cssmin {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && is_ws(s[a])) ++a;
  while (b > a && is_ws(s[b - 1])) --b;
  return s.substr(a, b - a);
}

// Collapses whitespace runs outside strings and drops comments.
std::string collapse(const std::string& s) {
  std::string out;
  bool pending = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      size_t e = s.find("*/", i + 2);
      i = e == std::string::npos ? s.size() : e + 1;
      pending = true;
      continue;
    }
    if (is_ws(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out += ' ';
    pending = false;
    if (c == '"' || c == '\'') {
      size_t j = i + 1;
      while (j < s.size() && s[j] != c) j += s[j] == '\\' ? 2 : 1;
      out += s.substr(i, std::min(j, s.size() - 1) - i + 1);
      i = j;
      continue;
    }
    out += c;
  }
  return out;
}

class Scanner {
 public:
  explicit Scanner(const std::string& s) : s_(s) {}

  size_t pos = 0;

  bool eof() const { return pos >= s_.size(); }
  char peek() const { return pos < s_.size() ? s_[pos] : '\0'; }

  void skip_ws_comments() {
    while (!eof()) {
      if (is_ws(peek())) {
        ++pos;
      } else if (s_.compare(pos, 2, "/*") == 0) {
        size_t e = s_.find("*/", pos + 2);
        if (e == std::string::npos) throw ParseError("unterminated comment", pos);
        pos = e + 2;
      } else if (s_.compare(pos, 4, "<!--") == 0) {
        pos += 4;
      } else if (s_.compare(pos, 3, "-->") == 0) {
        pos += 3;
      } else {
        break;
      }
    }
  }

  void skip_string() {
    char q = s_[pos++];
    while (!eof() && s_[pos] != q) {
      if (s_[pos] == '\\') ++pos;
      ++pos;
    }
    if (eof()) throw ParseError("unterminated string", pos);
    ++pos;
  }

  // Advances to the first top-level occurrence of one of `stops`; returns it or '\0' at eof.
  char scan_to(const char* stops) {
    int paren = 0, bracket = 0;
    while (!eof()) {
      char c = peek();
      if (c == '"' || c == '\'') {
        skip_string();
        continue;
      }
      if (s_.compare(pos, 2, "/*") == 0) {
        size_t e = s_.find("*/", pos + 2);
        if (e == std::string::npos) throw ParseError("unterminated comment", pos);
        pos = e + 2;
        continue;
      }
      if (c == '\\') {
        pos += 2;
        continue;
      }
      if (paren == 0 && bracket == 0) {
        for (const char* p = stops; *p; ++p)
          if (c == *p) return c;
      }
      if (c == '(') ++paren;
      else if (c == ')') paren = std::max(0, paren - 1);
      else if (c == '[') ++bracket;
      else if (c == ']') bracket = std::max(0, bracket - 1);
      ++pos;
    }
    return '\0';
  }

  // pos at '{'; moves past the matching '}'.
  void skip_block() {
    int depth = 0;
    while (!eof()) {
      char c = scan_to("{}");
      if (c == '\0') throw ParseError("unterminated block", pos);
      ++pos;
      if (c == '{') ++depth;
      else if (--depth == 0) return;
    }
  }

  std::string slice(size_t a, size_t b) const { return s_.substr(a, b - a); }

 private:
  const std::string& s_;
};

std::vector<std::string> split_declarations(const std::string& body) {
  std::vector<std::string> out;
  Scanner sc(body);
  size_t start = 0;
  while (true) {
    char c = sc.scan_to(";");
    out.push_back(sc.slice(start, sc.pos));
    if (c == '\0') break;
    ++sc.pos;
    start = sc.pos;
  }
  return out;
}

}  // namespace

std::string Declaration::text() const {
  return name + ":" + value + (important ? "!important" : "");
}

size_t Stylesheet::rule_count() const {
  size_t n = 0;
  for (const auto& it : items) n += it.passthrough ? 0 : 1;
  return n;
}

Declaration parse_declaration(const std::string& raw) {
  const std::string text = collapse(raw);  // drops comments, which may contain ':'
  size_t colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("expected ':' in declaration", 0);
  Declaration d;
  d.name = lower(trim(text.substr(0, colon)));
  if (d.name.empty()) throw ParseError("empty property name", 0);
  for (char c : d.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
          static_cast<unsigned char>(c) >= 0x80))
      throw ParseError("bad property name '" + d.name + "'", 0);
  }
  std::string v = collapse(text.substr(colon + 1));
  // Trailing "!important", with optional space after '!'.
  size_t bang = v.rfind('!');
  if (bang != std::string::npos) {
    std::string tail = lower(trim(v.substr(bang + 1)));
    if (tail == "important") {
      d.important = true;
      v = v.substr(0, bang);
    }
  }
  d.value = trim(v);
  if (d.value.empty()) throw ParseError("empty value for '" + d.name + "'", colon);
  return d;
}

Stylesheet parse_stylesheet(const std::string& text, bool lenient) {
  Stylesheet ss;
  Scanner sc(text);
  while (true) {
    sc.skip_ws_comments();
    if (sc.eof()) break;
    size_t start = sc.pos;
    if (sc.peek() == '@') {
      char c = sc.scan_to(";{");
      if (c == '\0') throw ParseError("unterminated at-rule", start);
      if (c == ';') ++sc.pos;
      else sc.skip_block();
      StyleItem it;
      it.passthrough = true;
      it.raw = collapse(sc.slice(start, sc.pos));
      ss.items.push_back(std::move(it));
      continue;
    }
    char c = sc.scan_to("{}");
    if (c != '{') throw ParseError("expected '{'", sc.pos);
    std::string prelude = sc.slice(start, sc.pos);
    size_t body_start = sc.pos + 1;
    sc.skip_block();
    std::string body = sc.slice(body_start, sc.pos - 1);
    StyleItem it;
    try {
      it.rule.selectors = parse_selector_group(prelude);
      for (const auto& part : split_declarations(body)) {
        if (trim(collapse(part)).empty()) continue;
        it.rule.decls.push_back(parse_declaration(part));
      }
    } catch (const ParseError& e) {
      if (!lenient) throw ParseError(std::string(e.what()) + " (rule at offset " +
                                         std::to_string(start) + ")",
                                     start + e.offset());
      it = StyleItem{};
      it.passthrough = true;
      it.raw = collapse(sc.slice(start, sc.pos));
    }
    if (!it.passthrough && it.rule.decls.empty()) continue;
    ss.items.push_back(std::move(it));
  }
  return ss;
}

std::string serialize(const Rule& r) {
  std::string out = serialize_group(r.selectors) + "{";
  for (size_t k = 0; k < r.decls.size(); ++k) {
    if (k) out += ';';
    out += r.decls[k].text();
  }
  return out + "}";
}

std::string serialize(const Stylesheet& ss) {
  std::string out;
  for (const auto& it : ss.items) out += it.passthrough ? it.raw : serialize(it.rule);
  return out;
}

int total_weight(const Stylesheet& ss) {
  int n = 0;
  for (char c : serialize(ss))
    if (!is_ws(c)) ++n;
  return n;
}

}  // namespace cssmin
