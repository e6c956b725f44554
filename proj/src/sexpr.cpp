#include "mmk/sexpr.hpp"

namespace mmk {

const Sexpr& Sexpr::at(size_t i) const {
  if (atom || i >= items.size()) throw std::runtime_error("sexpr: index out of range");
  return items[i];
}

const std::string& Sexpr::head() const {
  if (atom || items.empty() || !items[0].atom) throw std::runtime_error("sexpr: no head symbol");
  return items[0].text;
}

namespace {

struct Reader {
  const std::string& s;
  size_t pos = 0;

  void skip_space() {
    while (pos < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[pos]))) {
        ++pos;
      } else if (s[pos] == ';') {  // comment to end of line
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  Sexpr read() {
    skip_space();
    if (pos >= s.size()) throw SexprError("unexpected end of input", pos);
    if (s[pos] == '(') {
      ++pos;
      Sexpr list;
      while (true) {
        skip_space();
        if (pos >= s.size()) throw SexprError("unterminated list", pos);
        if (s[pos] == ')') {
          ++pos;
          return list;
        }
        list.items.push_back(read());
      }
    }
    if (s[pos] == ')') throw SexprError("unexpected ')'", pos);
    Sexpr a;
    a.atom = true;
    if (s[pos] == '"') {
      ++pos;
      while (pos < s.size() && s[pos] != '"') a.text += s[pos++];
      if (pos >= s.size()) throw SexprError("unterminated string", pos);
      ++pos;
      return a;
    }
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
           s[pos] != ')' && s[pos] != ';') {
      a.text += s[pos++];
    }
    return a;
  }
};

bool needs_quotes(const std::string& t) {
  if (t.empty()) return true;
  for (char c : t) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"') return true;
  }
  return false;
}

}  // namespace

Sexpr parse_sexpr(const std::string& text) {
  Reader r{text};
  Sexpr e = r.read();
  r.skip_space();
  if (r.pos != text.size()) throw SexprError("trailing input", r.pos);
  return e;
}

std::vector<Sexpr> parse_sexpr_list(const std::string& text) {
  Reader r{text};
  std::vector<Sexpr> out;
  while (true) {
    r.skip_space();
    if (r.pos >= text.size()) break;
    out.push_back(r.read());
  }
  return out;
}

std::string to_string(const Sexpr& s) {
  if (s.atom) {
    if (needs_quotes(s.text)) return "\"" + s.text + "\"";
    return s.text;
  }
  std::string out = "(";
  for (size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(s.items[i]);
  }
  out += ')';
  return out;
}

}  // namespace mmk
