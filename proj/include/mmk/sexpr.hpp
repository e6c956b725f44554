#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mmk {

// Minimal s-expression values: an atom (symbol, number or quoted string) or a
// parenthesized list. Quoted strings keep their text without the quotes.
struct Sexpr {
  bool atom = false;
  std::string text;          // atom payload
  std::vector<Sexpr> items;  // list payload

  bool is_list() const { return !atom; }
  const Sexpr& at(size_t i) const;
  size_t size() const { return items.size(); }
  const std::string& head() const;
};

struct SexprError : std::runtime_error {
  size_t offset;
  SexprError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

Sexpr parse_sexpr(const std::string& text);
// Parses a whole file that may contain several toplevel forms.
std::vector<Sexpr> parse_sexpr_list(const std::string& text);
std::string to_string(const Sexpr& s);

}  // namespace mmk
