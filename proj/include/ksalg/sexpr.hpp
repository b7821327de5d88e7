#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ksalg {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Untyped s-expression: either an atom or a parenthesised list.
struct SNode {
  bool is_list = false;
  std::string atom;
  std::vector<SNode> items;
  std::size_t line = 1;
  std::size_t column = 1;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, column, what); }
};

/// Reads exactly one s-expression; trailing non-whitespace is an error.
SNode read_sexpr(std::string_view text);

/// Parses "s<uint>"-style leaves; returns false if `atom` lacks the prefix.
bool parse_indexed_atom(const SNode& node, std::string_view prefix, std::size_t& index);

}  // namespace ksalg
