#include "ksalg/sexpr.hpp"

#include <cctype>
#include <charconv>

namespace ksalg {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SNode read_one() {
    skip_space();
    if (at_end()) throw ParseError(line_, column_, "unexpected end of input");
    SNode node;
    node.line = line_;
    node.column = column_;
    char ch = text_[pos_];
    if (ch == ')') throw ParseError(line_, column_, "unexpected ')'");
    if (ch == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (at_end()) throw ParseError(node.line, node.column, "unclosed '('");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read_one());
      }
      return node;
    }
    while (!at_end() && !is_delim(text_[pos_])) {
      node.atom.push_back(text_[pos_]);
      advance();
    }
    return node;
  }

  void expect_end() {
    skip_space();
    if (!at_end()) throw ParseError(line_, column_, "trailing input after expression");
  }

 private:
  static bool is_delim(char ch) {
    return ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch));
  }
  bool at_end() const { return pos_ >= text_.size(); }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

SNode read_sexpr(std::string_view text) {
  Reader reader(text);
  SNode node = reader.read_one();
  reader.expect_end();
  return node;
}

bool parse_indexed_atom(const SNode& node, std::string_view prefix, std::size_t& index) {
  if (node.is_list || node.atom.size() <= prefix.size() || node.atom.compare(0, prefix.size(), prefix) != 0) {
    return false;
  }
  const char* first = node.atom.data() + prefix.size();
  const char* last = node.atom.data() + node.atom.size();
  if (!std::isdigit(static_cast<unsigned char>(*first))) return false;
  auto [ptr, ec] = std::from_chars(first, last, index);
  if (ec == std::errc::result_out_of_range) node.fail("input index out of range in '" + node.atom + "'");
  if (ec != std::errc{} || ptr != last) node.fail("malformed input leaf '" + node.atom + "'");
  return true;
}

}  // namespace ksalg
