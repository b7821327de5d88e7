#include "ksalg/expr_text.hpp"

#include <stdexcept>

namespace ksalg {

namespace {

Expr from_sexpr(const SNode& node) {
  if (!node.is_list) {
    if (node.atom == "0") return Expr::zero();
    std::size_t index = 0;
    if (parse_indexed_atom(node, "s", index)) return Expr::input(index);
    node.fail("unknown atom '" + node.atom + "'");
  }
  if (node.items.empty()) node.fail("empty list");
  const SNode& head = node.items.front();
  if (head.is_list) head.fail("operator expected");
  Op op;
  std::size_t first_operand = 1;
  Alpha alpha;
  if (head.atom == "min") {
    op = Op::Min;
  } else if (head.atom == "max") {
    op = Op::Max;
  } else if (head.atom == "diff") {
    op = Op::Diff;
  } else if (head.atom == "mean") {
    op = Op::Mean;
    if (node.items.size() < 2) node.fail("mean requires an alpha");
    const SNode& lit = node.items[1];
    if (lit.is_list) lit.fail("alpha literal expected");
    try {
      alpha = parse_alpha(lit.atom);
    } catch (const std::invalid_argument& e) {
      lit.fail(e.what());
    }
    first_operand = 2;
  } else {
    head.fail("unknown operator '" + head.atom + "'");
  }
  std::vector<Expr> kids;
  for (std::size_t i = first_operand; i < node.items.size(); ++i) kids.push_back(from_sexpr(node.items[i]));
  try {
    return Expr::gate(op, std::move(kids), alpha);
  } catch (const std::invalid_argument& e) {
    node.fail(std::string("arity violation: ") + e.what());
  }
}

void print_into(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Zero:
      out += '0';
      return;
    case Op::Input:
      out += 's';
      out += std::to_string(e.index());
      return;
    case Op::Min:
      out += "(min";
      break;
    case Op::Max:
      out += "(max";
      break;
    case Op::Diff:
      out += "(diff";
      break;
    case Op::Mean:
      out += "(mean ";
      out += to_string(e.alpha());
      break;
  }
  for (const auto& c : e.children()) {
    out += ' ';
    print_into(c, out);
  }
  out += ')';
}

}  // namespace

Expr parse_expr(std::string_view text) { return from_sexpr(read_sexpr(text)); }

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

}  // namespace ksalg
