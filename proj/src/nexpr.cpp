#include "ksalg/nexpr.hpp"

#include <algorithm>
#include <stdexcept>

#include "ksalg/sexpr.hpp"

namespace ksalg {

struct NExpr::Node {
  NOp op = NOp::Input;
  std::size_t index = 0;
  std::vector<NExpr> children;
};

NExpr NExpr::input(std::size_t index) { return NExpr(std::make_shared<const Node>(Node{NOp::Input, index, {}})); }

NExpr NExpr::neg_input(std::size_t index) {
  return NExpr(std::make_shared<const Node>(Node{NOp::NegInput, index, {}}));
}

NExpr NExpr::neg(NExpr child) {
  return NExpr(std::make_shared<const Node>(Node{NOp::Neg, 0, {std::move(child)}}));
}

NExpr NExpr::gate(NOp op, std::vector<NExpr> children) {
  if (op != NOp::Min && op != NOp::Max && op != NOp::Avg) {
    throw std::invalid_argument("gate() requires min, max or avg");
  }
  if (children.size() < 2) throw std::invalid_argument("min/max/avg take at least 2 operands");
  return NExpr(std::make_shared<const Node>(Node{op, 0, std::move(children)}));
}

NExpr NExpr::min(std::vector<NExpr> children) { return gate(NOp::Min, std::move(children)); }
NExpr NExpr::max(std::vector<NExpr> children) { return gate(NOp::Max, std::move(children)); }
NExpr NExpr::avg(std::vector<NExpr> children) { return gate(NOp::Avg, std::move(children)); }

NOp NExpr::op() const { return node_->op; }
std::size_t NExpr::index() const { return node_->index; }
std::span<const NExpr> NExpr::children() const { return node_->children; }

bool operator==(const NExpr& a, const NExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->op != b.node_->op) return false;
  if (a.node_->op == NOp::Input || a.node_->op == NOp::NegInput) return a.node_->index == b.node_->index;
  return a.node_->children == b.node_->children;
}

namespace {

NExpr push_down(const NExpr& e, bool negated) {
  switch (e.op()) {
    case NOp::Input:
      return negated ? NExpr::neg_input(e.index()) : e;
    case NOp::NegInput:
      return negated ? NExpr::input(e.index()) : e;
    case NOp::Neg:
      return push_down(e.children()[0], !negated);
    case NOp::Min:
    case NOp::Max:
    case NOp::Avg:
      break;
  }
  NOp op = e.op();
  if (negated && op == NOp::Min) {
    op = NOp::Max;
  } else if (negated && op == NOp::Max) {
    op = NOp::Min;
  }
  std::vector<NExpr> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children()) kids.push_back(push_down(c, negated));
  return NExpr::gate(op, std::move(kids));
}

double leaf_value(std::size_t index, std::span<const double> frame) {
  if (index >= frame.size()) throw std::out_of_range("input index outside frame");
  double v = frame[index];
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("frame entry outside [0, 1]");
  return v;
}

}  // namespace

NExpr eliminate_negation(const NExpr& e) { return push_down(e, false); }

double evaluate_nexpr(const NExpr& e, std::span<const double> frame) {
  switch (e.op()) {
    case NOp::Input:
      return leaf_value(e.index(), frame);
    case NOp::NegInput:
      return 1.0 - leaf_value(e.index(), frame);
    case NOp::Neg:
      return 1.0 - evaluate_nexpr(e.children()[0], frame);
    case NOp::Min: {
      double v = evaluate_nexpr(e.children()[0], frame);
      for (const auto& c : e.children().subspan(1)) v = std::min(v, evaluate_nexpr(c, frame));
      return v;
    }
    case NOp::Max: {
      double v = evaluate_nexpr(e.children()[0], frame);
      for (const auto& c : e.children().subspan(1)) v = std::max(v, evaluate_nexpr(c, frame));
      return v;
    }
    case NOp::Avg: {
      double sum = 0.0;
      for (const auto& c : e.children()) sum += evaluate_nexpr(c, frame);
      return sum / static_cast<double>(e.children().size());
    }
  }
  throw std::logic_error("unreachable");
}

std::size_t size(const NExpr& e) {
  std::size_t n = 1;
  for (const auto& c : e.children()) n += size(c);
  return n;
}

std::size_t count_neg(const NExpr& e) {
  std::size_t n = e.op() == NOp::Neg ? 1 : 0;
  for (const auto& c : e.children()) n += count_neg(c);
  return n;
}

namespace {

NExpr from_sexpr(const SNode& node) {
  if (!node.is_list) {
    std::size_t index = 0;
    if (parse_indexed_atom(node, "ns", index)) return NExpr::neg_input(index);
    if (parse_indexed_atom(node, "s", index)) return NExpr::input(index);
    node.fail("unknown atom '" + node.atom + "'");
  }
  if (node.items.empty()) node.fail("empty list");
  const SNode& head = node.items.front();
  if (head.is_list) head.fail("operator expected");
  std::vector<NExpr> kids;
  for (std::size_t i = 1; i < node.items.size(); ++i) kids.push_back(from_sexpr(node.items[i]));
  if (head.atom == "neg") {
    if (kids.size() != 1) node.fail("arity violation: neg takes exactly 1 operand");
    return NExpr::neg(kids.front());
  }
  NOp op;
  if (head.atom == "min") {
    op = NOp::Min;
  } else if (head.atom == "max") {
    op = NOp::Max;
  } else if (head.atom == "avg") {
    op = NOp::Avg;
  } else {
    head.fail("unknown operator '" + head.atom + "'");
  }
  if (kids.size() < 2) node.fail("arity violation: " + head.atom + " takes at least 2 operands");
  return NExpr::gate(op, std::move(kids));
}

void print_into(const NExpr& e, std::string& out) {
  switch (e.op()) {
    case NOp::Input:
      out += "s" + std::to_string(e.index());
      return;
    case NOp::NegInput:
      out += "ns" + std::to_string(e.index());
      return;
    case NOp::Neg:
      out += "(neg";
      break;
    case NOp::Min:
      out += "(min";
      break;
    case NOp::Max:
      out += "(max";
      break;
    case NOp::Avg:
      out += "(avg";
      break;
  }
  for (const auto& c : e.children()) {
    out += ' ';
    print_into(c, out);
  }
  out += ')';
}

}  // namespace

NExpr parse_nexpr(std::string_view text) { return from_sexpr(read_sexpr(text)); }

std::string print_nexpr(const NExpr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

}  // namespace ksalg
