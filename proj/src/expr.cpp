#include "ksalg/expr.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "ksalg/means.hpp"

namespace ksalg {

struct Expr::Node {
  Op op = Op::Zero;
  std::size_t index = 0;
  Alpha alpha;
  std::vector<Expr> children;
};

Expr Expr::zero() {
  static const Expr instance(std::make_shared<const Node>(Node{}));
  return instance;
}

Expr Expr::input(std::size_t index) {
  return Expr(std::make_shared<const Node>(Node{Op::Input, index, {}, {}}));
}

Expr Expr::gate(Op op, std::vector<Expr> children, Alpha alpha) {
  switch (op) {
    case Op::Zero:
    case Op::Input:
      throw std::invalid_argument("gate() requires an operator node kind");
    case Op::Diff:
      if (children.size() != 2) {
        throw std::invalid_argument("diff takes exactly 2 operands, got " + std::to_string(children.size()));
      }
      break;
    case Op::Min:
    case Op::Max:
    case Op::Mean:
      if (children.size() < 2) {
        throw std::invalid_argument("min/max/mean take at least 2 operands, got " +
                                    std::to_string(children.size()));
      }
      break;
  }
  for (const auto& c : children) {
    if (!c.node_) throw std::invalid_argument("null child expression");
  }
  if (op != Op::Mean) alpha = {};
  return Expr(std::make_shared<const Node>(Node{op, 0, alpha, std::move(children)}));
}

Expr Expr::min(std::vector<Expr> children) { return gate(Op::Min, std::move(children)); }
Expr Expr::max(std::vector<Expr> children) { return gate(Op::Max, std::move(children)); }
Expr Expr::diff(Expr left, Expr right) { return gate(Op::Diff, {std::move(left), std::move(right)}); }
Expr Expr::mean(Alpha alpha, std::vector<Expr> children) { return gate(Op::Mean, std::move(children), alpha); }

Op Expr::op() const { return node_->op; }
std::size_t Expr::index() const { return node_->index; }
const Alpha& Expr::alpha() const { return node_->alpha; }
std::span<const Expr> Expr::children() const { return node_->children; }
bool Expr::is_leaf() const { return node_->op == Op::Zero || node_->op == Op::Input; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Zero:
      return true;
    case Op::Input:
      return x.index == y.index;
    case Op::Mean:
      if (!(x.alpha == y.alpha)) return false;
      [[fallthrough]];
    default:
      return x.children == y.children;
  }
}

namespace {

void collect_support(const Expr& e, std::set<std::size_t>& out) {
  if (e.op() == Op::Input) {
    out.insert(e.index());
    return;
  }
  for (const auto& c : e.children()) collect_support(c, out);
}

}  // namespace

std::set<std::size_t> support(const Expr& e) {
  std::set<std::size_t> out;
  collect_support(e, out);
  return out;
}

std::size_t size(const Expr& e) {
  std::size_t n = 1;
  for (const auto& c : e.children()) n += size(c);
  return n;
}

std::size_t depth(const Expr& e) {
  std::size_t d = 0;
  for (const auto& c : e.children()) d = std::max(d, depth(c) + 1);
  return d;
}

Degree homogeneity_degree(const Expr& e) {
  switch (e.op()) {
    case Op::Zero:
      return Degree::Zero;
    case Op::Input:
      return Degree::One;
    case Op::Diff: {
      Degree l = homogeneity_degree(e.children()[0]);
      Degree r = homogeneity_degree(e.children()[1]);
      return (l == r && l != Degree::Unknown) ? Degree::Zero : Degree::Unknown;
    }
    case Op::Min:
    case Op::Max:
    case Op::Mean: {
      auto kids = e.children();
      Degree first = homogeneity_degree(kids[0]);
      if (first == Degree::Unknown) return Degree::Unknown;
      for (std::size_t i = 1; i < kids.size(); ++i) {
        if (homogeneity_degree(kids[i]) != first) return Degree::Unknown;
      }
      return first;
    }
  }
  return Degree::Unknown;
}

double evaluate(const Expr& e, std::span<const double> frame) {
  switch (e.op()) {
    case Op::Zero:
      return 0.0;
    case Op::Input:
      if (e.index() >= frame.size()) {
        throw std::out_of_range("input s" + std::to_string(e.index()) + " outside frame of width " +
                                std::to_string(frame.size()));
      }
      return frame[e.index()];
    case Op::Diff:
      return evaluate(e.children()[0], frame) - evaluate(e.children()[1], frame);
    case Op::Min: {
      double v = evaluate(e.children()[0], frame);
      for (const auto& c : e.children().subspan(1)) v = std::min(v, evaluate(c, frame));
      return v;
    }
    case Op::Max: {
      double v = evaluate(e.children()[0], frame);
      for (const auto& c : e.children().subspan(1)) v = std::max(v, evaluate(c, frame));
      return v;
    }
    case Op::Mean: {
      auto kids = e.children();
      std::array<double, 16> small{};
      std::vector<double> large;
      std::span<double> vals;
      if (kids.size() <= small.size()) {
        vals = std::span<double>(small.data(), kids.size());
      } else {
        large.resize(kids.size());
        vals = large;
      }
      for (std::size_t i = 0; i < kids.size(); ++i) vals[i] = evaluate(kids[i], frame);
      return additive_mean(e.alpha(), vals);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// Walks preorder; `counter` is the number of nodes still to skip.
const Expr* find_preorder(const Expr& e, std::size_t& counter) {
  if (counter == 0) return &e;
  --counter;
  for (const auto& c : e.children()) {
    if (const Expr* hit = find_preorder(c, counter)) return hit;
  }
  return nullptr;
}

Expr replace_preorder(const Expr& e, std::size_t& counter, const Expr& replacement, bool& done) {
  if (counter == 0) {
    done = true;
    return replacement;
  }
  --counter;
  if (e.is_leaf()) return e;
  std::vector<Expr> kids(e.children().begin(), e.children().end());
  for (auto& c : kids) {
    c = replace_preorder(c, counter, replacement, done);
    if (done) return Expr::gate(e.op(), std::move(kids), e.alpha());
  }
  return e;
}

}  // namespace

const Expr& subtree_at(const Expr& e, std::size_t preorder_index) {
  std::size_t counter = preorder_index;
  const Expr* hit = find_preorder(e, counter);
  if (!hit) throw std::out_of_range("preorder index " + std::to_string(preorder_index) + " out of range");
  return *hit;
}

Expr replace_subtree(const Expr& e, std::size_t preorder_index, Expr replacement) {
  std::size_t counter = preorder_index;
  bool done = false;
  Expr out = replace_preorder(e, counter, replacement, done);
  if (!done) throw std::out_of_range("preorder index " + std::to_string(preorder_index) + " out of range");
  return out;
}

}  // namespace ksalg
