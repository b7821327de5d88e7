#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "ksalg/alpha.hpp"

namespace ksalg {

enum class Op { Zero, Input, Min, Max, Diff, Mean };

/// Immutable expression of the min/max/difference/mean algebra over indexed
/// spectral inputs and the constant zero.
///
/// Copies share structure. Construction validates arity: Min, Max and Mean
/// take at least two children, Diff exactly two.
class Expr {
 public:
  static Expr zero();
  static Expr input(std::size_t index);
  static Expr min(std::vector<Expr> children);
  static Expr max(std::vector<Expr> children);
  static Expr diff(Expr left, Expr right);
  static Expr mean(Alpha alpha, std::vector<Expr> children);
  /// Generic gate constructor for Min/Max/Mean/Diff; alpha is ignored unless op is Mean.
  static Expr gate(Op op, std::vector<Expr> children, Alpha alpha = {});

  Op op() const;
  /// Channel id of an Input leaf.
  std::size_t index() const;
  /// Exponent of a Mean node.
  const Alpha& alpha() const;
  std::span<const Expr> children() const;
  bool is_leaf() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Channels the expression reads.
std::set<std::size_t> support(const Expr& e);

/// Number of nodes when viewed as a tree.
std::size_t size(const Expr& e);

/// Longest root-to-leaf path in edges; leaves have depth 0.
std::size_t depth(const Expr& e);

enum class Degree { Zero, One, Unknown };

/// Conservative syntactic degree of additive homogeneity: One means
/// f(s + c) = f(s) + c, Zero means f(s + c) = f(s). Unknown claims nothing.
Degree homogeneity_degree(const Expr& e);

/// Throws std::out_of_range if an Input index is outside the frame.
double evaluate(const Expr& e, std::span<const double> frame);

/// Subtree at a preorder position (root is 0). Throws std::out_of_range.
const Expr& subtree_at(const Expr& e, std::size_t preorder_index);

/// Copy of e with the subtree at a preorder position swapped for replacement.
Expr replace_subtree(const Expr& e, std::size_t preorder_index, Expr replacement);

}  // namespace ksalg
