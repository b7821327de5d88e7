#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ksalg {

enum class NOp { Input, NegInput, Neg, Min, Max, Avg };

/// Fuzzy-style MIN-MAX-NEG-AVG expression over inputs normalised to [0, 1].
/// Neg(x) is 1 - x, NegInput i is 1 - s_i, Avg is the arithmetic mean.
///
/// Kept apart from Expr: negation is not an operator of the algebra, this type
/// only exists to show it can be pushed down to the inputs.
class NExpr {
 public:
  static NExpr input(std::size_t index);
  static NExpr neg_input(std::size_t index);
  static NExpr neg(NExpr child);
  static NExpr min(std::vector<NExpr> children);
  static NExpr max(std::vector<NExpr> children);
  static NExpr avg(std::vector<NExpr> children);
  /// Min/Max/Avg with at least two children.
  static NExpr gate(NOp op, std::vector<NExpr> children);

  NOp op() const;
  std::size_t index() const;
  std::span<const NExpr> children() const;

  friend bool operator==(const NExpr& a, const NExpr& b);

 private:
  struct Node;
  explicit NExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Pushes every negation to the leaves with the De Morgan identities
/// (neg min = max neg, neg max = min neg, neg avg = avg neg, neg neg = id).
/// The result has no Neg nodes and is never larger than the input.
NExpr eliminate_negation(const NExpr& e);

/// Throws std::domain_error if a frame entry read by e lies outside [0, 1],
/// std::out_of_range if an index is outside the frame.
double evaluate_nexpr(const NExpr& e, std::span<const double> frame);

std::size_t size(const NExpr& e);
std::size_t count_neg(const NExpr& e);

/// Grammar: "s"<uint> | "ns"<uint> | "(neg" e ")" | "(min"|"(max"|"(avg" e e+ ")".
NExpr parse_nexpr(std::string_view text);
std::string print_nexpr(const NExpr& e);

}  // namespace ksalg
