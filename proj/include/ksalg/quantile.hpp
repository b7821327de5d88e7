#pragma once

#include <cstddef>
#include <vector>

#include "ksalg/expr.hpp"
#include "ksalg/network.hpp"

namespace ksalg {

/// Binary min/max gate DAG obtained by unrolling a comparator network.
///
/// Node ids below `width` are the inputs; every later id is a gate whose
/// operands have smaller ids. `outputs[c]` is the node driving channel c.
struct MinMaxCircuit {
  struct Gate {
    Op op;  // Op::Min or Op::Max
    std::size_t lhs;
    std::size_t rhs;
  };

  std::size_t width = 0;
  std::vector<Gate> gates;  // gate i has node id width + i
  std::vector<std::size_t> outputs;

  static MinMaxCircuit from_network(const ComparatorNetwork& net);

  /// Gates reachable from the given output channel, in topological order.
  std::vector<std::size_t> live_gates(std::size_t channel) const;

  /// Dead-code-eliminated tree for one output channel.
  Expr to_expr(std::size_t channel) const;
};

/// k-th smallest of n inputs (1-based k) as a tree of binary Min/Max nodes,
/// synthesised from `source`. Depth never exceeds source.depth().
/// Throws std::invalid_argument for a bad rank/width or a source that does not sort.
Expr quantile_circuit(std::size_t n, std::size_t k, const ComparatorNetwork& source);

enum class SecondLargestVariant { MinOfMaxes, MaxOfMins };

/// Second largest of n inputs by a depth-2 circuit of wide gates.
///
/// MinOfMaxes: min over the n maxima that each leave one input out.
/// MaxOfMins: max over all pairwise minima.
/// With n = 2 the single-operand gates collapse, so the result is Min(s0, s1)
/// of depth 1. Throws std::invalid_argument for n < 2.
Expr second_largest_depth2(std::size_t n, SecondLargestVariant variant);

}  // namespace ksalg
