#include "ksalg/quantile.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace ksalg {

MinMaxCircuit MinMaxCircuit::from_network(const ComparatorNetwork& net) {
  MinMaxCircuit c;
  c.width = net.width();
  c.outputs.resize(c.width);
  for (std::size_t i = 0; i < c.width; ++i) c.outputs[i] = i;
  for (const auto& layer : net.layers()) {
    for (const auto& cmp : layer) {
      const std::size_t a = c.outputs[cmp.low];
      const std::size_t b = c.outputs[cmp.high];
      c.gates.push_back({Op::Min, a, b});
      c.outputs[cmp.low] = c.width + c.gates.size() - 1;
      c.gates.push_back({Op::Max, a, b});
      c.outputs[cmp.high] = c.width + c.gates.size() - 1;
    }
  }
  return c;
}

std::vector<std::size_t> MinMaxCircuit::live_gates(std::size_t channel) const {
  if (channel >= width) throw std::out_of_range("output channel out of range");
  std::vector<bool> live(width + gates.size(), false);
  live[outputs[channel]] = true;
  // Operands always precede their gate, so one backward sweep suffices.
  for (std::size_t id = width + gates.size(); id-- > width;) {
    if (!live[id]) continue;
    const Gate& g = gates[id - width];
    live[g.lhs] = true;
    live[g.rhs] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t id = width; id < live.size(); ++id) {
    if (live[id]) out.push_back(id);
  }
  return out;
}

Expr MinMaxCircuit::to_expr(std::size_t channel) const {
  std::map<std::size_t, Expr> built;
  for (std::size_t i = 0; i < width; ++i) built.emplace(i, Expr::input(i));
  for (std::size_t id : live_gates(channel)) {
    const Gate& g = gates[id - width];
    built.emplace(id, Expr::gate(g.op, {built.at(g.lhs), built.at(g.rhs)}));
  }
  return built.at(outputs[channel]);
}

Expr quantile_circuit(std::size_t n, std::size_t k, const ComparatorNetwork& source) {
  if (source.width() != n) {
    throw std::invalid_argument("source network width " + std::to_string(source.width()) +
                                " does not match n = " + std::to_string(n));
  }
  if (k < 1 || k > n) throw std::invalid_argument("rank k must be in 1.." + std::to_string(n));
  if (!verify_sorts(source)) throw std::invalid_argument("source network does not sort");
  return MinMaxCircuit::from_network(source).to_expr(k - 1);
}

namespace {

Expr wide(Op op, std::vector<Expr> operands) {
  if (operands.size() == 1) return operands.front();
  return Expr::gate(op, std::move(operands));
}

}  // namespace

Expr second_largest_depth2(std::size_t n, SecondLargestVariant variant) {
  if (n < 2) throw std::invalid_argument("second largest needs at least 2 inputs");
  std::vector<Expr> terms;
  if (variant == SecondLargestVariant::MinOfMaxes) {
    for (std::size_t skip = 0; skip < n; ++skip) {
      std::vector<Expr> operands;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != skip) operands.push_back(Expr::input(i));
      }
      terms.push_back(wide(Op::Max, std::move(operands)));
    }
    return wide(Op::Min, std::move(terms));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) terms.push_back(Expr::min({Expr::input(i), Expr::input(j)}));
  }
  return wide(Op::Max, std::move(terms));
}

}  // namespace ksalg
