#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ksalg/expr_text.hpp"
#include "ksalg/quantile.hpp"

using namespace ksalg;

namespace {

double kth(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end());
  return v[k - 1];
}

bool only_binary_min_max(const Expr& e) {
  if (e.op() == Op::Input) return true;
  if ((e.op() != Op::Min && e.op() != Op::Max) || e.children().size() != 2) return false;
  return std::all_of(e.children().begin(), e.children().end(), only_binary_min_max);
}

}  // namespace

TEST_CASE("two-input quantiles") {
  const auto net = batcher_bitonic(2);
  CHECK(quantile_circuit(2, 1, net) == Expr::min({Expr::input(0), Expr::input(1)}));
  CHECK(print_expr(quantile_circuit(2, 2, net)) == "(max s0 s1)");
  CHECK(quantile_circuit(1, 1, batcher_bitonic(1)) == Expr::input(0));
}

TEST_CASE("second smallest of four over all permutations") {
  const Expr q = quantile_circuit(4, 2, batcher_bitonic(4));
  CHECK(only_binary_min_max(q));
  CHECK(depth(q) <= 3);
  std::vector<double> v{10, 20, 30, 40};
  int count = 0;
  do {
    CHECK(evaluate(q, v) == 20.0);
    ++count;
  } while (std::next_permutation(v.begin(), v.end()));
  CHECK(count == 24);
}

TEST_CASE("median of eight from the optimal network against a sort oracle") {
  const auto net = optimal_network_8();
  const Expr q = quantile_circuit(8, 4, net);
  CHECK(only_binary_min_max(q));
  CHECK(depth(q) <= 6);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> v(8);
    for (auto& x : v) x = u(rng);
    REQUIRE(evaluate(q, v) == kth(v, 4));
  }
}

TEST_CASE("dead code elimination keeps only gates feeding the output") {
  const auto circuit = MinMaxCircuit::from_network(optimal_network_8());
  CHECK(circuit.gates.size() == 38);
  const auto live_min = circuit.live_gates(0);
  const auto live_med = circuit.live_gates(3);
  CHECK(live_min.size() < live_med.size());
  CHECK(live_med.size() < circuit.gates.size());
  // The minimum needs exactly n - 1 = 7 min gates.
  CHECK(live_min.size() == 7);
  for (std::size_t id : live_min) CHECK(circuit.gates[id - circuit.width].op == Op::Min);
}

TEST_CASE("duality under negation") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-5, 5);
  for (std::size_t n = 2; n <= 9; ++n) {
    const auto net = batcher_bitonic(n);
    for (std::size_t k = 1; k <= n; ++k) {
      const Expr q = quantile_circuit(n, k, net);
      const Expr dual = quantile_circuit(n, n + 1 - k, net);
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = u(rng);
          neg[i] = -v[i];
        }
        CHECK(evaluate(q, v) == -evaluate(dual, neg));
      }
    }
  }
}

TEST_CASE("quantile circuit errors") {
  CHECK_THROWS_AS(quantile_circuit(4, 0, batcher_bitonic(4)), std::invalid_argument);
  CHECK_THROWS_AS(quantile_circuit(4, 5, batcher_bitonic(4)), std::invalid_argument);
  CHECK_THROWS_AS(quantile_circuit(5, 1, batcher_bitonic(4)), std::invalid_argument);
  CHECK_THROWS_AS(quantile_circuit(3, 1, ComparatorNetwork(3, {{{0, 1}}})), std::invalid_argument);
}

TEST_CASE("depth-2 second largest") {
  using V = SecondLargestVariant;
  const std::vector<double> pair{3.0, 8.0};
  CHECK(evaluate(second_largest_depth2(2, V::MinOfMaxes), pair) == 3.0);
  CHECK(evaluate(second_largest_depth2(2, V::MaxOfMins), pair) == 3.0);
  CHECK(depth(second_largest_depth2(2, V::MinOfMaxes)) == 1);

  const Expr a = second_largest_depth2(4, V::MinOfMaxes);
  const Expr b = second_largest_depth2(4, V::MaxOfMins);
  CHECK(depth(a) == 2);
  CHECK(depth(b) == 2);
  CHECK(a.children().size() == 4);
  CHECK(b.children().size() == 6);
  std::vector<double> v{1, 2, 3, 4};
  do {
    CHECK(evaluate(a, v) == 3.0);
    CHECK(evaluate(b, v) == 3.0);
  } while (std::next_permutation(v.begin(), v.end()));

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1, 1);
  const Expr a5 = second_largest_depth2(5, V::MinOfMaxes);
  const Expr b5 = second_largest_depth2(5, V::MaxOfMins);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> f(5);
    for (auto& x : f) x = u(rng);
    REQUIRE(evaluate(a5, f) == evaluate(b5, f));
  }
  CHECK_THROWS_AS(second_largest_depth2(1, V::MaxOfMins), std::invalid_argument);
}
