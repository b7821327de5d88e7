#include <doctest.h>

#include <cmath>
#include <random>

#include "ksalg/checks.hpp"
#include "ksalg/nexpr.hpp"
#include "ksalg/sexpr.hpp"

using namespace ksalg;

namespace {

NExpr in(std::size_t i) { return NExpr::input(i); }
NExpr nin(std::size_t i) { return NExpr::neg_input(i); }

}  // namespace

TEST_CASE("De Morgan push-down cases") {
  CHECK(eliminate_negation(NExpr::neg(NExpr::min({in(0), in(1)}))) == NExpr::max({nin(0), nin(1)}));
  CHECK(eliminate_negation(NExpr::neg(NExpr::max({in(0), in(1)}))) == NExpr::min({nin(0), nin(1)}));
  CHECK(eliminate_negation(NExpr::neg(NExpr::neg(in(2)))) == in(2));
  CHECK(eliminate_negation(NExpr::neg(nin(3))) == in(3));
  const NExpr e = NExpr::neg(NExpr::avg({in(0), NExpr::max({in(1), in(2)})}));
  const NExpr want = NExpr::avg({nin(0), NExpr::min({nin(1), nin(2)})});
  CHECK(eliminate_negation(e) == want);
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> frame{u(rng), u(rng), u(rng)};
    REQUIRE(std::abs(evaluate_nexpr(e, frame) - evaluate_nexpr(want, frame)) <= 1e-12);
  }
}

TEST_CASE("evaluation semantics") {
  CHECK(evaluate_nexpr(NExpr::min({in(0), in(1)}), std::vector<double>{0.3, 0.8}) == 0.3);
  CHECK(evaluate_nexpr(NExpr::neg(in(0)), std::vector<double>{0.25, 0.5}) == 0.75);
  CHECK(evaluate_nexpr(NExpr::avg({in(0), in(1)}), std::vector<double>{0.2, 0.6}) == doctest::Approx(0.4));
  CHECK(evaluate_nexpr(nin(1), std::vector<double>{0.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(evaluate_nexpr(in(0), std::vector<double>{1.5}), std::domain_error);
  CHECK_THROWS_AS(evaluate_nexpr(in(0), std::vector<double>{-0.1}), std::domain_error);
  CHECK_THROWS_AS(evaluate_nexpr(in(2), std::vector<double>{0.1}), std::out_of_range);
}

TEST_CASE("push-down properties on random trees") {
  Rng rng(52);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 3000; ++trial) {
    const NExpr e = random_nexpr(5, 50, rng);
    const NExpr out = eliminate_negation(e);
    CHECK(count_neg(out) == 0);
    CHECK(size(out) <= size(e));
    CHECK(size(out) == size(e) - count_neg(e));
    if (count_neg(e) == 0) CHECK(out == e);
    CHECK(eliminate_negation(out) == out);
    std::vector<double> frame(5);
    for (auto& x : frame) x = u(rng);
    const double v = evaluate_nexpr(out, frame);
    CHECK(std::abs(evaluate_nexpr(e, frame) - v) <= 1e-12);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("extended grammar") {
  const NExpr e = parse_nexpr("(neg (avg s0 (max s1 ns2)))");
  CHECK(e == NExpr::neg(NExpr::avg({in(0), NExpr::max({in(1), nin(2)})})));
  CHECK(print_nexpr(eliminate_negation(e)) == "(avg ns0 (min ns1 s2))");
  Rng rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const NExpr r = random_nexpr(12, 40, rng);
    CHECK(parse_nexpr(print_nexpr(r)) == r);
  }
  CHECK_THROWS_AS(parse_nexpr("(neg s0 s1)"), ParseError);
  CHECK_THROWS_AS(parse_nexpr("(avg s0)"), ParseError);
  CHECK_THROWS_AS(parse_nexpr("(diff s0 s1)"), ParseError);
  CHECK_THROWS_AS(parse_nexpr("0"), ParseError);
}
