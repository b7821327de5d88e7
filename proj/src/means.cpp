#include "ksalg/means.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ksalg {

namespace {

void require_non_empty(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sequence");
}

}  // namespace

double power_mean(const Alpha& alpha, std::span<const double> xs) {
  require_non_empty(xs);
  const bool strict = alpha.is_finite() && alpha.value() <= 0.0;
  for (double x : xs) {
    if (std::isnan(x) || x < 0.0 || (strict && x == 0.0)) {
      throw std::domain_error(strict ? "power mean with alpha <= 0 requires strictly positive values"
                                     : "power mean requires non-negative values");
    }
  }
  switch (alpha.tag()) {
    case Alpha::Tag::NegInf:
      return *std::min_element(xs.begin(), xs.end());
    case Alpha::Tag::PosInf:
      return *std::max_element(xs.begin(), xs.end());
    case Alpha::Tag::Finite:
      break;
  }
  const double a = alpha.value();
  const double n = static_cast<double>(xs.size());
  if (a == 0.0) {
    double log_sum = 0.0;
    for (double x : xs) log_sum += std::log(x);
    return std::exp(log_sum / n);
  }
  const double m = a > 0.0 ? *std::max_element(xs.begin(), xs.end()) : *std::min_element(xs.begin(), xs.end());
  if (m == 0.0) return 0.0;  // a > 0 and all entries are zero
  double acc = 0.0;
  for (double x : xs) acc += std::expm1(a * std::log(x / m));
  return m * std::exp(std::log1p(acc / n) / a);
}

double additive_mean(const Alpha& alpha, std::span<const double> xs) {
  require_non_empty(xs);
  for (double x : xs) {
    if (!std::isfinite(x)) throw std::invalid_argument("additive mean requires finite values");
  }
  switch (alpha.tag()) {
    case Alpha::Tag::NegInf:
      return *std::min_element(xs.begin(), xs.end());
    case Alpha::Tag::PosInf:
      return *std::max_element(xs.begin(), xs.end());
    case Alpha::Tag::Finite:
      break;
  }
  const double a = alpha.value();
  const double n = static_cast<double>(xs.size());
  if (a == 0.0) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / n;
  }
  double m = a * xs[0];
  for (double x : xs) m = std::max(m, a * x);
  double acc = 0.0;
  for (double x : xs) acc += std::expm1(a * x - m);
  return (m + std::log1p(acc / n)) / a;
}

bool mean_ordering_check(std::span<const double> xs, std::span<const Alpha> alpha_grid, double slack) {
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) {
    throw std::invalid_argument("alpha grid must be sorted ascending");
  }
  bool ok = true;
  double previous = 0.0;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    double value = power_mean(alpha_grid[i], xs);
    if (i > 0 && value < previous - slack) ok = false;
    previous = value;
  }
  return ok;
}

}  // namespace ksalg
