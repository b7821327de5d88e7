#pragma once

#include <span>

#include "ksalg/alpha.hpp"

namespace ksalg {

/// Power mean M_alpha = ((x_1^a + ... + x_n^a) / n)^(1/a).
///
/// NegInf/PosInf give the exact min/max and Finite(0) the geometric mean
/// exp(mean(ln x)). Other exponents are evaluated against the extreme element
/// m (max for a > 0, min for a < 0) so that every (x_i/m)^a lies in [0, 1]:
///
///   M_a = m * exp(log1p(mean(expm1(a * ln(x_i/m)))) / a)
///
/// which neither overflows nor loses precision as a approaches 0.
///
/// Preconditions: xs non-empty; strictly positive when alpha is Finite(a) with
/// a <= 0, non-negative otherwise. Throws std::invalid_argument for empty input
/// and std::domain_error for values outside the domain.
double power_mean(const Alpha& alpha, std::span<const double> xs);

/// Additively homogeneous mean A_alpha(x) = ln M_alpha(exp x_1, ..., exp x_n).
///
/// NegInf/PosInf give min/max and Finite(0) the arithmetic mean. Finite(a) uses
/// the shifted-exponent form with m = max(a * x_i):
///
///   A_a = (m + log1p(mean(expm1(a * x_i - m)))) / a
///
/// so no exponential is ever taken of a positive argument.
/// Throws std::invalid_argument for empty input or non-finite entries.
double additive_mean(const Alpha& alpha, std::span<const double> xs);

/// True iff power_mean(alpha, xs) is non-decreasing along the ascending grid,
/// allowing `slack` of absolute decrease between neighbours.
bool mean_ordering_check(std::span<const double> xs, std::span<const Alpha> alpha_grid, double slack = 1e-9);

}  // namespace ksalg
