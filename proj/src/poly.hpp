#pragma once

// Internal polynomial helpers for the rational cost functions. Coefficients
// are ascending-degree. Degrees here never exceed 3, so exact root location
// via the companion matrix is cheap and replaces interval sampling.

#include <span>
#include <vector>

namespace mqssd::detail {

double poly_eval(std::span<const double> coeffs, double x);

// Evaluates the derivative polynomial.
double poly_deriv_eval(std::span<const double> coeffs, double x);

// Real roots, ascending. Leading coefficients that are negligible relative
// to the largest magnitude are dropped first.
std::vector<double> poly_real_roots(std::span<const double> coeffs);

// True when the polynomial is strictly positive everywhere on [lo, hi]:
// positive at lo and no real root inside the (slightly widened) interval.
bool poly_positive_on(std::span<const double> coeffs, double lo, double hi);

}  // namespace mqssd::detail
