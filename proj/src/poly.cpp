#include "poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mqssd::detail {

double poly_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = acc * x + coeffs[i];
  }
  return acc;
}

double poly_deriv_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) {
    acc = acc * x + coeffs[i] * static_cast<double>(i);
  }
  return acc;
}

std::vector<double> poly_real_roots(std::span<const double> coeffs) {
  double max_abs = 0.0;
  for (double c : coeffs) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0) return {};

  std::size_t degree = coeffs.size() - 1;
  while (degree > 0 && std::abs(coeffs[degree]) <= 1e-14 * max_abs) {
    --degree;
  }
  if (degree == 0) return {};
  if (degree == 1) return {-coeffs[0] / coeffs[1]};

  Eigen::MatrixXd companion =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(degree),
                            static_cast<Eigen::Index>(degree));
  for (std::size_t i = 0; i + 1 < degree; ++i) {
    companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) =
        1.0;
  }
  for (std::size_t i = 0; i < degree; ++i) {
    companion(static_cast<Eigen::Index>(i),
              static_cast<Eigen::Index>(degree - 1)) =
        -coeffs[i] / coeffs[degree];
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    auto ev = solver.eigenvalues()[i];
    if (std::abs(ev.imag()) <= 1e-8 * (1.0 + std::abs(ev.real()))) {
      roots.push_back(ev.real());
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool poly_positive_on(std::span<const double> coeffs, double lo, double hi) {
  // Endpoints, every real root inside the interval, and the midpoints
  // between consecutive check points. A sign crossing always leaves one of
  // these non-positive; eigensolver noise in a root location cannot cause a
  // false rejection because the test is the evaluated value, not the root.
  std::vector<double> checks = {lo, hi};
  for (double root : poly_real_roots(coeffs)) {
    if (root > lo && root < hi) checks.push_back(root);
  }
  std::sort(checks.begin(), checks.end());
  const std::size_t base = checks.size();
  for (std::size_t i = 0; i + 1 < base; ++i) {
    checks.push_back(0.5 * (checks[i] + checks[i + 1]));
  }
  for (double x : checks) {
    if (!(poly_eval(coeffs, x) > 0.0)) return false;
  }
  return true;
}

}  // namespace mqssd::detail
