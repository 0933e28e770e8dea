#include "mqssd/calibration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <set>
#include <stdexcept>

#include "mqssd/errors.hpp"
#include "mqssd/linreg.hpp"
#include "poly.hpp"

namespace mqssd {

namespace {

constexpr int kIterationCap = 10000;
constexpr double kStepTolerance = 1e-10;
constexpr double kRealizableResidual = 1e-6;

struct Theta {
  std::vector<double> num;  // c_0..c_p
  std::vector<double> den;  // d_0 = 1, d_1..d_q
};

Theta unpack(const Eigen::VectorXd& theta, int p, int q) {
  Theta t;
  t.num.resize(static_cast<std::size_t>(p) + 1);
  t.den.resize(static_cast<std::size_t>(q) + 1);
  for (int i = 0; i <= p; ++i) t.num[static_cast<std::size_t>(i)] = theta[i];
  t.den[0] = 1.0;
  for (int i = 1; i <= q; ++i) {
    t.den[static_cast<std::size_t>(i)] = theta[p + i];
  }
  return t;
}

bool positive_feasible(const Theta& t, double k_max) {
  return detail::poly_positive_on(t.den, 1.0, k_max) &&
         detail::poly_positive_on(t.num, 1.0, k_max);
}

double rational_value(const Theta& t, double k) {
  return detail::poly_eval(t.num, k) / detail::poly_eval(t.den, k);
}

// Linearized pre-fit: minimize sum ((P(k) - v Q(k)) / v)^2 with d0 = 1.
// Solving the multiplied-through system is linear and lands near the true
// coefficients whenever the data really is rational.
Eigen::VectorXd linearized_init(const std::vector<double>& ks,
                                const std::vector<double>& vs, int p, int q) {
  const int n = static_cast<int>(ks.size());
  const int m = p + 1 + q;
  Eigen::MatrixXd a(n, m);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const double k = ks[static_cast<std::size_t>(i)];
    const double v = vs[static_cast<std::size_t>(i)];
    const double w = 1.0 / v;
    double pow_k = 1.0;
    for (int j = 0; j <= p; ++j) {
      a(i, j) = w * pow_k;
      pow_k *= k;
    }
    pow_k = k;
    for (int j = 1; j <= q; ++j) {
      a(i, p + j) = -w * v * pow_k;
      pow_k *= k;
    }
    b(i) = w * v;  // d0 * v moved to the right-hand side
  }
  return a.colPivHouseholderQr().solve(b);
}

// Residual model shared by both phases. penalty_weight == 0 is the plain
// relative-error objective; otherwise hinge penalties on positive relative
// slope d(log g)/d(log k) at log-spaced grid points are appended.
struct Objective {
  const std::vector<double>& ks;
  const std::vector<double>& vs;
  int p;
  int q;
  double k_max;
  double penalty_weight = 0.0;
  std::vector<double> penalty_grid;

  int residual_count() const {
    return static_cast<int>(ks.size() + penalty_grid.size());
  }

  Eigen::VectorXd residuals(const Eigen::VectorXd& theta) const {
    const Theta t = unpack(theta, p, q);
    Eigen::VectorXd e(residual_count());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      e[static_cast<Eigen::Index>(i)] =
          (rational_value(t, ks[i]) - vs[i]) / vs[i];
    }
    const double sw = std::sqrt(penalty_weight);
    for (std::size_t j = 0; j < penalty_grid.size(); ++j) {
      const double x = penalty_grid[j];
      const double pv = detail::poly_eval(t.num, x);
      const double qv = detail::poly_eval(t.den, x);
      const double dp = detail::poly_deriv_eval(t.num, x);
      const double dq = detail::poly_deriv_eval(t.den, x);
      // x * g'(x)/g(x) with g = P/Q
      const double rel_slope = x * (dp * qv - pv * dq) / (qv * pv);
      e[static_cast<Eigen::Index>(ks.size() + j)] =
          sw * std::max(0.0, rel_slope);
    }
    return e;
  }

  // Analytic Jacobian of the data rows; forward differences for penalty
  // rows (they exist only in phase 2 and their exact derivative buys
  // nothing).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& e0) const {
    const int m = p + 1 + q;
    Eigen::MatrixXd jac(residual_count(), m);
    const Theta t = unpack(theta, p, q);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double k = ks[i];
      const double v = vs[i];
      const double pv = detail::poly_eval(t.num, k);
      const double qv = detail::poly_eval(t.den, k);
      double pow_k = 1.0;
      for (int j = 0; j <= p; ++j) {
        jac(static_cast<Eigen::Index>(i), j) = pow_k / (qv * v);
        pow_k *= k;
      }
      pow_k = k;
      for (int j = 1; j <= q; ++j) {
        jac(static_cast<Eigen::Index>(i), p + j) =
            -pv * pow_k / (qv * qv * v);
        pow_k *= k;
      }
    }
    if (!penalty_grid.empty()) {
      for (int j = 0; j < m; ++j) {
        const double h = 1e-7 * std::max(std::abs(theta[j]), 1.0);
        Eigen::VectorXd shifted = theta;
        shifted[j] += h;
        const Eigen::VectorXd e1 = residuals(shifted);
        for (std::size_t r = ks.size();
             r < static_cast<std::size_t>(residual_count()); ++r) {
          jac(static_cast<Eigen::Index>(r), j) =
              (e1[static_cast<Eigen::Index>(r)] -
               e0[static_cast<Eigen::Index>(r)]) /
              h;
        }
      }
    }
    return jac;
  }
};

struct LmOutcome {
  Eigen::VectorXd theta;
  int iterations = 0;
  bool converged = false;
};

LmOutcome levenberg_marquardt(const Objective& objective,
                              Eigen::VectorXd theta) {
  LmOutcome out;
  double lambda = 1e-3;
  Eigen::VectorXd e = objective.residuals(theta);
  double cost = e.squaredNorm();

  while (out.iterations < kIterationCap) {
    ++out.iterations;
    const Eigen::MatrixXd jac = objective.jacobian(theta, e);
    const Eigen::MatrixXd h = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * e;
    Eigen::MatrixXd damped = h;
    for (Eigen::Index i = 0; i < damped.rows(); ++i) {
      damped(i, i) += lambda * std::max(h(i, i), 1e-300);
    }
    const Eigen::VectorXd delta = damped.ldlt().solve(-g);
    const Eigen::VectorXd candidate = theta + delta;
    const Theta t = unpack(candidate, objective.p, objective.q);
    bool accepted = false;
    if (positive_feasible(t, objective.k_max)) {
      const Eigen::VectorXd e2 = objective.residuals(candidate);
      const double cost2 = e2.squaredNorm();
      if (cost2 < cost) {
        const double step = delta.norm() / (theta.norm() + 1e-30);
        theta = candidate;
        e = e2;
        cost = cost2;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (step < kStepTolerance) {
          out.converged = true;
          break;
        }
      }
    }
    if (!accepted) {
      lambda *= 2.0;
      if (lambda > 1e12) {
        // No improving direction left at maximal damping: a fixed point.
        out.converged = true;
        break;
      }
    }
  }
  out.theta = std::move(theta);
  return out;
}

bool nonincreasing_on(const Theta& t, double k_max) {
  constexpr int kSamples = 4096;
  double prev = rational_value(t, 1.0);
  for (int i = 1; i <= kSamples; ++i) {
    const double x =
        1.0 + (k_max - 1.0) * static_cast<double>(i) / kSamples;
    const double value = rational_value(t, x);
    if (value > prev * (1.0 + 1e-12)) return false;
    prev = value;
  }
  return true;
}

std::vector<double> max_abs_residuals(const Theta& t,
                                      const std::vector<double>& ks,
                                      const std::vector<double>& vs) {
  std::vector<double> res(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    res[i] = std::abs((rational_value(t, ks[i]) - vs[i]) / vs[i]);
  }
  return res;
}

}  // namespace

RationalFitResult fit_rational(std::vector<std::pair<double, double>> points,
                               int numerator_degree, int denominator_degree) {
  const int p = numerator_degree;
  const int q = denominator_degree;
  if ((p != 2 && p != 3) || (q != 2 && q != 3)) {
    throw std::invalid_argument("fit_rational degrees must be 2 or 3");
  }
  if (points.size() < static_cast<std::size_t>(p + q + 1)) {
    throw std::invalid_argument(
        "fit_rational needs at least " + std::to_string(p + q + 1) +
        " points for degrees (" + std::to_string(p) + "," +
        std::to_string(q) + ")");
  }
  // Canonical order makes the result independent of input permutation.
  std::sort(points.begin(), points.end());
  std::vector<double> ks, vs;
  ks.reserve(points.size());
  vs.reserve(points.size());
  for (const auto& [k, v] : points) {
    if (!(k >= 1.0)) {
      throw std::invalid_argument("fit_rational k values must be >= 1");
    }
    if (!ks.empty() && k == ks.back()) {
      throw std::invalid_argument("fit_rational k values must be distinct");
    }
    if (!(v > 0.0)) {
      throw std::invalid_argument("fit_rational values must be > 0");
    }
    ks.push_back(k);
    vs.push_back(v);
  }
  const double k_max = ks.back();

  Eigen::VectorXd init = linearized_init(ks, vs, p, q);
  if (!positive_feasible(unpack(init, p, q), k_max)) {
    // Fall back to the constant function at the mean value.
    double mean = 0.0;
    for (double v : vs) mean += v;
    mean /= static_cast<double>(vs.size());
    init = Eigen::VectorXd::Zero(p + 1 + q);
    init[0] = mean;
    if (!positive_feasible(unpack(init, p, q), k_max)) {
      throw std::invalid_argument(
          "fit_rational found no positive initialization");
    }
  }

  Objective plain{ks, vs, p, q, k_max};
  LmOutcome outcome = levenberg_marquardt(plain, init);
  int total_iterations = outcome.iterations;
  bool converged = outcome.converged;

  Theta best = unpack(outcome.theta, p, q);
  std::vector<double> residuals = max_abs_residuals(best, ks, vs);
  const double max_residual =
      *std::max_element(residuals.begin(), residuals.end());

  // The data is exactly representable: done. Otherwise the misfit is
  // measurement noise; re-run with an escalating hinge penalty on rising
  // stretches until the curve is nonincreasing (device cost-vs-concurrency
  // curves diminish; a rising wiggle in noisy points is not signal).
  if (max_residual >= kRealizableResidual && !nonincreasing_on(best, k_max)) {
    Objective penalized{ks, vs, p, q, k_max};
    constexpr int kPenaltyGrid = 64;
    penalized.penalty_grid.resize(kPenaltyGrid);
    for (int i = 0; i < kPenaltyGrid; ++i) {
      penalized.penalty_grid[static_cast<std::size_t>(i)] = std::exp(
          std::log(k_max) * static_cast<double>(i) / (kPenaltyGrid - 1));
    }
    Eigen::VectorXd theta = init;
    for (double weight : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
      penalized.penalty_weight = weight;
      LmOutcome stage = levenberg_marquardt(penalized, theta);
      theta = stage.theta;
      total_iterations += stage.iterations;
      converged = stage.converged;
      if (nonincreasing_on(unpack(theta, p, q), k_max)) break;
    }
    best = unpack(theta, p, q);
    residuals = max_abs_residuals(best, ks, vs);
  }

  RationalFitResult result{
      RationalFn(best.num, best.den, k_max),
      std::move(residuals),
      converged,
      total_iterations,
  };
  return result;
}

PerKCosts derive_per_k(std::span<const TrialRecord> trials,
                       std::uint64_t page_size_bytes) {
  std::vector<const TrialRecord*> usable;
  for (const TrialRecord& trial : trials) {
    if (trial.ok()) usable.push_back(&trial);
  }
  if (usable.empty()) {
    throw SchemaError("derive_per_k: no usable (status=ok) trials");
  }
  const OpKind op = usable.front()->op;
  const unsigned k = usable.front()->k;
  const std::uint64_t per_worker_bytes = usable.front()->per_worker_bytes;
  for (const TrialRecord* trial : usable) {
    if (trial->op != op || trial->k != k ||
        trial->per_worker_bytes != per_worker_bytes) {
      throw SchemaError(
          "derive_per_k: trials mix op, k or per-worker bytes (expected " +
          std::string(to_string(op)) + ", k=" + std::to_string(k) + ")");
    }
  }

  // Mean elapsed per distinct r, then OLS of mean elapsed against r.
  std::map<std::uint64_t, std::pair<double, std::size_t>> by_r;
  for (const TrialRecord* trial : usable) {
    auto& [sum, count] = by_r[trial->random_accesses];
    sum += trial->elapsed_us;
    ++count;
  }
  if (by_r.size() < 3) {
    throw SchemaError("derive_per_k: need >= 3 distinct r values, got " +
                      std::to_string(by_r.size()) + " (op=" +
                      std::string(to_string(op)) + ", k=" +
                      std::to_string(k) + ")");
  }
  std::vector<double> xs, ys;
  for (const auto& [r, acc] : by_r) {
    xs.push_back(static_cast<double>(r));
    ys.push_back(acc.first / static_cast<double>(acc.second));
  }
  const LineFit fit = fit_line(xs, ys);

  PerKCosts costs;
  costs.op = op;
  costs.k = k;
  costs.sample_count = by_r.size();
  costs.r_squared = fit.r_squared;
  costs.zero_variance = fit.zero_variance;
  if (fit.slope < 0.0) {
    costs.setup_us = 0.0;
    costs.setup_clamped = true;
  } else {
    costs.setup_us = fit.slope;
  }
  if (!(fit.intercept > 0.0)) {
    throw SchemaError(
        "derive_per_k: non-positive intercept (" +
        std::to_string(fit.intercept) + " us) for op=" +
        std::string(to_string(op)) + ", k=" + std::to_string(k) +
        "; refusing to fabricate a transfer cost");
  }
  const double pages = static_cast<double>(per_worker_bytes) /
                       static_cast<double>(page_size_bytes);
  costs.transfer_us = fit.intercept / pages;
  return costs;
}

bool FitReport::converged() const {
  for (const FnFit& fit : fits) {
    if (!fit.converged) return false;
  }
  return true;
}

int FitReport::total_iterations() const {
  int total = 0;
  for (const FnFit& fit : fits) total += fit.iterations;
  return total;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

CalibrationResult calibrate_profile(std::span<const TrialRecord> trials,
                                    const PageGeometry& geometry,
                                    const CalibrationOptions& options) {
  std::vector<const TrialRecord*> usable;
  for (const TrialRecord& trial : trials) {
    if (trial.ok()) usable.push_back(&trial);
  }
  if (usable.empty()) {
    throw SchemaError("calibrate_profile: no usable trials");
  }

  std::map<std::pair<int, unsigned>, std::vector<TrialRecord>> groups;
  for (const TrialRecord* trial : usable) {
    groups[{trial->op == OpKind::Read ? 0 : 1, trial->k}].push_back(*trial);
  }

  for (OpKind op : {OpKind::Read, OpKind::Write}) {
    const int op_index = op == OpKind::Read ? 0 : 1;
    bool any = false;
    for (const auto& [key, unused] : groups) {
      if (key.first == op_index) any = true;
    }
    if (!any) {
      throw SchemaError("calibrate_profile: dataset has no " +
                        std::string(to_string(op)) + " trials");
    }
    if (groups.find({op_index, 1}) == groups.end()) {
      throw SchemaError("calibrate_profile: missing k=1 data for " +
                        std::string(to_string(op)) +
                        " (required for the DAM/PDAM/Affine baselines)");
    }
  }

  FitReport report;
  std::map<std::pair<int, unsigned>, PerKCosts> per_k;
  for (const auto& [key, group] : groups) {
    PerKCosts costs = derive_per_k(group, geometry.page_size_bytes());
    per_k[key] = costs;
    report.per_k.push_back(costs);
  }

  // DAM page cost / PDAM cycle cost: mean per-page time over the k=1 trials.
  PerOp mean_page_time;
  for (OpKind op : {OpKind::Read, OpKind::Write}) {
    const int op_index = op == OpKind::Read ? 0 : 1;
    const auto& group = groups.at({op_index, 1});
    double sum = 0.0;
    for (const TrialRecord& trial : group) {
      const double pages = static_cast<double>(trial.per_worker_bytes) /
                           static_cast<double>(geometry.page_size_bytes());
      sum += trial.elapsed_us / pages;
    }
    const double mean = sum / static_cast<double>(group.size());
    (op == OpKind::Read ? mean_page_time.read : mean_page_time.write) = mean;
  }

  DamParams dam(mean_page_time.read, mean_page_time.write);
  PdamParams pdam(mean_page_time.read, mean_page_time.write,
                  options.pdam_pages_per_cycle);
  AffineParams affine(
      {per_k.at({0, 1}).setup_us, per_k.at({0, 1}).transfer_us},
      {per_k.at({1, 1}).setup_us, per_k.at({1, 1}).transfer_us});

  // MQSSD: rational fits over k per op and cost kind.
  auto fit_for = [&](OpKind op, bool setup, int degree,
                     const char* name) -> RationalFn {
    const int op_index = op == OpKind::Read ? 0 : 1;
    std::vector<std::pair<double, double>> points;
    for (const auto& [key, costs] : per_k) {
      if (key.first != op_index) continue;
      const double value =
          setup ? std::max(costs.setup_us, options.setup_floor_us)
                : costs.transfer_us;
      points.emplace_back(static_cast<double>(key.second), value);
    }
    RationalFitResult fit = fit_rational(std::move(points), degree, degree);
    report.fits.push_back({name, fit.relative_residuals, fit.converged,
                           fit.iterations});
    return fit.fn;
  };

  RationalFn s_fn = fit_for(OpKind::Write, true, 2, "s");
  RationalFn beta_fn = fit_for(OpKind::Write, false, 3, "beta");
  RationalFn t_fn = fit_for(OpKind::Read, true, 2, "t");
  RationalFn alpha_fn = fit_for(OpKind::Read, false, 2, "alpha");

  const double k_max =
      std::min(std::min(s_fn.k_max(), beta_fn.k_max()),
               std::min(t_fn.k_max(), alpha_fn.k_max()));
  MqssdProfile mqssd(std::move(s_fn), std::move(beta_fn), std::move(t_fn),
                     std::move(alpha_fn), geometry, k_max);

  DeviceProfile profile{
      options.device_label.empty() ? usable.front()->device_label
                                   : options.device_label,
      dam,
      pdam,
      affine,
      std::move(mqssd),
      Provenance{
          options.source_label.empty() ? "trials" : options.source_label,
          options.timestamp_override.empty() ? utc_timestamp()
                                             : options.timestamp_override,
      },
  };
  return CalibrationResult{std::move(profile), std::move(report)};
}

}  // namespace mqssd
