#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mqssd/models.hpp"
#include "mqssd/trial.hpp"

namespace mqssd {

// Setup/transfer costs for one (op, k) slice, from an ordinary least squares
// regression of mean per-worker elapsed time against the random access count.
struct PerKCosts {
  OpKind op = OpKind::Read;
  unsigned k = 1;
  double setup_us = 0.0;     // regression slope
  double transfer_us = 0.0;  // per page: intercept / (per_worker_bytes / B)
  double r_squared = 0.0;
  std::size_t sample_count = 0;  // distinct r values in the regression
  bool setup_clamped = false;    // slope was negative, clamped to zero
  bool zero_variance = false;    // all mean elapsed equal; r_squared pinned 0
};

// trials must share op, k and per_worker_bytes and cover >= 3 distinct r
// values; failed trials are ignored. Repetitions at the same r are averaged
// before the regression. A non-positive intercept is an error: it would
// fabricate a non-positive transfer cost.
PerKCosts derive_per_k(std::span<const TrialRecord> trials,
                       std::uint64_t page_size_bytes);

struct RationalFitResult {
  RationalFn fn;
  std::vector<double> relative_residuals;  // per input point, |g(k)-v|/v
  bool converged = false;
  int iterations = 0;
};

// Fits value = g(k) by minimizing the sum of squared relative errors over
// rational functions with the given numerator/denominator degrees, subject
// to den[0] = 1 and positivity of g and its denominator on [1, max k].
// Deterministic damped least squares (Levenberg-Marquardt) started from a
// linearized pre-fit; iteration cap 10^4, convergence when the relative
// step drops below 1e-10. Exactly representable inputs are reproduced to
// < 1e-6 relative; otherwise the fit prefers the nonincreasing solution
// (measured cost-vs-concurrency curves diminish; rises are treated as
// noise). Points may be passed in any order: output is order-independent,
// bit for bit.
RationalFitResult fit_rational(
    std::vector<std::pair<double, double>> points, int numerator_degree,
    int denominator_degree);

struct FitReport {
  struct FnFit {
    std::string name;  // "s", "beta", "t" or "alpha"
    std::vector<double> relative_residuals;
    bool converged = false;
    int iterations = 0;
  };
  std::vector<PerKCosts> per_k;
  std::vector<FnFit> fits;

  bool converged() const;
  int total_iterations() const;
};

struct CalibrationOptions {
  // PDAM P: declared channel count; not derivable from the trial data.
  std::uint32_t pdam_pages_per_cycle = 8;
  // Zero setup costs (constant-cost devices) are floored here so the fitted
  // rational function can satisfy its positivity invariant. 1e-9 us is
  // far below any measurable effect.
  double setup_floor_us = 1e-9;
  std::string device_label;        // defaults to the label in the data
  std::string source_label;        // provenance.source
  std::string timestamp_override;  // provenance.calibrated_at if nonempty
};

struct CalibrationResult {
  DeviceProfile profile;
  FitReport report;
};

// Full pipeline: per-(op,k) OLS, then rational fits over k. DAM page cost
// and PDAM cycle cost are the mean per-page time over the k=1 trials;
// Affine costs come from the k=1 regression; MQSSD functions are fitted
// over all k with degrees (2,2) for s/t/alpha and (3,3) for beta.
// Missing k=1 data is fatal.
CalibrationResult calibrate_profile(std::span<const TrialRecord> trials,
                                    const PageGeometry& geometry,
                                    const CalibrationOptions& options = {});

}  // namespace mqssd
