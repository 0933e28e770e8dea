#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mqssd/calibration.hpp"
#include "mqssd/errors.hpp"
#include "mqssd/oracle.hpp"
#include "support.hpp"

using namespace mqssd;
using mqssd::testing::constant_profile;
using mqssd::testing::decreasing_profile;
using mqssd::testing::desk_geometry;
using mqssd::testing::desk_spec;

namespace {

TrialRecord make_trial(OpKind op, unsigned k, std::uint64_t r,
                       double elapsed_us, std::uint64_t per_worker_bytes,
                       unsigned repetition = 0) {
  TrialRecord record;
  record.device_label = "unit";
  record.op = op;
  record.k = k;
  record.random_accesses = r;
  record.per_worker_bytes = per_worker_bytes;
  record.r_fraction =
      static_cast<double>(r) / (static_cast<double>(per_worker_bytes) / 4096.0);
  record.elapsed_us = elapsed_us;
  record.throughput_bytes_per_us =
      static_cast<double>(k) * static_cast<double>(per_worker_bytes) /
      elapsed_us;
  record.repetition = repetition;
  return record;
}

}  // namespace

TEST_CASE("derive_per_k on collinear points") {
  const std::uint64_t per_worker = 50 * 4096;  // 50 pages
  std::vector<TrialRecord> trials = {
      make_trial(OpKind::Write, 2, 0, 100.0, per_worker),
      make_trial(OpKind::Write, 2, 10, 200.0, per_worker),
      make_trial(OpKind::Write, 2, 20, 300.0, per_worker),
  };
  const PerKCosts costs = derive_per_k(trials, 4096);
  CHECK(costs.setup_us == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(costs.transfer_us == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(costs.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(costs.sample_count == 3);
  CHECK_FALSE(costs.setup_clamped);
}

TEST_CASE("derive_per_k closed-form OLS on three points") {
  // (0,100), (10,210), (20,290): slope = 1900/200 = 9.5,
  // intercept = 200 - 9.5*10 = 105, SSres = 150, SStot = 18200.
  const std::uint64_t per_worker = 50 * 4096;
  std::vector<TrialRecord> trials = {
      make_trial(OpKind::Read, 1, 0, 100.0, per_worker),
      make_trial(OpKind::Read, 1, 10, 210.0, per_worker),
      make_trial(OpKind::Read, 1, 20, 290.0, per_worker),
  };
  const PerKCosts costs = derive_per_k(trials, 4096);
  CHECK(costs.setup_us == doctest::Approx(9.5).epsilon(1e-12));
  CHECK(costs.transfer_us == doctest::Approx(105.0 / 50.0).epsilon(1e-12));
  CHECK(costs.r_squared ==
        doctest::Approx(1.0 - 150.0 / 18200.0).epsilon(1e-12));
}

TEST_CASE("derive_per_k zero-slope degenerate case") {
  const std::uint64_t per_worker = 100 * 4096;
  std::vector<TrialRecord> trials = {
      make_trial(OpKind::Read, 4, 0, 500.0, per_worker),
      make_trial(OpKind::Read, 4, 10, 500.0, per_worker),
      make_trial(OpKind::Read, 4, 20, 500.0, per_worker),
  };
  const PerKCosts costs = derive_per_k(trials, 4096);
  CHECK(costs.setup_us == 0.0);
  CHECK(costs.transfer_us == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(costs.r_squared == 0.0);
  CHECK(costs.zero_variance);
}

TEST_CASE("derive_per_k averages repetitions before the regression") {
  const std::uint64_t per_worker = 50 * 4096;
  std::vector<TrialRecord> trials = {
      make_trial(OpKind::Write, 2, 0, 90.0, per_worker, 0),
      make_trial(OpKind::Write, 2, 0, 110.0, per_worker, 1),
      make_trial(OpKind::Write, 2, 10, 200.0, per_worker, 0),
      make_trial(OpKind::Write, 2, 20, 290.0, per_worker, 0),
      make_trial(OpKind::Write, 2, 20, 310.0, per_worker, 1),
  };
  const PerKCosts costs = derive_per_k(trials, 4096);
  CHECK(costs.setup_us == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(costs.sample_count == 3);
}

TEST_CASE("derive_per_k error paths") {
  const std::uint64_t per_worker = 50 * 4096;
  // Fewer than 3 distinct r values.
  std::vector<TrialRecord> two = {
      make_trial(OpKind::Read, 1, 0, 100.0, per_worker),
      make_trial(OpKind::Read, 1, 10, 200.0, per_worker),
  };
  CHECK_THROWS_AS(derive_per_k(two, 4096), SchemaError);

  // Mixed k.
  std::vector<TrialRecord> mixed = {
      make_trial(OpKind::Read, 1, 0, 100.0, per_worker),
      make_trial(OpKind::Read, 2, 10, 200.0, per_worker),
      make_trial(OpKind::Read, 1, 20, 300.0, per_worker),
  };
  CHECK_THROWS_AS(derive_per_k(mixed, 4096), SchemaError);

  // Negative slope clamps setup to zero but keeps the transfer cost.
  std::vector<TrialRecord> negative = {
      make_trial(OpKind::Read, 1, 0, 300.0, per_worker),
      make_trial(OpKind::Read, 1, 10, 200.0, per_worker),
      make_trial(OpKind::Read, 1, 20, 100.0, per_worker),
  };
  const PerKCosts clamped = derive_per_k(negative, 4096);
  CHECK(clamped.setup_us == 0.0);
  CHECK(clamped.setup_clamped);
  CHECK(clamped.transfer_us > 0.0);

  // Non-positive intercept refuses to fabricate a transfer cost.
  std::vector<TrialRecord> through_zero = {
      make_trial(OpKind::Read, 1, 10, 100.0, per_worker),
      make_trial(OpKind::Read, 1, 20, 200.0, per_worker),
      make_trial(OpKind::Read, 1, 30, 300.0, per_worker),
  };
  CHECK_THROWS_AS(derive_per_k(through_zero, 4096), SchemaError);
}

TEST_CASE("derive_per_k scale consistency is exact for power-of-two scales") {
  const std::uint64_t per_worker = 50 * 4096;
  std::vector<TrialRecord> base = {
      make_trial(OpKind::Read, 1, 0, 101.0, per_worker),
      make_trial(OpKind::Read, 1, 10, 213.0, per_worker),
      make_trial(OpKind::Read, 1, 20, 288.0, per_worker),
      make_trial(OpKind::Read, 1, 40, 517.0, per_worker),
  };
  std::vector<TrialRecord> scaled = base;
  for (TrialRecord& record : scaled) record.elapsed_us *= 4.0;

  const PerKCosts a = derive_per_k(base, 4096);
  const PerKCosts b = derive_per_k(scaled, 4096);
  CHECK(b.setup_us == 4.0 * a.setup_us);
  CHECK(b.transfer_us == 4.0 * a.transfer_us);
  CHECK(b.r_squared == a.r_squared);
}

TEST_CASE("fit_rational recovers exactly representable data") {
  RationalFn truth({8, 1, 0.5}, {1, 0.4, 0.1}, 128);
  std::vector<std::pair<double, double>> points;
  for (double k : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    points.emplace_back(k, truth.eval(k));
  }
  const RationalFitResult fit = fit_rational(points, 2, 2);
  CHECK(fit.converged);
  for (double residual : fit.relative_residuals) {
    CHECK(residual < 1e-6);
  }
  for (const auto& [k, v] : points) {
    CHECK(fit.fn.eval(k) == doctest::Approx(v).epsilon(1e-6));
  }
}

TEST_CASE("fit_rational represents constants exactly") {
  std::vector<std::pair<double, double>> points;
  for (double k : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    points.emplace_back(k, 5.0);
  }
  const RationalFitResult fit = fit_rational(points, 2, 2);
  for (double k = 1.0; k <= 128.0; k += 0.5) {
    CHECK(fit.fn.eval(k) == doctest::Approx(5.0).epsilon(1e-9));
  }
}

TEST_CASE("fit_rational on the published per-k write setup costs") {
  const std::vector<std::pair<double, double>> points = {
      {1, 3.10e5}, {2, 2.54e5}, {4, 1.54e5},  {8, 8.02e4},
      {16, 4.23e4}, {32, 2.15e4}, {64, 1.34e4}, {128, 9.98e3}};
  const RationalFitResult fit = fit_rational(points, 2, 2);
  double max_residual = 0.0;
  for (double residual : fit.relative_residuals) {
    max_residual = std::max(max_residual, residual);
  }
  CHECK(max_residual <= 0.10);
  double previous = fit.fn.eval(1.0);
  CHECK(previous > 0.0);
  for (int i = 1; i <= 2048; ++i) {
    const double k = 1.0 + 127.0 * i / 2048.0;
    const double value = fit.fn.eval(k);
    CHECK(value > 0.0);
    CHECK(value <= previous * (1.0 + 1e-9));
    previous = value;
  }
}

TEST_CASE("fit_rational is permutation invariant, bit for bit") {
  std::vector<std::pair<double, double>> points = {
      {1, 3.10e5}, {2, 2.54e5}, {4, 1.54e5},  {8, 8.02e4},
      {16, 4.23e4}, {32, 2.15e4}, {64, 1.34e4}, {128, 9.98e3}};
  const RationalFitResult a = fit_rational(points, 2, 2);
  std::mt19937 shuffler(7);
  std::shuffle(points.begin(), points.end(), shuffler);
  const RationalFitResult b = fit_rational(points, 2, 2);
  CHECK(a.fn.numerator() == b.fn.numerator());
  CHECK(a.fn.denominator() == b.fn.denominator());
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("fit_rational input validation") {
  std::vector<std::pair<double, double>> few = {{1, 2}, {2, 3}, {4, 5}};
  CHECK_THROWS_AS(fit_rational(few, 2, 2), std::invalid_argument);

  std::vector<std::pair<double, double>> negative = {
      {1, 1}, {2, 1}, {4, 1}, {8, -1}, {16, 1}, {32, 1}, {64, 1}, {128, 1}};
  CHECK_THROWS_AS(fit_rational(negative, 2, 2), std::invalid_argument);

  std::vector<std::pair<double, double>> duplicate = {
      {1, 1}, {2, 1}, {2, 1}, {8, 1}, {16, 1}, {32, 1}, {64, 1}, {128, 1}};
  CHECK_THROWS_AS(fit_rational(duplicate, 2, 2), std::invalid_argument);
}

TEST_CASE("calibrate_profile round trip on a zero-noise oracle") {
  const MqssdProfile truth = decreasing_profile();
  const OracleConfig oracle(truth);
  WorkloadSpec spec = desk_spec();
  const std::vector<TrialRecord> dataset = generate_dataset(oracle, spec);

  const CalibrationResult result =
      calibrate_profile(dataset, truth.geometry());
  CHECK(result.report.converged());

  for (OpKind op : {OpKind::Read, OpKind::Write}) {
    for (unsigned k : spec.k_grid) {
      for (double fraction : spec.r_fraction_grid) {
        const std::uint64_t r = spec.random_accesses_for(fraction);
        const double expected =
            predict_mqssd(truth, op, r, k, spec.per_worker_bytes);
        const double got = predict_mqssd(result.profile.mqssd, op, r, k,
                                         spec.per_worker_bytes);
        CHECK(std::abs(got - expected) / expected < 1e-6);
      }
    }
  }
}

TEST_CASE("calibrate_profile on a constant oracle collapses the models") {
  const MqssdProfile truth = constant_profile(2.0);
  const OracleConfig oracle(truth);
  WorkloadSpec spec = desk_spec();
  spec.k_grid = {1};
  const std::vector<TrialRecord> dataset = generate_dataset(oracle, spec);
  const CalibrationResult result =
      calibrate_profile(dataset, truth.geometry());

  // At k=1 the DAM, Affine and MQSSD predictions agree on the whole r grid.
  for (double fraction : spec.r_fraction_grid) {
    const std::uint64_t r = spec.random_accesses_for(fraction);
    const double dam = predict_dam(result.profile.dam, truth.geometry(),
                                   OpKind::Read, r, 1);
    const double affine =
        predict_affine(result.profile.affine, truth.geometry(), OpKind::Read,
                       r, 1, spec.per_worker_bytes);
    const double mqssd = predict_mqssd(result.profile.mqssd, OpKind::Read, r,
                                       1, spec.per_worker_bytes);
    CHECK(affine == doctest::Approx(dam).epsilon(1e-9));
    CHECK(mqssd == doctest::Approx(dam).epsilon(1e-9));
  }
}

TEST_CASE("calibrate_profile requires k=1 data") {
  const MqssdProfile truth = decreasing_profile();
  const OracleConfig oracle(truth);
  WorkloadSpec spec = desk_spec();
  spec.k_grid = {2, 4, 8, 16, 32, 64, 128};
  std::vector<TrialRecord> dataset = generate_dataset(oracle, spec);
  CHECK_THROWS_WITH_AS(calibrate_profile(dataset, truth.geometry()),
                       doctest::Contains("missing k=1"), SchemaError);
}

TEST_CASE("calibrate_profile requires both operation kinds") {
  const MqssdProfile truth = decreasing_profile();
  const OracleConfig oracle(truth);
  WorkloadSpec spec = desk_spec();
  spec.ops = {OpKind::Read};
  const std::vector<TrialRecord> dataset = generate_dataset(oracle, spec);
  CHECK_THROWS_AS(calibrate_profile(dataset, truth.geometry()), SchemaError);
}
