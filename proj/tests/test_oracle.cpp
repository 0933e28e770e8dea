#include <doctest.h>

#include <cmath>

#include "mqssd/oracle.hpp"
#include "support.hpp"

using namespace mqssd;
using mqssd::testing::constant_profile;
using mqssd::testing::decreasing_profile;
using mqssd::testing::desk_spec;

TEST_CASE("simulate_trial evaluates the time model") {
  // Constant setup=0-ish, transfer=2: elapsed = 1000 pages * 2 us.
  const OracleConfig constant(constant_profile(2.0));
  const std::uint64_t per_worker = 4096ull * 1000;
  for (unsigned k : {1u, 2u, 64u}) {
    for (std::uint64_t r : {0ull, 10ull, 1000ull}) {
      CHECK(simulate_trial(constant, OpKind::Read, k, r, per_worker) ==
            doctest::Approx(2000.0).epsilon(1e-9));
    }
  }

  // setup=100, transfer=2, r=10, 1000 pages -> 3000 us.
  const OracleConfig affine_like(
      MqssdProfile(RationalFn::constant(100.0, 128),
                   RationalFn::constant(2.0, 128, 4),
                   RationalFn::constant(100.0, 128),
                   RationalFn::constant(2.0, 128),
                   mqssd::testing::desk_geometry(), 128));
  CHECK(simulate_trial(affine_like, OpKind::Write, 1, 10, per_worker) ==
        doctest::Approx(3000.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      simulate_trial(affine_like, OpKind::Read, 129, 0, per_worker),
      std::domain_error);
}

TEST_CASE("oracle noise is deterministic under the keyed stream") {
  const OracleConfig noisy(decreasing_profile(), 0.05, 1234);
  const std::uint64_t per_worker = 16ull << 20;
  const double a = simulate_trial(noisy, OpKind::Write, 8, 100, per_worker, 2);
  const double b = simulate_trial(noisy, OpKind::Write, 8, 100, per_worker, 2);
  CHECK(a == b);

  // Different repetition draws a different noise value.
  const double c = simulate_trial(noisy, OpKind::Write, 8, 100, per_worker, 3);
  CHECK(a != c);

  // Different seed, different stream.
  const OracleConfig other(decreasing_profile(), 0.05, 1235);
  CHECK(simulate_trial(other, OpKind::Write, 8, 100, per_worker, 2) != a);
}

TEST_CASE("oracle config validation") {
  CHECK_THROWS_AS(OracleConfig(decreasing_profile(), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(OracleConfig(decreasing_profile(), -0.1),
                  std::invalid_argument);
  CHECK_NOTHROW(OracleConfig(decreasing_profile(), 0.49));
}

TEST_CASE("generate_dataset emits the harness schema over the grid") {
  const OracleConfig oracle(decreasing_profile());
  WorkloadSpec spec = desk_spec();
  spec.repetitions = 2;
  const std::vector<TrialRecord> records = generate_dataset(oracle, spec);
  CHECK(records.size() == 2 * spec.k_grid.size() *
                              spec.r_fraction_grid.size() * spec.repetitions);
  for (const TrialRecord& record : records) {
    CHECK(record.ok());
    CHECK(record.elapsed_us > 0.0);
    CHECK(record.throughput_bytes_per_us ==
          static_cast<double>(record.k) *
              static_cast<double>(record.per_worker_bytes) /
              record.elapsed_us);
  }

  // Determinism: regenerating gives identical elapsed values.
  const std::vector<TrialRecord> again = generate_dataset(oracle, spec);
  REQUIRE(again.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].elapsed_us == records[i].elapsed_us);
  }
}

TEST_CASE("monotone ground truth propagates to dataset throughput") {
  const OracleConfig oracle(decreasing_profile());
  WorkloadSpec spec = desk_spec();
  const std::vector<TrialRecord> records = generate_dataset(oracle, spec);

  // Nondecreasing in k at fixed (op, r); nonincreasing in r at fixed (op, k).
  for (const TrialRecord& a : records) {
    for (const TrialRecord& b : records) {
      if (a.op != b.op) continue;
      if (a.random_accesses == b.random_accesses && a.k < b.k) {
        CHECK(a.throughput_bytes_per_us <=
              b.throughput_bytes_per_us * (1 + 1e-12));
      }
      if (a.k == b.k && a.random_accesses < b.random_accesses) {
        CHECK(a.throughput_bytes_per_us >=
              b.throughput_bytes_per_us * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("oracle config JSON round trip") {
  const OracleConfig config(decreasing_profile(), 0.01, 99, 0.5);
  const std::string text = oracle_config_to_json(config);
  const OracleConfig parsed = oracle_config_from_json(text);
  CHECK(parsed.noise_relative_sigma == 0.01);
  CHECK(parsed.seed == 99);
  CHECK(parsed.latency_floor_us == 0.5);
  const std::uint64_t per_worker = 16ull << 20;
  for (unsigned k : {1u, 7u, 128u}) {
    CHECK(simulate_trial(parsed, OpKind::Read, k, 55, per_worker, 1) ==
          simulate_trial(config, OpKind::Read, k, 55, per_worker, 1));
  }
}
