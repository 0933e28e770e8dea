#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mqssd/models.hpp"
#include "mqssd/profile_json.hpp"
#include "support.hpp"

using namespace mqssd;
using mqssd::testing::constant_profile;
using mqssd::testing::decreasing_profile;
using mqssd::testing::desk_geometry;

TEST_CASE("eval_rational basic values") {
  RationalFn identity({1, 0, 0}, {1, 0, 0}, 1e6);
  CHECK(identity.eval(7) == 1.0);

  RationalFn asymptote({0, 0, 2}, {1, 0, 1}, 1e6);
  CHECK(std::abs(asymptote.eval(1e6) - 2.0) < 1e-4);

  RationalFn hand({4, 2, 0}, {1, 1, 0}, 128);
  CHECK(hand.eval(3) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("eval_rational domain checks") {
  RationalFn fn({1, 0, 0}, {1, 0, 0}, 128);
  CHECK_THROWS_AS(fn.eval(0.5), std::domain_error);
  CHECK_THROWS_AS(fn.eval(129), std::domain_error);
  CHECK_NOTHROW(fn.eval(1));
  CHECK_NOTHROW(fn.eval(128));
}

TEST_CASE("RationalFn normalizes d0 and rejects non-positive functions") {
  // d0 != 1 is rescaled, value unchanged.
  RationalFn scaled({8, 4, 0}, {2, 2, 0}, 128);
  CHECK(scaled.denominator()[0] == 1.0);
  CHECK(scaled.eval(3) == doctest::Approx(2.5).epsilon(1e-12));

  // Denominator root inside [1, k_max].
  CHECK_THROWS_AS(RationalFn({1, 0, 0}, {1, -0.5, 0}, 128),
                  std::invalid_argument);
  // Negative value on the interval.
  CHECK_THROWS_AS(RationalFn({-1, 0, 0}, {1, 0, 0}, 128),
                  std::invalid_argument);
  // Numerator sign change inside the interval: p(k) = 64 - k^2.
  CHECK_THROWS_AS(RationalFn({64, 0, -1}, {1, 0, 0}, 128),
                  std::invalid_argument);
  // Zero denominator constant term.
  CHECK_THROWS_AS(RationalFn({1, 0, 0}, {0, 1, 0}, 128),
                  std::invalid_argument);
  // Wrong vector lengths.
  CHECK_THROWS_AS(RationalFn({1, 0}, {1, 0, 0}, 128), std::invalid_argument);
}

TEST_CASE("equal-degree rational converges to the leading coefficient ratio") {
  RationalFn fn({3, 2, 4}, {1, 5, 2}, 1e6);
  const double limit = 4.0 / 2.0;
  CHECK(std::abs(fn.eval(1e6) - limit) / limit < 1e-3);
}

TEST_CASE("PageGeometry invariants") {
  CHECK_NOTHROW(PageGeometry(4096, 1 << 20, 1 << 16));
  CHECK_THROWS_AS(PageGeometry(4096, 1 << 16, 1 << 20),  // M >= N
                  std::invalid_argument);
  CHECK_THROWS_AS(PageGeometry(4095, 1 << 20, 1 << 16),  // not power of two
                  std::invalid_argument);
  CHECK_THROWS_AS(PageGeometry(1 << 17, 1 << 20, 1 << 16),  // B > M
                  std::invalid_argument);
}

TEST_CASE("predict_dam is the page-size to page-cost ratio, flat everywhere") {
  const PageGeometry geometry = desk_geometry();
  DamParams dam(2.0, 2.0);
  CHECK(predict_dam(dam, geometry, OpKind::Read, 0, 1) == 2048.0);
  CHECK(predict_dam(dam, geometry, OpKind::Read, 262144, 128) ==
        predict_dam(dam, geometry, OpKind::Read, 0, 1));

  DamParams unit(4096.0, 4096.0);
  CHECK(predict_dam(unit, geometry, OpKind::Write, 5, 3) == 1.0);

  // Exact constancy over a grid.
  const double reference = predict_dam(dam, geometry, OpKind::Write, 0, 1);
  for (unsigned k : {1u, 2u, 16u, 128u}) {
    for (std::uint64_t r : {0ull, 17ull, 4096ull}) {
      CHECK(predict_dam(dam, geometry, OpKind::Write, r, k) == reference);
    }
  }
}

TEST_CASE("predict_pdam scales to P then saturates; P=1 reduces to DAM") {
  const PageGeometry geometry = desk_geometry();
  PdamParams pdam(10.0, 10.0, 8);
  CHECK(predict_pdam(pdam, geometry, OpKind::Read, 0, 4) ==
        doctest::Approx(1638.4).epsilon(1e-12));
  CHECK(predict_pdam(pdam, geometry, OpKind::Read, 0, 8) ==
        doctest::Approx(3276.8).epsilon(1e-12));
  CHECK(predict_pdam(pdam, geometry, OpKind::Read, 0, 128) ==
        predict_pdam(pdam, geometry, OpKind::Read, 0, 8));

  // Flat in r, strictly increasing in k below P.
  for (unsigned k = 1; k < 8; ++k) {
    CHECK(predict_pdam(pdam, geometry, OpKind::Read, 9, k) ==
          predict_pdam(pdam, geometry, OpKind::Read, 0, k));
    CHECK(predict_pdam(pdam, geometry, OpKind::Read, 0, k + 1) >
          predict_pdam(pdam, geometry, OpKind::Read, 0, k));
  }

  PdamParams serial(7.0, 7.0, 1);
  DamParams dam_equal(7.0, 7.0);
  for (unsigned k : {1u, 2u, 64u}) {
    CHECK(predict_pdam(serial, geometry, OpKind::Write, 0, k) ==
          predict_dam(dam_equal, geometry, OpKind::Write, 0, k));
  }
}

TEST_CASE("pdam_page_cost") {
  PdamParams pdam(10.0, 10.0, 8);
  CHECK(pdam_page_cost(pdam, OpKind::Read, 2) == 5.0);
  CHECK(pdam_page_cost(pdam, OpKind::Read, 64) == 1.25);
  PdamParams serial(10.0, 10.0, 1);
  for (unsigned k : {1u, 3u, 128u}) {
    CHECK(pdam_page_cost(serial, OpKind::Read, k) == 10.0);
  }
}

TEST_CASE("predict_affine time model") {
  const PageGeometry geometry = desk_geometry();
  const std::uint64_t per_worker = 4096ull * 1000;  // 1000 pages

  AffineParams zero_setup({0.0, 2.0}, {0.0, 2.0});
  for (unsigned k : {1u, 4u, 32u}) {
    CHECK(predict_affine(zero_setup, geometry, OpKind::Read, 123, k,
                         per_worker) ==
          doctest::Approx(2048.0 * k).epsilon(1e-12));
  }

  AffineParams costs({100.0, 2.0}, {100.0, 2.0});
  // T_w = 1000*100 + 1000*2 = 102000 us.
  const double throughput =
      predict_affine(costs, geometry, OpKind::Write, 1000, 1, per_worker);
  CHECK(throughput == doctest::Approx(4096000.0 / 102000.0).epsilon(1e-12));
  CHECK(throughput == doctest::Approx(40.16).epsilon(1e-3));

  // r = 0 equals the zero-setup case exactly.
  CHECK(predict_affine(costs, geometry, OpKind::Read, 0, 4, per_worker) ==
        predict_affine(zero_setup, geometry, OpKind::Read, 0, 4, per_worker));

  // Strictly decreasing in r when s > 0; per-worker output k-invariant.
  double previous = predict_affine(costs, geometry, OpKind::Read, 0, 2,
                                   per_worker);
  for (std::uint64_t r : {1ull, 10ull, 100ull, 1000ull}) {
    const double value =
        predict_affine(costs, geometry, OpKind::Read, r, 2, per_worker);
    CHECK(value < previous);
    previous = value;
  }
  for (unsigned k : {1u, 2u, 8u}) {
    CHECK(predict_affine(costs, geometry, OpKind::Read, 50, k, per_worker) /
              k ==
          doctest::Approx(predict_affine(costs, geometry, OpKind::Read, 50, 1,
                                         per_worker))
              .epsilon(1e-12));
  }

  CHECK_THROWS_AS(
      predict_affine(costs, geometry, OpKind::Read, 0, 1, 100),  // < one page
      std::invalid_argument);
}

TEST_CASE("predict_mqssd collapses to affine for constant cost functions") {
  const MqssdProfile profile = constant_profile(2.0);
  AffineParams affine({1e-9, 2.0}, {1e-9, 2.0});
  const std::uint64_t per_worker = 16ull << 20;
  for (unsigned k : {1u, 2u, 16u, 128u}) {
    for (std::uint64_t r : {0ull, 7ull, 4096ull}) {
      const double mqssd =
          predict_mqssd(profile, OpKind::Write, r, k, per_worker);
      const double affine_value = predict_affine(
          affine, profile.geometry(), OpKind::Write, r, k, per_worker);
      CHECK(mqssd / k ==
            doctest::Approx(affine_value / k).epsilon(1e-12));
    }
  }
}

TEST_CASE("predict_mqssd limits and monotonicity") {
  const MqssdProfile profile = decreasing_profile();
  const std::uint64_t per_worker = 16ull << 20;
  const double page = 4096.0;

  // Sequential single-worker limit: B / transfer(1).
  CHECK(predict_mqssd(profile, OpKind::Read, 0, 1, per_worker) ==
        doctest::Approx(page / profile.read_transfer().eval(1))
            .epsilon(1e-12));

  // Decreasing cost functions: throughput nondecreasing in k at fixed r.
  for (OpKind op : {OpKind::Read, OpKind::Write}) {
    for (std::uint64_t r : {0ull, 64ull, 4096ull}) {
      double previous = 0.0;
      for (unsigned k = 1; k <= 128; ++k) {
        const double value = predict_mqssd(profile, op, r, k, per_worker);
        CHECK(value >= previous);
        previous = value;
      }
    }
  }

  // Strictly decreasing in r at fixed k (setup costs are positive).
  double previous = predict_mqssd(profile, OpKind::Write, 0, 8, per_worker);
  for (std::uint64_t r : {1ull, 16ull, 256ull, 4096ull}) {
    const double value =
        predict_mqssd(profile, OpKind::Write, r, 8, per_worker);
    CHECK(value < previous);
    previous = value;
  }

  CHECK_THROWS_AS(predict_mqssd(profile, OpKind::Read, 0, 129, per_worker),
                  std::domain_error);
  CHECK_THROWS_AS(
      predict_mqssd(profile, OpKind::Read, 4097, 1, per_worker),  // r > pages
      std::invalid_argument);
}

TEST_CASE("device profile JSON round trip preserves exact values") {
  DeviceProfile profile{
      "unit-device",
      DamParams(1.75, 3.5),
      PdamParams(1.75, 3.5, 8),
      AffineParams({12.25, 0.375}, {100.5, 1.625}),
      decreasing_profile(),
      Provenance{"unit", "2026-01-01T00:00:00Z"},
  };
  const std::string text = device_profile_to_json(profile);
  const DeviceProfile parsed = device_profile_from_json(text);

  CHECK(parsed.device_label == profile.device_label);
  CHECK(parsed.dam.page_cost_us.read == profile.dam.page_cost_us.read);
  CHECK(parsed.pdam.pages_per_cycle == 8);
  CHECK(parsed.affine.write.setup_us == 100.5);
  CHECK(parsed.mqssd.k_max() == profile.mqssd.k_max());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(parsed.mqssd.write_transfer().numerator()[i] ==
          profile.mqssd.write_transfer().numerator()[i]);
    CHECK(parsed.mqssd.write_transfer().denominator()[i] ==
          profile.mqssd.write_transfer().denominator()[i]);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parsed.mqssd.write_setup().numerator()[i] ==
          profile.mqssd.write_setup().numerator()[i]);
    CHECK(parsed.mqssd.read_setup().denominator()[i] ==
          profile.mqssd.read_setup().denominator()[i]);
    CHECK(parsed.mqssd.read_transfer().numerator()[i] ==
          profile.mqssd.read_transfer().numerator()[i]);
  }

  // Second round trip is byte-identical.
  CHECK(device_profile_to_json(parsed) == text);
}
