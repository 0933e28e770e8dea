#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mqssd {

enum class OpKind { Read, Write };

std::string_view to_string(OpKind op);
OpKind op_kind_from_string(std::string_view text);

// One value per operation kind.
struct PerOp {
  double read = 0.0;
  double write = 0.0;
  double of(OpKind op) const { return op == OpKind::Read ? read : write; }
};

// Device/working-set geometry: page size B, working set N, memory M, with
// 1 <= B <= M < N and B a power of two (aligned direct I/O needs it).
class PageGeometry {
 public:
  PageGeometry(std::uint64_t page_size_bytes, std::uint64_t working_set_bytes,
               std::uint64_t memory_bytes);

  std::uint64_t page_size_bytes() const { return page_size_; }
  std::uint64_t working_set_bytes() const { return working_set_; }
  std::uint64_t memory_bytes() const { return memory_; }

 private:
  std::uint64_t page_size_;
  std::uint64_t working_set_;
  std::uint64_t memory_;
};

// Flat-cost model: every page transfer costs the same.
struct DamParams {
  PerOp page_cost_us;
  DamParams(double read_page_cost_us, double write_page_cost_us);
};

// Up to pages_per_cycle pages transfer concurrently per I/O cycle.
struct PdamParams {
  PerOp cycle_cost_us;
  std::uint32_t pages_per_cycle = 1;
  PdamParams(double read_cycle_cost_us, double write_cycle_cost_us,
             std::uint32_t pages_per_cycle);
};

// Fixed setup cost per random access plus a per-page bandwidth cost.
struct AffineOpCosts {
  double setup_us = 0.0;
  double transfer_us = 0.0;
};

struct AffineParams {
  AffineOpCosts read;
  AffineOpCosts write;
  AffineParams(AffineOpCosts read_costs, AffineOpCosts write_costs);
  const AffineOpCosts& of(OpKind op) const {
    return op == OpKind::Read ? read : write;
  }
};

// Ratio of two low-degree polynomials of the concurrency level k; the home
// of the fitted setup / page-transfer cost curves. Coefficients are stored
// in ascending-degree order with vector length 3 (degree 2) or 4 (degree 3).
// The denominator is normalized so den[0] == 1 (the coefficient vector of a
// rational function is only defined up to scale). Construction verifies the
// denominator and the evaluated function are positive everywhere on
// [1, k_max]; evaluation outside that interval is a domain error.
class RationalFn {
 public:
  RationalFn(std::vector<double> numerator, std::vector<double> denominator,
             double k_max);

  double eval(double k) const;
  double operator()(double k) const { return eval(k); }

  const std::vector<double>& numerator() const { return num_; }
  const std::vector<double>& denominator() const { return den_; }
  double k_max() const { return k_max_; }

  // Constant function value/1 padded to `coefficients` terms per side.
  static RationalFn constant(double value, double k_max,
                             std::size_t coefficients = 3);

 private:
  std::vector<double> num_;
  std::vector<double> den_;
  double k_max_;
};

double eval_rational(const RationalFn& fn, double k);

// Concurrency-dependent cost model for one device: setup and page transfer
// cost functions, separate for writes (s, beta) and reads (t, alpha).
// Setup functions and the read transfer use degree (2,2); the write transfer
// uses degree (3,3). All four must be positive on [1, k_max].
class MqssdProfile {
 public:
  MqssdProfile(RationalFn write_setup, RationalFn write_transfer,
               RationalFn read_setup, RationalFn read_transfer,
               PageGeometry geometry, double k_max);

  const RationalFn& write_setup() const { return write_setup_; }
  const RationalFn& write_transfer() const { return write_transfer_; }
  const RationalFn& read_setup() const { return read_setup_; }
  const RationalFn& read_transfer() const { return read_transfer_; }
  const RationalFn& setup(OpKind op) const {
    return op == OpKind::Read ? read_setup_ : write_setup_;
  }
  const RationalFn& transfer(OpKind op) const {
    return op == OpKind::Read ? read_transfer_ : write_transfer_;
  }
  const PageGeometry& geometry() const { return geometry_; }
  double k_max() const { return k_max_; }

 private:
  RationalFn write_setup_;
  RationalFn write_transfer_;
  RationalFn read_setup_;
  RationalFn read_transfer_;
  PageGeometry geometry_;
  double k_max_;
};

struct Provenance {
  std::string source;
  std::string calibrated_at;
};

// Calibrated parameter sets for all four models, side by side.
struct DeviceProfile {
  std::string device_label;
  DamParams dam;
  PdamParams pdam;
  AffineParams affine;
  MqssdProfile mqssd;
  Provenance provenance;
};

// Throughput predictors, aggregate device throughput in bytes/us.
//
// All four share the per-worker time interpretation: a worker transfers
// per_worker_bytes split into per_worker_bytes/B pages, random_accesses of
// which each pay the model's setup cost; aggregate throughput is
// k * per_worker_bytes / per_worker_elapsed. DAM and PDAM have no setup
// component, so their predictions reduce to the classic closed forms and
// ignore random_accesses entirely.

double predict_dam(const DamParams& params, const PageGeometry& geometry,
                   OpKind op, std::uint64_t random_accesses,
                   unsigned concurrency);

double predict_pdam(const PdamParams& params, const PageGeometry& geometry,
                    OpKind op, std::uint64_t random_accesses,
                    unsigned concurrency);

// Effective per-page cost cycle_cost/min(k, P); with P=1 this is the DAM
// page cost for every k.
double pdam_page_cost(const PdamParams& params, OpKind op,
                      unsigned concurrency);

double predict_affine(const AffineParams& params, const PageGeometry& geometry,
                      OpKind op, std::uint64_t random_accesses,
                      unsigned concurrency, std::uint64_t per_worker_bytes);

double predict_mqssd(const MqssdProfile& profile, OpKind op,
                     std::uint64_t random_accesses, unsigned concurrency,
                     std::uint64_t per_worker_bytes);

}  // namespace mqssd
