#include "mqssd/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "poly.hpp"

namespace mqssd {

namespace {

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

void check_degree_vector(const std::vector<double>& coeffs, const char* side) {
  if (coeffs.size() != 3 && coeffs.size() != 4) {
    throw std::invalid_argument(std::string("RationalFn ") + side +
                                " must have 3 or 4 coefficients (degree 2 "
                                "or 3), got " +
                                std::to_string(coeffs.size()));
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument(std::string("RationalFn ") + side +
                                  " has a non-finite coefficient");
    }
  }
}

}  // namespace

std::string_view to_string(OpKind op) {
  return op == OpKind::Read ? "read" : "write";
}

OpKind op_kind_from_string(std::string_view text) {
  if (text == "read") return OpKind::Read;
  if (text == "write") return OpKind::Write;
  throw std::invalid_argument("unknown operation kind: '" +
                              std::string(text) + "' (expected read|write)");
}

PageGeometry::PageGeometry(std::uint64_t page_size_bytes,
                           std::uint64_t working_set_bytes,
                           std::uint64_t memory_bytes)
    : page_size_(page_size_bytes),
      working_set_(working_set_bytes),
      memory_(memory_bytes) {
  if (page_size_ < 1 || page_size_ > memory_ || memory_ >= working_set_) {
    throw std::invalid_argument(
        "PageGeometry requires 1 <= B <= M < N (B=" +
        std::to_string(page_size_) + ", M=" + std::to_string(memory_) +
        ", N=" + std::to_string(working_set_) + ")");
  }
  if (!is_power_of_two(page_size_)) {
    throw std::invalid_argument("page size must be a power of two, got " +
                                std::to_string(page_size_));
  }
}

DamParams::DamParams(double read_page_cost_us, double write_page_cost_us)
    : page_cost_us{read_page_cost_us, write_page_cost_us} {
  if (!(read_page_cost_us > 0.0) || !(write_page_cost_us > 0.0)) {
    throw std::invalid_argument("DAM page cost must be > 0");
  }
}

PdamParams::PdamParams(double read_cycle_cost_us, double write_cycle_cost_us,
                       std::uint32_t pages_per_cycle)
    : cycle_cost_us{read_cycle_cost_us, write_cycle_cost_us},
      pages_per_cycle(pages_per_cycle) {
  if (!(read_cycle_cost_us > 0.0) || !(write_cycle_cost_us > 0.0)) {
    throw std::invalid_argument("PDAM cycle cost must be > 0");
  }
  if (pages_per_cycle < 1) {
    throw std::invalid_argument("PDAM P must be >= 1");
  }
}

AffineParams::AffineParams(AffineOpCosts read_costs, AffineOpCosts write_costs)
    : read(read_costs), write(write_costs) {
  for (const auto* costs : {&read, &write}) {
    if (!(costs->setup_us >= 0.0)) {
      throw std::invalid_argument("Affine setup cost must be >= 0");
    }
    if (!(costs->transfer_us > 0.0)) {
      throw std::invalid_argument("Affine transfer cost must be > 0");
    }
  }
}

RationalFn::RationalFn(std::vector<double> numerator,
                       std::vector<double> denominator, double k_max)
    : num_(std::move(numerator)), den_(std::move(denominator)), k_max_(k_max) {
  check_degree_vector(num_, "numerator");
  check_degree_vector(den_, "denominator");
  if (!(k_max_ >= 1.0) || !std::isfinite(k_max_)) {
    throw std::invalid_argument("RationalFn k_max must be finite and >= 1");
  }
  // Normalize to den[0] == 1; the value is unchanged by scaling both sides.
  const double d0 = den_[0];
  if (d0 == 0.0) {
    throw std::invalid_argument(
        "RationalFn denominator constant term must be nonzero");
  }
  if (d0 != 1.0) {
    for (double& c : num_) c /= d0;
    for (double& d : den_) d /= d0;
  }
  if (!detail::poly_positive_on(den_, 1.0, k_max_)) {
    throw std::invalid_argument(
        "RationalFn denominator must be positive on [1, k_max]");
  }
  if (!detail::poly_positive_on(num_, 1.0, k_max_)) {
    throw std::invalid_argument(
        "RationalFn value must be positive on [1, k_max]");
  }
}

double RationalFn::eval(double k) const {
  if (!(k >= 1.0) || !(k <= k_max_)) {
    throw std::domain_error("RationalFn evaluated at k=" + std::to_string(k) +
                            " outside [1, " + std::to_string(k_max_) + "]");
  }
  return detail::poly_eval(num_, k) / detail::poly_eval(den_, k);
}

RationalFn RationalFn::constant(double value, double k_max,
                                std::size_t coefficients) {
  std::vector<double> num(coefficients, 0.0);
  std::vector<double> den(coefficients, 0.0);
  num[0] = value;
  den[0] = 1.0;
  return RationalFn(std::move(num), std::move(den), k_max);
}

double eval_rational(const RationalFn& fn, double k) { return fn.eval(k); }

MqssdProfile::MqssdProfile(RationalFn write_setup, RationalFn write_transfer,
                           RationalFn read_setup, RationalFn read_transfer,
                           PageGeometry geometry, double k_max)
    : write_setup_(std::move(write_setup)),
      write_transfer_(std::move(write_transfer)),
      read_setup_(std::move(read_setup)),
      read_transfer_(std::move(read_transfer)),
      geometry_(geometry),
      k_max_(k_max) {
  if (!(k_max_ >= 1.0)) {
    throw std::invalid_argument("MqssdProfile k_max must be >= 1");
  }
  if (write_setup_.numerator().size() != 3 ||
      read_setup_.numerator().size() != 3 ||
      read_transfer_.numerator().size() != 3) {
    throw std::invalid_argument(
        "MqssdProfile s/t/alpha must have degree (2,2)");
  }
  if (write_transfer_.numerator().size() != 4 ||
      write_transfer_.denominator().size() != 4) {
    throw std::invalid_argument("MqssdProfile beta must have degree (3,3)");
  }
  for (const RationalFn* fn :
       {&write_setup_, &write_transfer_, &read_setup_, &read_transfer_}) {
    if (fn->k_max() < k_max_) {
      throw std::invalid_argument(
          "MqssdProfile cost function k_max is below the profile k_max");
    }
  }
}

namespace {

void check_concurrency(unsigned concurrency) {
  if (concurrency < 1) {
    throw std::invalid_argument("concurrency must be >= 1");
  }
}

}  // namespace

double predict_dam(const DamParams& params, const PageGeometry& geometry,
                   OpKind op, std::uint64_t /*random_accesses*/,
                   unsigned concurrency) {
  check_concurrency(concurrency);
  return static_cast<double>(geometry.page_size_bytes()) /
         params.page_cost_us.of(op);
}

double predict_pdam(const PdamParams& params, const PageGeometry& geometry,
                    OpKind op, std::uint64_t /*random_accesses*/,
                    unsigned concurrency) {
  check_concurrency(concurrency);
  const double effective =
      std::min<double>(concurrency, params.pages_per_cycle);
  return static_cast<double>(geometry.page_size_bytes()) * effective /
         params.cycle_cost_us.of(op);
}

double pdam_page_cost(const PdamParams& params, OpKind op,
                      unsigned concurrency) {
  check_concurrency(concurrency);
  const double effective =
      std::min<double>(concurrency, params.pages_per_cycle);
  return params.cycle_cost_us.of(op) / effective;
}

double predict_affine(const AffineParams& params, const PageGeometry& geometry,
                      OpKind op, std::uint64_t random_accesses,
                      unsigned concurrency, std::uint64_t per_worker_bytes) {
  check_concurrency(concurrency);
  if (per_worker_bytes < geometry.page_size_bytes()) {
    throw std::invalid_argument(
        "per_worker_bytes is below one page (degenerate workload)");
  }
  const AffineOpCosts& costs = params.of(op);
  const double pages = static_cast<double>(per_worker_bytes) /
                       static_cast<double>(geometry.page_size_bytes());
  const double worker_elapsed_us =
      static_cast<double>(random_accesses) * costs.setup_us +
      pages * costs.transfer_us;
  return static_cast<double>(concurrency) *
         static_cast<double>(per_worker_bytes) / worker_elapsed_us;
}

double predict_mqssd(const MqssdProfile& profile, OpKind op,
                     std::uint64_t random_accesses, unsigned concurrency,
                     std::uint64_t per_worker_bytes) {
  check_concurrency(concurrency);
  if (concurrency > profile.k_max()) {
    throw std::domain_error("concurrency " + std::to_string(concurrency) +
                            " exceeds the calibrated k_max " +
                            std::to_string(profile.k_max()));
  }
  const double pages =
      static_cast<double>(per_worker_bytes) /
      static_cast<double>(profile.geometry().page_size_bytes());
  if (static_cast<double>(random_accesses) > pages) {
    throw std::invalid_argument(
        "random access count exceeds pages per worker");
  }
  const double k = static_cast<double>(concurrency);
  const double worker_elapsed_us =
      static_cast<double>(random_accesses) * profile.setup(op).eval(k) +
      pages * profile.transfer(op).eval(k);
  return k * static_cast<double>(per_worker_bytes) / worker_elapsed_us;
}

}  // namespace mqssd
