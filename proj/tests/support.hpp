#pragma once

// Shared fixtures: a strictly decreasing ground-truth profile sized so that
// unweighted per-k regression recovers its costs under noise, plus a
// constant-cost profile for the collapse cases.

#include <cstdint>

#include "mqssd/bench.hpp"
#include "mqssd/models.hpp"
#include "mqssd/oracle.hpp"

namespace mqssd::testing {

inline PageGeometry desk_geometry() {
  // 4 KiB pages, 256 MiB working set, 64 MiB memory.
  return PageGeometry(4096, 256ull << 20, 64ull << 20);
}

// All four cost functions strictly decreasing and positive on [1, 128].
inline MqssdProfile decreasing_profile(double k_max = 128.0) {
  return MqssdProfile(
      RationalFn({24.0, 6.0, 0.5}, {1.0, 0.4, 0.05}, k_max),           // s
      RationalFn({6.0, 1.5, 0.3, 0.02}, {1.0, 0.5, 0.1, 0.01}, k_max),  // beta
      RationalFn({10.0, 2.0, 0.16}, {1.0, 0.5, 0.04}, k_max),          // t
      RationalFn({2.4, 0.5, 0.02}, {1.0, 0.4, 0.02}, k_max),           // alpha
      desk_geometry(), k_max);
}

// Zero-ish setup, constant transfer: elapsed depends on neither k nor r.
inline MqssdProfile constant_profile(double transfer_us = 2.0,
                                     double k_max = 128.0) {
  return MqssdProfile(RationalFn::constant(1e-9, k_max),
                      RationalFn::constant(transfer_us, k_max, 4),
                      RationalFn::constant(1e-9, k_max),
                      RationalFn::constant(transfer_us, k_max),
                      desk_geometry(), k_max);
}

// Desk-scale oracle workload: 16 MiB per worker (4096 pages).
inline WorkloadSpec desk_spec() {
  WorkloadSpec spec;
  spec.device_label = "desk";
  spec.file_size_bytes = 4ull << 30;
  spec.per_worker_bytes = 16ull << 20;
  spec.repetitions = 1;
  spec.seed = 42;
  return spec;
}

}  // namespace mqssd::testing
