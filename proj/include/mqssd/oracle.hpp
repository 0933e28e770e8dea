#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mqssd/bench.hpp"
#include "mqssd/models.hpp"
#include "mqssd/trial.hpp"

namespace mqssd {

// Synthetic storage backend: a device that behaves exactly like its
// MqssdProfile says, plus optional multiplicative Gaussian noise. Ground
// truth for calibration round trips and a hardware-free bench target.
struct OracleConfig {
  MqssdProfile ground_truth;
  double noise_relative_sigma = 0.0;  // must be < 0.5
  std::uint64_t seed = 0;
  double latency_floor_us = 0.0;

  OracleConfig(MqssdProfile ground_truth, double noise_relative_sigma = 0.0,
               std::uint64_t seed = 0, double latency_floor_us = 0.0);
};

// elapsed = (r * setup(k) + pages * transfer(k)) * (1 + eps) with
// eps ~ Normal(0, sigma) drawn from a stream keyed by (seed, op, k, r,
// repetition) -- not call order -- so concurrent generation reproduces.
double simulate_trial(const OracleConfig& config, OpKind op, unsigned k,
                      std::uint64_t r, std::uint64_t per_worker_bytes,
                      unsigned repetition = 0);

// Full grid of TrialRecords with the same schema the real harness emits.
std::vector<TrialRecord> generate_dataset(const OracleConfig& config,
                                          const WorkloadSpec& spec);

class OracleBackend : public IoBackend {
 public:
  explicit OracleBackend(OracleConfig config) : config_(std::move(config)) {}

  double execute_trial(const WorkloadSpec& spec, OpKind op, unsigned k,
                       std::uint64_t r, unsigned repetition,
                       const OffsetPlan& plan) override;
  std::string label() const override { return "oracle"; }

  const OracleConfig& config() const { return config_; }

 private:
  OracleConfig config_;
};

// JSON document: {"mqssd": {...}, "geometry": {...}, "noise_relative_sigma",
// "seed", "latency_floor_us"} where mqssd/geometry use the DeviceProfile
// schema.
std::string oracle_config_to_json(const OracleConfig& config);
OracleConfig oracle_config_from_json(std::string_view text);
OracleConfig load_oracle_config(const std::filesystem::path& path);
void save_oracle_config(const std::filesystem::path& path,
                        const OracleConfig& config);

}  // namespace mqssd
