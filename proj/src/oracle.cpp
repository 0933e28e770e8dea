#include "mqssd/oracle.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mqssd/errors.hpp"
#include "mqssd/rng.hpp"
#include "json_detail.hpp"

namespace mqssd {

OracleConfig::OracleConfig(MqssdProfile ground_truth_profile,
                           double noise_sigma, std::uint64_t noise_seed,
                           double floor_us)
    : ground_truth(std::move(ground_truth_profile)),
      noise_relative_sigma(noise_sigma),
      seed(noise_seed),
      latency_floor_us(floor_us) {
  if (!(noise_relative_sigma >= 0.0) || noise_relative_sigma >= 0.5) {
    throw std::invalid_argument(
        "oracle noise_relative_sigma must be in [0, 0.5)");
  }
  if (!(latency_floor_us >= 0.0)) {
    throw std::invalid_argument("oracle latency floor must be >= 0");
  }
}

double simulate_trial(const OracleConfig& config, OpKind op, unsigned k,
                      std::uint64_t r, std::uint64_t per_worker_bytes,
                      unsigned repetition) {
  const MqssdProfile& truth = config.ground_truth;
  if (k < 1 || k > truth.k_max()) {
    throw std::domain_error("oracle: k=" + std::to_string(k) +
                            " outside the ground truth domain [1, " +
                            std::to_string(truth.k_max()) + "]");
  }
  const double pages =
      static_cast<double>(per_worker_bytes) /
      static_cast<double>(truth.geometry().page_size_bytes());
  const double kd = static_cast<double>(k);
  double elapsed = static_cast<double>(r) * truth.setup(op).eval(kd) +
                   pages * truth.transfer(op).eval(kd);
  if (config.noise_relative_sigma > 0.0) {
    KeyedRng rng{config.seed, static_cast<std::uint64_t>(op), k, r,
                 repetition};
    elapsed *= 1.0 + config.noise_relative_sigma * rng.next_normal();
  }
  return std::max(elapsed, config.latency_floor_us);
}

std::vector<TrialRecord> generate_dataset(const OracleConfig& config,
                                          const WorkloadSpec& spec) {
  spec.validate();
  for (unsigned k : spec.k_grid) {
    if (k > config.ground_truth.k_max()) {
      throw std::domain_error(
          "oracle: workload k grid exceeds ground truth k_max");
    }
  }
  std::vector<TrialRecord> records;
  for (OpKind op : spec.ops) {
    for (unsigned k : spec.k_grid) {
      for (double fraction : spec.r_fraction_grid) {
        const std::uint64_t r = spec.random_accesses_for(fraction);
        for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
          const double elapsed =
              simulate_trial(config, op, k, r, spec.per_worker_bytes, rep);
          TrialRecord record;
          record.device_label = spec.device_label;
          record.op = op;
          record.k = k;
          record.random_accesses = r;
          record.r_fraction =
              static_cast<double>(r) /
              static_cast<double>(spec.pages_per_worker());
          record.per_worker_bytes = spec.per_worker_bytes;
          record.elapsed_us = elapsed;
          record.throughput_bytes_per_us =
              static_cast<double>(k) *
              static_cast<double>(spec.per_worker_bytes) / elapsed;
          record.repetition = rep;
          record.seed = config.seed;
          record.status = "ok";
          records.push_back(std::move(record));
        }
      }
    }
  }
  return records;
}

double OracleBackend::execute_trial(const WorkloadSpec& spec, OpKind op,
                                    unsigned k, std::uint64_t r,
                                    unsigned repetition,
                                    const OffsetPlan& plan) {
  (void)plan;  // planned and validated by run_trial; no bytes move here
  return simulate_trial(config_, op, k, r, spec.per_worker_bytes, repetition);
}

std::string oracle_config_to_json(const OracleConfig& config) {
  nlohmann::json j{
      {"mqssd", detail::mqssd_to_json(config.ground_truth)},
      {"geometry", detail::geometry_to_json(config.ground_truth.geometry())},
      {"noise_relative_sigma", config.noise_relative_sigma},
      {"seed", config.seed},
      {"latency_floor_us", config.latency_floor_us},
  };
  return j.dump(2) + "\n";
}

OracleConfig oracle_config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("oracle JSON parse error: ") + e.what());
  }
  try {
    PageGeometry geometry = detail::geometry_from_json(j.at("geometry"));
    MqssdProfile truth = detail::mqssd_from_json(j.at("mqssd"), geometry);
    return OracleConfig(std::move(truth),
                        j.value("noise_relative_sigma", 0.0),
                        j.value("seed", std::uint64_t{0}),
                        j.value("latency_floor_us", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("oracle JSON schema error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("oracle JSON invalid values: ") + e.what());
  }
}

OracleConfig load_oracle_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open oracle config: " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return oracle_config_from_json(text);
}

void save_oracle_config(const std::filesystem::path& path,
                        const OracleConfig& config) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write oracle config: " + path.string());
  }
  out << oracle_config_to_json(config);
}

}  // namespace mqssd
