#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqssd/models.hpp"

namespace mqssd {

// One benchmark measurement. elapsed_us is wall time from the global start
// barrier to the last worker completion; throughput is the derived aggregate
// k * per_worker_bytes / elapsed_us.
struct TrialRecord {
  std::string device_label;
  OpKind op = OpKind::Read;
  unsigned k = 1;
  std::uint64_t random_accesses = 0;  // r, per worker
  double r_fraction = 0.0;            // r * B / per_worker_bytes
  std::uint64_t per_worker_bytes = 0;
  double elapsed_us = 0.0;
  double throughput_bytes_per_us = 0.0;
  unsigned repetition = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

inline constexpr std::string_view kTrialCsvHeader =
    "device_label,op,k,r,r_fraction,per_worker_bytes,elapsed_us,"
    "throughput_bytes_per_us,repetition,seed,status";

void write_trial_csv_header(std::ostream& out);
void write_trial_csv_row(std::ostream& out, const TrialRecord& record);
void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records);

// Parses the documented CSV schema. Schema violations raise SchemaError
// with the 1-based line number.
std::vector<TrialRecord> read_trial_csv(std::istream& in);
std::vector<TrialRecord> load_trial_csv(const std::filesystem::path& path);
void save_trial_csv(const std::filesystem::path& path,
                    std::span<const TrialRecord> records);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);
double parse_double(std::string_view text);  // SchemaError on garbage

}  // namespace mqssd
