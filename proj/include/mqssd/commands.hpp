#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mqssd/bench.hpp"

namespace mqssd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

struct BenchOptions {
  WorkloadSpec spec;
  std::filesystem::path oracle_config;  // synthetic backend when set
  std::filesystem::path out_csv;        // empty -> stdout
  std::uint64_t precondition_bytes = 0;
  bool dry_run = false;  // emit the offset plan only
  std::uint64_t unit_transfer_bytes = 1ull << 20;
};

struct CalibrateOptions {
  std::filesystem::path trials_csv;
  std::filesystem::path out_profile;
  std::filesystem::path out_report;
  std::uint64_t page_size_bytes = 4096;
  std::uint64_t working_set_bytes = 0;  // 0 -> derived from the data
  std::uint64_t memory_bytes = 0;       // 0 -> derived
  std::uint32_t pdam_pages_per_cycle = 8;
  std::string device_label;
};

struct PredictOptions {
  std::filesystem::path profile_json;
  std::filesystem::path out_csv;
  std::vector<OpKind> ops = {OpKind::Read, OpKind::Write};
  std::vector<unsigned> k_grid = {1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<double> r_fraction_grid;  // empty -> bench default grid
  std::uint64_t per_worker_bytes = 1ull << 30;
};

struct CompareOptions {
  std::filesystem::path predictions_csv;
  std::filesystem::path trials_csv;
  std::filesystem::path out_csv;  // optional error-metric rows
};

struct LsmOptions {
  enum class Mode { Costs, Simulate };
  Mode mode = Mode::Costs;
  std::filesystem::path profile_json;  // costs mode
  std::filesystem::path out_csv;
  // layout grid (costs mode)
  std::vector<double> fanouts = {2, 4, 8, 16, 32};
  std::vector<unsigned> k_grid = {1, 2, 4, 8, 16, 32};
  std::uint64_t file_size_bytes = 64ull << 20;
  std::uint64_t l0_file_count = 4;
  std::uint64_t block_size_bytes = 4096;
  std::uint64_t working_set_bytes = 128ull << 30;
  std::uint64_t entry_size_bytes = 2064;  // 16 B key + 2048 B value
  std::uint64_t scan_bytes = 0;           // 0 -> 128 entries
  bool include_single_level = true;
  // Optional measurement alignment: fits one scalar per metric by least
  // squares and emits scaled (relative) predictions alongside.
  std::filesystem::path align_csv;
  // simulate mode
  std::uint64_t n_keys = 1ull << 20;
  std::uint64_t keys_per_file = 1024;
  std::uint64_t seed = 0;
  std::filesystem::path simulate_config;  // JSON {n_keys,t_keys,c,f_grid,seed}
};

// Each command returns a process exit code and writes human-readable
// summaries to `out` and diagnostics to `err`.
int cmd_bench(const BenchOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_calibrate(const CalibrateOptions& options, std::ostream& out,
                  std::ostream& err);
int cmd_predict(const PredictOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_compare(const CompareOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_lsm(const LsmOptions& options, std::ostream& out, std::ostream& err);

// Flag parsing + dispatch; what tools/mqssd.cpp calls.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

// Grid syntax shared by the --k-grid/--r-grid/--fanouts flags: comma lists
// whose elements are single values or start:stop:factor geometric ranges.
std::vector<double> parse_double_grid(const std::string& text);
std::vector<unsigned> parse_k_grid(const std::string& text);

}  // namespace mqssd::cli
