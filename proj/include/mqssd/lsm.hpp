#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mqssd/models.hpp"

namespace mqssd {

// Leveled LSM-tree data layout: fanout F, SST file size T, L0 file count C,
// DB block size B', working set N. The single-level layout (one sorted run,
// C = 0, F = infinity) is a distinct marker with its own cost operations.
class LsmLayout {
 public:
  static LsmLayout leveled(double fanout, std::uint64_t file_size_bytes,
                           std::uint64_t l0_file_count,
                           std::uint64_t block_size_bytes,
                           std::uint64_t working_set_bytes,
                           std::uint64_t entry_size_bytes);
  static LsmLayout single_level(std::uint64_t file_size_bytes,
                                std::uint64_t block_size_bytes,
                                std::uint64_t working_set_bytes,
                                std::uint64_t entry_size_bytes);

  bool is_single_level() const { return std::isinf(fanout_); }
  double fanout() const { return fanout_; }
  std::uint64_t file_size_bytes() const { return file_size_; }
  std::uint64_t l0_file_count() const { return l0_files_; }
  std::uint64_t block_size_bytes() const { return block_size_; }
  std::uint64_t working_set_bytes() const { return working_set_; }
  std::uint64_t entry_size_bytes() const { return entry_size_; }

 private:
  LsmLayout(double fanout, std::uint64_t file_size, std::uint64_t l0_files,
            std::uint64_t block_size, std::uint64_t working_set,
            std::uint64_t entry_size);
  double fanout_;
  std::uint64_t file_size_;
  std::uint64_t l0_files_;
  std::uint64_t block_size_;
  std::uint64_t working_set_;
  std::uint64_t entry_size_;
};

// L = max(1, ceil(log_F(N / (C*T)))). Domain error for the single-level
// marker, whose level count is 1 by definition.
unsigned level_count(const LsmLayout& layout);

// C + L for leveled layouts, 1 for the single-level layout.
unsigned sorted_run_count(const LsmLayout& layout);

// Cost of reading and rewriting `files` SST files at concurrency k:
// files * (t(k) + s(k) + T*(alpha(k)+beta(k))/B).
double file_rw_cost(std::uint64_t files, const LsmLayout& layout,
                    const MqssdProfile& profile, unsigned k);

// Amortized insert/update/delete cost per byte:
// ((C + F*L)/T) * (t(k) + s(k) + T*(alpha(k)+beta(k))/B).
// Guarded error for the single-level marker (use sl_insert_cost).
double insert_cost_per_byte(const LsmLayout& layout,
                            const MqssdProfile& profile, unsigned k);
double insert_cost_per_entry(const LsmLayout& layout,
                             const MqssdProfile& profile, unsigned k);

// Point query: one block read per sorted run,
// (C + L) * (t(k) + B'*alpha(k)/B). Accepts the single-level marker, where
// it equals sl_query_cost exactly.
double query_cost(const LsmLayout& layout, const MqssdProfile& profile,
                  unsigned k);

// query_cost plus X * (t(k)/T + alpha(k)/B) to stream scan_bytes.
double scan_cost(const LsmLayout& layout, const MqssdProfile& profile,
                 unsigned k, std::uint64_t scan_bytes);

// Single-level compaction cost per flushed key-value pair:
// t(k) + s(k) + T*(alpha(k)+beta(k))/B (files touched approaches the number
// of pairs per file, which cancels against the batch size).
double sl_insert_cost(const LsmLayout& layout, const MqssdProfile& profile,
                      unsigned k);

// Single-level point query: t(k) + B'*alpha(k)/B.
double sl_query_cost(const LsmLayout& layout, const MqssdProfile& profile,
                     unsigned k);

// ---- Data movement simulation ----------------------------------------

struct DataMovementConfig {
  std::uint64_t n_keys = 1ull << 20;
  std::uint64_t keys_per_file = 1024;  // T in keys
  std::uint64_t l0_file_count = 4;     // C
  std::vector<double> fanouts = {2, 4, 8, 16};
  std::uint64_t seed = 0;
  // Per-compaction invariant checks (conservation, level ordering, victim
  // optimality). Violations throw std::logic_error.
  bool validate = true;
};

struct LevelTransitionStats {
  unsigned from_level = 0;
  double mean_files_touched = 0.0;
  double variance = 0.0;
  std::uint64_t compactions = 0;
  std::uint64_t min_files_touched = 0;
  std::uint64_t max_files_touched = 0;
};

// Per-fanout files-touched statistics. The L0->L1 transition is reported
// separately and excluded from the deeper-level pool: L0 files overlap, so
// those merges almost always touch all C files regardless of F.
struct CompactionStats {
  double fanout = 0.0;
  double mean_files_touched = 0.0;  // transitions from levels >= 1, pooled
  double variance = 0.0;
  std::uint64_t compaction_count = 0;
  std::uint64_t min_files_touched = 0;  // 1 = a trivial move happened
  std::uint64_t max_files_touched = 0;
  double l0_mean_files_touched = 0.0;
  std::uint64_t l0_compaction_count = 0;
  std::vector<LevelTransitionStats> per_transition;
};

struct DataMovementReport {
  std::vector<CompactionStats> per_fanout;
  // Linear fit of mean files touched (levels >= 1) against F.
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double fit_r_squared = 0.0;
};

// Simulates the leveled data movement policy: keys 0..N-1 arrive in a
// uniformly random order, flush in sorted batches of keys_per_file to L0;
// a level over capacity (C files at L0, C*F^(i-1) files at level i) compacts
// the file overlapping the fewest next-level files (ties: smallest min key)
// into the next level, re-partitioned into keys_per_file-sized files.
// L0->L1 merges all overlapping L0 files with all overlapped L1 files.
DataMovementReport simulate_data_movement(const DataMovementConfig& config);

}  // namespace mqssd
