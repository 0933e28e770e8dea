#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "mqssd/models.hpp"
#include "mqssd/trial.hpp"

namespace mqssd {

// Concurrent file-I/O microbenchmark: k workers each transfer
// per_worker_bytes against a shared file using r random accesses, for every
// cell of (op, k, r_fraction) x repetitions.
struct WorkloadSpec {
  std::string device_label = "device";
  std::filesystem::path file_path;
  std::uint64_t file_size_bytes = 50ull << 30;
  std::uint64_t per_worker_bytes = 1ull << 30;
  std::vector<OpKind> ops = {OpKind::Read, OpKind::Write};
  std::vector<unsigned> k_grid = {1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<double> r_fraction_grid = default_r_fraction_grid();
  unsigned repetitions = 5;
  std::uint64_t page_size_bytes = 4096;
  bool direct_io = true;
  std::uint64_t seed = 0;

  // 8 log-spaced fractions of pages accessed, 0.1% .. 100%.
  static std::vector<double> default_r_fraction_grid();

  std::uint64_t pages_per_worker() const {
    return per_worker_bytes / page_size_bytes;
  }
  // r count for a fraction of pages accessed, >= 1.
  std::uint64_t random_accesses_for(double r_fraction) const;

  // Throws std::invalid_argument when any invariant fails: k*N_w must fit in
  // the file for every k, sizes must be page multiples, fractions in (0,1].
  void validate() const;
};

struct Chunk {
  std::uint64_t offset_bytes = 0;
  std::uint64_t length_bytes = 0;
};

// Per-worker chunk lists. The file is split into k disjoint equal regions;
// worker j only ever touches region j, so no byte is shared between workers.
struct OffsetPlan {
  std::vector<std::vector<Chunk>> workers;
  std::uint64_t region_bytes = 0;  // per-worker region size (cache-defeat ratio)
};

// Deterministic given (spec.seed, k, r, repetition). Every chunk start is
// page-aligned, chunk lengths are page multiples summing to per_worker_bytes
// (floor(N_w/r) rounded down to a page, last chunk absorbs the remainder),
// and chunks never overlap, within a worker or across workers.
OffsetPlan plan_offsets(const WorkloadSpec& spec, unsigned k, std::uint64_t r,
                        unsigned repetition);

// Disjointness / alignment / accounting check used as the run_trial guard.
// Throws std::invalid_argument with the violation.
void validate_plan(const WorkloadSpec& spec, unsigned k, std::uint64_t r,
                   const OffsetPlan& plan);

class IoBackend {
 public:
  virtual ~IoBackend() = default;
  // Executes the k workers of one trial and returns elapsed microseconds
  // (barrier release to last worker completion).
  virtual double execute_trial(const WorkloadSpec& spec, OpKind op, unsigned k,
                               std::uint64_t r, unsigned repetition,
                               const OffsetPlan& plan) = 0;
  virtual bool direct_io_active() const { return false; }
  virtual std::uint64_t unit_transfer_bytes() const { return 0; }
  virtual std::string label() const = 0;
};

// Real file I/O: one shared descriptor, per-worker aligned buffers,
// synchronous pread/pwrite per unit transfer. O_DIRECT is attempted when
// spec.direct_io is set; if the filesystem refuses it the backend falls back
// to buffered I/O with a per-worker fdatasync inside the timed region and
// reports direct_io_active() == false.
class FileBackend : public IoBackend {
 public:
  struct Options {
    std::uint64_t unit_transfer_bytes = 1ull << 20;
  };

  FileBackend(const std::filesystem::path& path, std::uint64_t file_size_bytes,
              bool want_direct_io, Options options = {});
  ~FileBackend() override;

  FileBackend(const FileBackend&) = delete;
  FileBackend& operator=(const FileBackend&) = delete;

  double execute_trial(const WorkloadSpec& spec, OpKind op, unsigned k,
                       std::uint64_t r, unsigned repetition,
                       const OffsetPlan& plan) override;
  bool direct_io_active() const override { return direct_io_; }
  std::uint64_t unit_transfer_bytes() const override {
    return options_.unit_transfer_bytes;
  }
  std::string label() const override { return "file"; }

 private:
  int fd_ = -1;
  bool direct_io_ = false;
  Options options_;
};

struct PreconditionRecord {
  std::string id;  // "skipped" when no bytes were requested
  std::uint64_t bytes_written = 0;
  double elapsed_us = 0.0;
  double passes = 0.0;  // bytes_written / file_size
  bool skipped = true;
};

// Writes bytes_to_write sequentially in per_worker_bytes-sized chunks,
// wrapping around the file, so garbage collection is active before write
// measurements. bytes_to_write = 0 records an explicit skip.
PreconditionRecord precondition(const std::filesystem::path& path,
                                std::uint64_t bytes_to_write,
                                const WorkloadSpec& spec);

struct RunProvenance {
  std::string backend;
  std::uint64_t unit_transfer_bytes = 0;
  bool direct_io = false;
  std::string precondition_id;
  std::uint64_t min_region_bytes = 0;  // region size at the largest k
};

struct GridResult {
  std::vector<TrialRecord> records;
  RunProvenance provenance;
  std::size_t failures = 0;
};

// Runs one trial: plans offsets, validates the plan, delegates the I/O to
// the backend. Backend failures produce a status="failed" record instead of
// propagating.
TrialRecord run_trial(const WorkloadSpec& spec, IoBackend& backend, OpKind op,
                      unsigned k, std::uint64_t r, unsigned repetition);

// run_trial with a caller-supplied plan; refuses plans that violate the
// disjointness/alignment/accounting preconditions.
TrialRecord run_trial(const WorkloadSpec& spec, IoBackend& backend, OpKind op,
                      unsigned k, std::uint64_t r, unsigned repetition,
                      const OffsetPlan& plan);

// Full grid in deterministic order (op, then k ascending, then r ascending,
// then repetition), one trial at a time to avoid cross-trial interference.
// Rows stream to csv_out (header included) as they complete so partial runs
// are usable. More than 10% failed trials aborts with IoError.
GridResult run_grid(const WorkloadSpec& spec, IoBackend& backend,
                    std::ostream* csv_out = nullptr,
                    const PreconditionRecord* precondition_record = nullptr);

}  // namespace mqssd
