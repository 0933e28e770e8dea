#include "mqssd/bench.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mqssd/errors.hpp"
#include "mqssd/rng.hpp"

namespace mqssd {

std::vector<double> WorkloadSpec::default_r_fraction_grid() {
  std::vector<double> grid(8);
  for (int i = 0; i < 8; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::pow(10.0, -3.0 + 3.0 * static_cast<double>(i) / 7.0);
  }
  grid.back() = 1.0;
  return grid;
}

std::uint64_t WorkloadSpec::random_accesses_for(double r_fraction) const {
  const double pages = static_cast<double>(pages_per_worker());
  const auto r = static_cast<std::uint64_t>(std::llround(r_fraction * pages));
  return std::max<std::uint64_t>(1, std::min(r, pages_per_worker()));
}

void WorkloadSpec::validate() const {
  if (page_size_bytes == 0 || (page_size_bytes & (page_size_bytes - 1)) != 0) {
    throw std::invalid_argument("page size must be a power of two");
  }
  if (per_worker_bytes == 0 || per_worker_bytes % page_size_bytes != 0) {
    throw std::invalid_argument(
        "per_worker_bytes must be a positive page multiple");
  }
  if (file_size_bytes % page_size_bytes != 0) {
    throw std::invalid_argument("file size must be a page multiple");
  }
  if (ops.empty() || k_grid.empty() || r_fraction_grid.empty() ||
      repetitions == 0) {
    throw std::invalid_argument("workload grid is empty");
  }
  for (unsigned k : k_grid) {
    if (k < 1) throw std::invalid_argument("k grid values must be >= 1");
    if (static_cast<std::uint64_t>(k) * per_worker_bytes > file_size_bytes) {
      throw std::invalid_argument(
          "k * per_worker_bytes exceeds the file size at k=" +
          std::to_string(k));
    }
  }
  for (double fraction : r_fraction_grid) {
    if (!(fraction > 0.0) || fraction > 1.0) {
      throw std::invalid_argument("r fractions must be in (0, 1]");
    }
  }
  if (device_label.find(',') != std::string::npos) {
    throw std::invalid_argument("device label must not contain commas");
  }
}

namespace {

// Chunk lengths: floor(N_w/r) rounded down to a page, final chunk absorbs
// the remainder ("equally sized" cannot hold exactly when r does not divide
// the page count).
std::vector<std::uint64_t> chunk_lengths(std::uint64_t per_worker_bytes,
                                         std::uint64_t r,
                                         std::uint64_t page_size) {
  const std::uint64_t base = per_worker_bytes / r / page_size * page_size;
  if (base == 0) {
    throw std::invalid_argument(
        "r exceeds pages per worker; chunks need at least one page");
  }
  std::vector<std::uint64_t> lengths(r, base);
  lengths.back() = per_worker_bytes - base * (r - 1);
  return lengths;
}

struct Interval {
  std::uint64_t begin;
  std::uint64_t end;
};

// Sorted non-overlapping interval set over page indices.
class IntervalSet {
 public:
  bool try_insert(std::uint64_t begin, std::uint64_t end) {
    auto it = std::lower_bound(
        intervals_.begin(), intervals_.end(), begin,
        [](const Interval& iv, std::uint64_t value) { return iv.end <= value; });
    if (it != intervals_.end() && it->begin < end) return false;
    intervals_.insert(it, Interval{begin, end});
    return true;
  }
  void clear() { intervals_.clear(); }

 private:
  std::vector<Interval> intervals_;
};

std::vector<Chunk> place_worker_chunks(
    const std::vector<std::uint64_t>& lengths, std::uint64_t region_start,
    std::uint64_t region_bytes, std::uint64_t page_size, KeyedRng& rng) {
  const std::uint64_t r = lengths.size();
  std::vector<Chunk> chunks;
  IntervalSet used;

  // Uniform aligned starts, rejecting overlaps within the worker. The draw
  // budget covers the fully-random limit (r == pages needs ~r*H_r draws);
  // geometries too tight for rejection (no slack pages) fall through to the
  // shuffled-tiling path below.
  const std::uint64_t budget = 32 * r + 1024;
  for (int restart = 0; restart < 4; ++restart) {
    chunks.clear();
    used.clear();
    std::uint64_t draws = 0;
    bool stuck = false;
    for (std::uint64_t i = 0; i < r; ++i) {
      const std::uint64_t len = lengths[i];
      const std::uint64_t slots = (region_bytes - len) / page_size + 1;
      bool placed = false;
      while (draws < budget) {
        ++draws;
        const std::uint64_t page = rng.next_below(slots);
        if (used.try_insert(page, page + len / page_size)) {
          chunks.push_back(Chunk{region_start + page * page_size, len});
          placed = true;
          break;
        }
      }
      if (!placed) {
        stuck = true;
        break;
      }
    }
    if (!stuck) return chunks;
  }

  // Fallback: random chunk order with randomly distributed page gaps.
  std::uint64_t total = 0;
  for (std::uint64_t len : lengths) total += len;
  std::uint64_t free_pages = (region_bytes - total) / page_size;
  std::vector<std::uint64_t> order(r);
  for (std::uint64_t i = 0; i < r; ++i) order[i] = i;
  for (std::uint64_t i = r; i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_below(i)]);
  }
  std::vector<Chunk> by_position;
  std::uint64_t cursor = region_start;
  for (std::uint64_t i = 0; i < r; ++i) {
    const std::uint64_t gap = rng.next_below(free_pages + 1);
    free_pages -= gap;
    cursor += gap * page_size;
    by_position.push_back(Chunk{cursor, lengths[order[i]]});
    cursor += lengths[order[i]];
  }
  // Report chunks in issue order matching the shuffled identity, so the
  // access sequence is random, not sweeping.
  std::vector<Chunk> result(r);
  for (std::uint64_t i = 0; i < r; ++i) {
    result[order[i]] = by_position[i];
  }
  return result;
}

}  // namespace

OffsetPlan plan_offsets(const WorkloadSpec& spec, unsigned k, std::uint64_t r,
                        unsigned repetition) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  const std::uint64_t page = spec.page_size_bytes;
  const std::uint64_t region =
      spec.file_size_bytes / k / page * page;
  if (region < spec.per_worker_bytes) {
    throw std::invalid_argument(
        "infeasible plan: per-worker region (" + std::to_string(region) +
        " bytes) is smaller than per_worker_bytes");
  }
  const std::vector<std::uint64_t> lengths =
      chunk_lengths(spec.per_worker_bytes, r, page);

  OffsetPlan plan;
  plan.region_bytes = region;
  plan.workers.reserve(k);
  for (unsigned worker = 0; worker < k; ++worker) {
    KeyedRng rng{spec.seed, 0x6f66667365743031ull, k, r, repetition, worker};
    plan.workers.push_back(place_worker_chunks(
        lengths, static_cast<std::uint64_t>(worker) * region, region, page,
        rng));
  }
  return plan;
}

void validate_plan(const WorkloadSpec& spec, unsigned k, std::uint64_t r,
                   const OffsetPlan& plan) {
  if (plan.workers.size() != k) {
    throw std::invalid_argument("plan has " +
                                std::to_string(plan.workers.size()) +
                                " workers, expected " + std::to_string(k));
  }
  const std::uint64_t page = spec.page_size_bytes;
  std::vector<Interval> all;
  for (const auto& worker : plan.workers) {
    if (worker.size() != r) {
      throw std::invalid_argument("worker has " +
                                  std::to_string(worker.size()) +
                                  " chunks, expected " + std::to_string(r));
    }
    std::uint64_t total = 0;
    for (const Chunk& chunk : worker) {
      if (chunk.offset_bytes % page != 0) {
        throw std::invalid_argument("chunk offset not page-aligned");
      }
      if (chunk.length_bytes == 0 || chunk.length_bytes % page != 0) {
        throw std::invalid_argument(
            "chunk length not a positive page multiple");
      }
      if (chunk.offset_bytes + chunk.length_bytes > spec.file_size_bytes) {
        throw std::invalid_argument("chunk extends past the file end");
      }
      total += chunk.length_bytes;
      all.push_back(
          Interval{chunk.offset_bytes, chunk.offset_bytes + chunk.length_bytes});
    }
    if (total != spec.per_worker_bytes) {
      throw std::invalid_argument(
          "worker chunk lengths sum to " + std::to_string(total) +
          ", expected " + std::to_string(spec.per_worker_bytes));
    }
  }
  std::sort(all.begin(), all.end(),
            [](const Interval& a, const Interval& b) {
              return a.begin < b.begin;
            });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].begin < all[i - 1].end) {
      throw std::invalid_argument("plan chunks overlap");
    }
  }
}

// ---- FileBackend -------------------------------------------------------

FileBackend::FileBackend(const std::filesystem::path& path,
                         std::uint64_t file_size_bytes, bool want_direct_io,
                         Options options)
    : options_(options) {
  int flags = O_RDWR | O_CREAT;
#ifdef O_DIRECT
  if (want_direct_io) {
    fd_ = ::open(path.c_str(), flags | O_DIRECT, 0644);
    if (fd_ >= 0) direct_io_ = true;
  }
#endif
  if (fd_ < 0) {
    fd_ = ::open(path.c_str(), flags, 0644);
  }
  if (fd_ < 0) {
    throw IoError("cannot open " + path.string() + ": " +
                  std::strerror(errno));
  }
  if (::ftruncate(fd_, static_cast<off_t>(file_size_bytes)) != 0) {
    const std::string message = std::strerror(errno);
    ::close(fd_);
    throw IoError("cannot size " + path.string() + ": " + message);
  }
}

FileBackend::~FileBackend() {
  if (fd_ >= 0) ::close(fd_);
}

namespace {

struct AlignedBuffer {
  void* data = nullptr;
  explicit AlignedBuffer(std::size_t alignment, std::size_t size) {
    if (posix_memalign(&data, alignment, size) != 0) {
      throw std::bad_alloc();
    }
  }
  ~AlignedBuffer() { std::free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
};

void transfer_chunk(int fd, OpKind op, const Chunk& chunk, char* buffer,
                    std::uint64_t buffer_bytes) {
  std::uint64_t done = 0;
  while (done < chunk.length_bytes) {
    const std::uint64_t want =
        std::min(buffer_bytes, chunk.length_bytes - done);
    const off_t offset = static_cast<off_t>(chunk.offset_bytes + done);
    const ssize_t got =
        op == OpKind::Read
            ? ::pread(fd, buffer, want, offset)
            : ::pwrite(fd, buffer, want, offset);
    if (got < 0) {
      throw IoError(std::string(op == OpKind::Read ? "pread" : "pwrite") +
                    " failed: " + std::strerror(errno));
    }
    if (got == 0) {
      throw IoError("short transfer at offset " + std::to_string(offset));
    }
    done += static_cast<std::uint64_t>(got);
  }
}

}  // namespace

double FileBackend::execute_trial(const WorkloadSpec& spec, OpKind op,
                                  unsigned k, std::uint64_t /*r*/,
                                  unsigned /*repetition*/,
                                  const OffsetPlan& plan) {
  const std::uint64_t unit = std::max(
      spec.page_size_bytes,
      options_.unit_transfer_bytes / spec.page_size_bytes *
          spec.page_size_bytes);
  std::vector<std::string> errors(k);
  std::barrier gate(static_cast<std::ptrdiff_t>(k) + 1);

  std::vector<std::jthread> workers;
  workers.reserve(k);
  for (unsigned w = 0; w < k; ++w) {
    workers.emplace_back([&, w] {
      bool arrived = false;
      try {
        AlignedBuffer buffer(spec.page_size_bytes, unit);
        if (op == OpKind::Write) {
          std::memset(buffer.data, 0x5a, unit);
        }
        gate.arrive_and_wait();
        arrived = true;
        for (const Chunk& chunk : plan.workers[w]) {
          transfer_chunk(fd_, op, chunk, static_cast<char*>(buffer.data),
                         unit);
        }
        if (op == OpKind::Write && !direct_io_) {
          if (::fdatasync(fd_) != 0) {
            throw IoError(std::string("fdatasync failed: ") +
                          std::strerror(errno));
          }
        }
      } catch (const std::exception& e) {
        errors[w] = e.what();
        if (!arrived) gate.arrive_and_drop();
      }
    });
  }

  gate.arrive_and_wait();
  const auto start = std::chrono::steady_clock::now();
  workers.clear();  // join
  const auto stop = std::chrono::steady_clock::now();

  for (const std::string& error : errors) {
    if (!error.empty()) {
      throw IoError("worker failed: " + error);
    }
  }
  const double elapsed_us =
      std::chrono::duration<double, std::micro>(stop - start).count();
  // Sub-microsecond trials round up so throughput stays finite.
  return std::max(elapsed_us, 1e-3);
}

PreconditionRecord precondition(const std::filesystem::path& path,
                                std::uint64_t bytes_to_write,
                                const WorkloadSpec& spec) {
  PreconditionRecord record;
  if (bytes_to_write == 0) {
    record.id = "skipped";
    record.skipped = true;
    return record;
  }
  FileBackend backend(path, spec.file_size_bytes, spec.direct_io);
  const std::uint64_t chunk_bytes =
      std::min(spec.per_worker_bytes, spec.file_size_bytes);
  AlignedBuffer buffer(spec.page_size_bytes, chunk_bytes);
  std::memset(buffer.data, 0xa5, chunk_bytes);

  int fd = ::open(path.c_str(), O_RDWR);
  if (fd < 0) {
    throw IoError("precondition: cannot reopen " + path.string());
  }
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t written = 0;
  std::uint64_t offset = 0;
  while (written < bytes_to_write) {
    const std::uint64_t want = std::min(
        chunk_bytes, std::min(bytes_to_write - written,
                              spec.file_size_bytes - offset));
    std::uint64_t done = 0;
    while (done < want) {
      const ssize_t got = ::pwrite(fd, static_cast<char*>(buffer.data) + done,
                                   want - done,
                                   static_cast<off_t>(offset + done));
      if (got <= 0) {
        ::close(fd);
        throw IoError(std::string("precondition write failed: ") +
                      std::strerror(errno));
      }
      done += static_cast<std::uint64_t>(got);
    }
    written += want;
    offset = (offset + want) % spec.file_size_bytes;
  }
  ::fdatasync(fd);
  ::close(fd);
  const auto stop = std::chrono::steady_clock::now();

  record.skipped = false;
  record.bytes_written = written;
  record.elapsed_us =
      std::chrono::duration<double, std::micro>(stop - start).count();
  record.passes = static_cast<double>(written) /
                  static_cast<double>(spec.file_size_bytes);
  record.id = "precond-" + std::to_string(written) + "-" +
              std::to_string(mix64(written ^ spec.seed));
  return record;
}

TrialRecord run_trial(const WorkloadSpec& spec, IoBackend& backend, OpKind op,
                      unsigned k, std::uint64_t r, unsigned repetition) {
  return run_trial(spec, backend, op, k, r, repetition,
                   plan_offsets(spec, k, r, repetition));
}

TrialRecord run_trial(const WorkloadSpec& spec, IoBackend& backend, OpKind op,
                      unsigned k, std::uint64_t r, unsigned repetition,
                      const OffsetPlan& plan) {
  validate_plan(spec, k, r, plan);

  TrialRecord record;
  record.device_label = spec.device_label;
  record.op = op;
  record.k = k;
  record.random_accesses = r;
  record.r_fraction = static_cast<double>(r) /
                      static_cast<double>(spec.pages_per_worker());
  record.per_worker_bytes = spec.per_worker_bytes;
  record.repetition = repetition;
  record.seed = spec.seed;
  try {
    const double elapsed =
        backend.execute_trial(spec, op, k, r, repetition, plan);
    record.elapsed_us = elapsed;
    record.throughput_bytes_per_us =
        static_cast<double>(k) * static_cast<double>(spec.per_worker_bytes) /
        elapsed;
    record.status = "ok";
  } catch (const std::exception&) {
    record.elapsed_us = 0.0;
    record.throughput_bytes_per_us = 0.0;
    record.status = "failed";
  }
  return record;
}

GridResult run_grid(const WorkloadSpec& spec, IoBackend& backend,
                    std::ostream* csv_out,
                    const PreconditionRecord* precondition_record) {
  spec.validate();
  GridResult result;
  result.provenance.backend = backend.label();
  result.provenance.unit_transfer_bytes = backend.unit_transfer_bytes();
  result.provenance.direct_io = backend.direct_io_active();
  if (precondition_record != nullptr) {
    result.provenance.precondition_id = precondition_record->id;
  }
  const unsigned max_k =
      *std::max_element(spec.k_grid.begin(), spec.k_grid.end());
  result.provenance.min_region_bytes = spec.file_size_bytes / max_k /
                                       spec.page_size_bytes *
                                       spec.page_size_bytes;

  if (csv_out != nullptr) write_trial_csv_header(*csv_out);

  std::vector<unsigned> ks = spec.k_grid;
  std::sort(ks.begin(), ks.end());
  std::vector<double> fractions = spec.r_fraction_grid;
  std::sort(fractions.begin(), fractions.end());
  std::vector<OpKind> ops = spec.ops;
  std::sort(ops.begin(), ops.end());

  const std::size_t planned = ops.size() * ks.size() * fractions.size() *
                              spec.repetitions;
  for (OpKind op : ops) {
    for (unsigned k : ks) {
      for (double fraction : fractions) {
        const std::uint64_t r = spec.random_accesses_for(fraction);
        for (unsigned rep = 0; rep < spec.repetitions; ++rep) {
          TrialRecord record = run_trial(spec, backend, op, k, r, rep);
          if (!record.ok()) ++result.failures;
          if (csv_out != nullptr) {
            write_trial_csv_row(*csv_out, record);
            csv_out->flush();
          }
          result.records.push_back(std::move(record));
          if (result.failures * 10 > planned) {
            throw IoError("aborting grid: more than 10% of trials failed (" +
                          std::to_string(result.failures) + " of " +
                          std::to_string(planned) + " planned)");
          }
        }
      }
    }
  }
  return result;
}

}  // namespace mqssd
