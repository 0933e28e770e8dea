#include "mqssd/lsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "mqssd/linreg.hpp"
#include "mqssd/rng.hpp"

namespace mqssd {

LsmLayout::LsmLayout(double fanout, std::uint64_t file_size,
                     std::uint64_t l0_files, std::uint64_t block_size,
                     std::uint64_t working_set, std::uint64_t entry_size)
    : fanout_(fanout),
      file_size_(file_size),
      l0_files_(l0_files),
      block_size_(block_size),
      working_set_(working_set),
      entry_size_(entry_size) {
  if (block_size_ == 0 || file_size_ == 0 || working_set_ == 0 ||
      entry_size_ == 0) {
    throw std::invalid_argument("LsmLayout sizes must be positive");
  }
  if (file_size_ % block_size_ != 0) {
    throw std::invalid_argument(
        "SST file size must be a multiple of the block size");
  }
  if (std::isinf(fanout_)) {
    if (l0_files_ != 0) {
      throw std::invalid_argument(
          "single-level layout requires an empty L0 (C = 0)");
    }
  } else {
    if (!(fanout_ > 1.0)) {
      throw std::invalid_argument("fanout must be > 1");
    }
    if (l0_files_ == 0) {
      throw std::invalid_argument(
          "leveled layout requires C >= 1 (C = 0 is the single-level "
          "marker)");
    }
    if (working_set_ < l0_files_ * file_size_) {
      throw std::invalid_argument("working set must be >= C * T");
    }
  }
}

LsmLayout LsmLayout::leveled(double fanout, std::uint64_t file_size_bytes,
                             std::uint64_t l0_file_count,
                             std::uint64_t block_size_bytes,
                             std::uint64_t working_set_bytes,
                             std::uint64_t entry_size_bytes) {
  return LsmLayout(fanout, file_size_bytes, l0_file_count, block_size_bytes,
                   working_set_bytes, entry_size_bytes);
}

LsmLayout LsmLayout::single_level(std::uint64_t file_size_bytes,
                                  std::uint64_t block_size_bytes,
                                  std::uint64_t working_set_bytes,
                                  std::uint64_t entry_size_bytes) {
  return LsmLayout(std::numeric_limits<double>::infinity(), file_size_bytes,
                   0, block_size_bytes, working_set_bytes, entry_size_bytes);
}

unsigned level_count(const LsmLayout& layout) {
  if (layout.is_single_level()) {
    throw std::domain_error(
        "level_count is undefined for the single-level marker (1 by "
        "definition)");
  }
  const double ratio =
      static_cast<double>(layout.working_set_bytes()) /
      (static_cast<double>(layout.l0_file_count()) *
       static_cast<double>(layout.file_size_bytes()));
  const double levels = std::ceil(std::log(ratio) / std::log(layout.fanout()));
  return static_cast<unsigned>(std::max(1.0, levels));
}

unsigned sorted_run_count(const LsmLayout& layout) {
  if (layout.is_single_level()) return 1;
  return static_cast<unsigned>(layout.l0_file_count()) + level_count(layout);
}

namespace {

void check_block_page_ratio(const LsmLayout& layout,
                            const MqssdProfile& profile) {
  const std::uint64_t page = profile.geometry().page_size_bytes();
  const std::uint64_t block = layout.block_size_bytes();
  if (block % page != 0 && page % block != 0) {
    throw std::invalid_argument(
        "DB block size and device page size must divide one another (B'=" +
        std::to_string(block) + ", B=" + std::to_string(page) + ")");
  }
}

// t(k) + s(k) + T * (alpha(k) + beta(k)) / B: one random read, one random
// write and a full sequential read+rewrite of the file body.
double per_file_rw_cost(const LsmLayout& layout, const MqssdProfile& profile,
                        unsigned k) {
  const double kd = static_cast<double>(k);
  const double pages_per_file =
      static_cast<double>(layout.file_size_bytes()) /
      static_cast<double>(profile.geometry().page_size_bytes());
  return profile.read_setup().eval(kd) + profile.write_setup().eval(kd) +
         pages_per_file * (profile.read_transfer().eval(kd) +
                           profile.write_transfer().eval(kd));
}

}  // namespace

double file_rw_cost(std::uint64_t files, const LsmLayout& layout,
                    const MqssdProfile& profile, unsigned k) {
  if (files < 1) throw std::invalid_argument("file count must be >= 1");
  check_block_page_ratio(layout, profile);
  return static_cast<double>(files) * per_file_rw_cost(layout, profile, k);
}

double insert_cost_per_byte(const LsmLayout& layout,
                            const MqssdProfile& profile, unsigned k) {
  if (layout.is_single_level()) {
    throw std::domain_error(
        "insert_cost_per_byte is for leveled layouts; use sl_insert_cost");
  }
  check_block_page_ratio(layout, profile);
  const double files_touched_per_batch =
      static_cast<double>(layout.l0_file_count()) +
      layout.fanout() * static_cast<double>(level_count(layout));
  return files_touched_per_batch /
         static_cast<double>(layout.file_size_bytes()) *
         per_file_rw_cost(layout, profile, k);
}

double insert_cost_per_entry(const LsmLayout& layout,
                             const MqssdProfile& profile, unsigned k) {
  return static_cast<double>(layout.entry_size_bytes()) *
         insert_cost_per_byte(layout, profile, k);
}

double query_cost(const LsmLayout& layout, const MqssdProfile& profile,
                  unsigned k) {
  if (layout.is_single_level()) return sl_query_cost(layout, profile, k);
  check_block_page_ratio(layout, profile);
  const double kd = static_cast<double>(k);
  const double block_pages =
      static_cast<double>(layout.block_size_bytes()) /
      static_cast<double>(profile.geometry().page_size_bytes());
  const double per_run = profile.read_setup().eval(kd) +
                         block_pages * profile.read_transfer().eval(kd);
  return static_cast<double>(sorted_run_count(layout)) * per_run;
}

double scan_cost(const LsmLayout& layout, const MqssdProfile& profile,
                 unsigned k, std::uint64_t scan_bytes) {
  check_block_page_ratio(layout, profile);
  const double kd = static_cast<double>(k);
  const double stream =
      static_cast<double>(scan_bytes) *
      (profile.read_setup().eval(kd) /
           static_cast<double>(layout.file_size_bytes()) +
       profile.read_transfer().eval(kd) /
           static_cast<double>(profile.geometry().page_size_bytes()));
  return query_cost(layout, profile, k) + stream;
}

double sl_insert_cost(const LsmLayout& layout, const MqssdProfile& profile,
                      unsigned k) {
  if (!layout.is_single_level()) {
    throw std::domain_error(
        "sl_insert_cost is for the single-level layout; use "
        "insert_cost_per_byte");
  }
  check_block_page_ratio(layout, profile);
  return per_file_rw_cost(layout, profile, k);
}

double sl_query_cost(const LsmLayout& layout, const MqssdProfile& profile,
                     unsigned k) {
  check_block_page_ratio(layout, profile);
  const double kd = static_cast<double>(k);
  const double block_pages =
      static_cast<double>(layout.block_size_bytes()) /
      static_cast<double>(profile.geometry().page_size_bytes());
  return profile.read_setup().eval(kd) +
         block_pages * profile.read_transfer().eval(kd);
}

// ---- Data movement simulation ------------------------------------------

namespace {

struct SstFile {
  std::vector<std::uint64_t> keys;  // sorted, unique
  std::uint64_t min_key() const { return keys.front(); }
  std::uint64_t max_key() const { return keys.back(); }
  bool overlaps(std::uint64_t lo, std::uint64_t hi) const {
    return min_key() <= hi && lo <= max_key();
  }
};

struct TransitionAccum {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t min_value = 0;
  std::uint64_t max_value = 0;
  void add(double value) {
    const auto v = static_cast<std::uint64_t>(value);
    min_value = count == 0 ? v : std::min(min_value, v);
    max_value = std::max(max_value, v);
    ++count;
    sum += value;
    sum_sq += value * value;
  }
  double mean() const {
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
  }
  double variance() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return (sum_sq - static_cast<double>(count) * m * m) /
           static_cast<double>(count - 1);
  }
};

class MovementSim {
 public:
  MovementSim(const DataMovementConfig& config, double fanout)
      : config_(config), fanout_(fanout) {
    levels_.emplace_back();  // L0
  }

  void run() {
    // Uniformly random insertion order via Fisher-Yates on 0..N-1.
    std::vector<std::uint64_t> order(config_.n_keys);
    for (std::uint64_t i = 0; i < config_.n_keys; ++i) order[i] = i;
    KeyedRng rng{config_.seed, 0x6c736d6b657973ull,
                 static_cast<std::uint64_t>(fanout_ * 1024.0)};
    for (std::uint64_t i = config_.n_keys; i > 1; --i) {
      std::swap(order[i - 1], order[rng.next_below(i)]);
    }

    std::vector<std::uint64_t> batch;
    batch.reserve(config_.keys_per_file);
    for (std::uint64_t key : order) {
      batch.push_back(key);
      if (batch.size() == config_.keys_per_file) {
        flush(std::move(batch));
        batch = {};
        batch.reserve(config_.keys_per_file);
      }
    }
    if (!batch.empty()) flush(std::move(batch));
  }

  CompactionStats stats() const {
    CompactionStats out;
    out.fanout = fanout_;
    out.mean_files_touched = pooled_.mean();
    out.variance = pooled_.variance();
    out.compaction_count = pooled_.count;
    out.min_files_touched = pooled_.min_value;
    out.max_files_touched = pooled_.max_value;
    out.l0_mean_files_touched = l0_.mean();
    out.l0_compaction_count = l0_.count;
    for (std::size_t i = 0; i < per_level_.size(); ++i) {
      if (per_level_[i].count == 0) continue;
      out.per_transition.push_back(LevelTransitionStats{
          static_cast<unsigned>(i), per_level_[i].mean(),
          per_level_[i].variance(), per_level_[i].count,
          per_level_[i].min_value, per_level_[i].max_value});
    }
    return out;
  }

 private:
  std::uint64_t capacity_files(std::size_t level) const {
    if (level == 0) return config_.l0_file_count;
    const double cap = static_cast<double>(config_.l0_file_count) *
                       std::pow(fanout_, static_cast<double>(level - 1));
    return static_cast<std::uint64_t>(std::llround(std::max(1.0, cap)));
  }

  void flush(std::vector<std::uint64_t> batch) {
    std::sort(batch.begin(), batch.end());
    inserted_ += batch.size();
    levels_[0].push_back(SstFile{std::move(batch)});
    settle();
  }

  void settle() {
    for (;;) {
      bool compacted = false;
      for (std::size_t level = 0; level < levels_.size(); ++level) {
        if (levels_[level].size() > capacity_files(level)) {
          if (level == 0) {
            compact_l0();
          } else {
            compact_level(level);
          }
          compacted = true;
          break;
        }
      }
      if (!compacted) break;
    }
  }

  void ensure_level(std::size_t level) {
    while (levels_.size() <= level) levels_.emplace_back();
  }

  // Position of the first file in the sorted level that could overlap
  // [lo, hi], and one past the last.
  std::pair<std::size_t, std::size_t> overlap_range(
      const std::vector<SstFile>& level, std::uint64_t lo,
      std::uint64_t hi) const {
    auto first = std::partition_point(
        level.begin(), level.end(),
        [&](const SstFile& f) { return f.max_key() < lo; });
    auto last = std::partition_point(
        first, level.end(), [&](const SstFile& f) { return f.min_key() <= hi; });
    return {static_cast<std::size_t>(first - level.begin()),
            static_cast<std::size_t>(last - level.begin())};
  }

  void compact_l0() {
    ensure_level(1);
    auto& l0 = levels_[0];
    // Transitive overlap closure seeded by the oldest flushed file; with
    // uniformly random keys this is nearly always every L0 file.
    std::vector<bool> selected(l0.size(), false);
    selected[0] = true;
    std::uint64_t lo = l0[0].min_key();
    std::uint64_t hi = l0[0].max_key();
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < l0.size(); ++i) {
        if (!selected[i] && l0[i].overlaps(lo, hi)) {
          selected[i] = true;
          lo = std::min(lo, l0[i].min_key());
          hi = std::max(hi, l0[i].max_key());
          grew = true;
        }
      }
    }

    auto [first, last] = overlap_range(levels_[1], lo, hi);
    std::vector<std::uint64_t> merged;
    std::size_t selected_count = 0;
    for (std::size_t i = 0; i < l0.size(); ++i) {
      if (!selected[i]) continue;
      ++selected_count;
      merged.insert(merged.end(), l0[i].keys.begin(), l0[i].keys.end());
    }
    for (std::size_t i = first; i < last; ++i) {
      merged.insert(merged.end(), levels_[1][i].keys.begin(),
                    levels_[1][i].keys.end());
    }
    const double touched =
        static_cast<double>(selected_count + (last - first));
    l0_.add(touched);

    replace_run(1, first, last, std::move(merged));
    std::vector<SstFile> remaining;
    for (std::size_t i = 0; i < l0.size(); ++i) {
      if (!selected[i]) remaining.push_back(std::move(l0[i]));
    }
    l0 = std::move(remaining);
    if (config_.validate) validate_state();
  }

  void compact_level(std::size_t level) {
    ensure_level(level + 1);
    auto& files = levels_[level];
    const auto& next = levels_[level + 1];

    // Victim: fewest overlapping next-level files; ties by smallest min key.
    // The scan is exhaustive, which doubles as the optimality check.
    std::size_t victim = 0;
    std::size_t best_overlap = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> overlaps(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
      auto [first, last] =
          overlap_range(next, files[i].min_key(), files[i].max_key());
      overlaps[i] = last - first;
      if (overlaps[i] < best_overlap ||
          (overlaps[i] == best_overlap &&
           files[i].min_key() < files[victim].min_key())) {
        best_overlap = overlaps[i];
        victim = i;
      }
    }
    if (config_.validate) {
      for (std::size_t count : overlaps) {
        if (best_overlap > count) {
          throw std::logic_error("victim is not overlap-minimal");
        }
      }
    }

    SstFile victim_file = std::move(files[victim]);
    files.erase(files.begin() + static_cast<std::ptrdiff_t>(victim));

    auto [first, last] =
        overlap_range(next, victim_file.min_key(), victim_file.max_key());
    const double touched = 1.0 + static_cast<double>(last - first);
    record_transition(level, touched);

    if (last == first) {
      // Trivial move: no next-level file overlaps.
      insert_sorted(level + 1, std::move(victim_file));
    } else {
      std::vector<std::uint64_t> merged = std::move(victim_file.keys);
      for (std::size_t i = first; i < last; ++i) {
        merged.insert(merged.end(), levels_[level + 1][i].keys.begin(),
                      levels_[level + 1][i].keys.end());
      }
      replace_run(level + 1, first, last, std::move(merged));
    }
    if (config_.validate) validate_state();
  }

  void record_transition(std::size_t level, double touched) {
    pooled_.add(touched);
    if (per_level_.size() <= level) per_level_.resize(level + 1);
    per_level_[level].add(touched);
  }

  // Replaces files [first, last) of the level with the merged key set,
  // re-partitioned into keys_per_file-sized files (last one smaller).
  void replace_run(std::size_t level, std::size_t first, std::size_t last,
                   std::vector<std::uint64_t> merged) {
    std::sort(merged.begin(), merged.end());
    if (config_.validate) {
      if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) {
        throw std::logic_error("duplicate key during merge");
      }
    }
    std::vector<SstFile> outputs;
    for (std::size_t pos = 0; pos < merged.size();
         pos += config_.keys_per_file) {
      const std::size_t end =
          std::min(pos + config_.keys_per_file, merged.size());
      outputs.push_back(SstFile{std::vector<std::uint64_t>(
          merged.begin() + static_cast<std::ptrdiff_t>(pos),
          merged.begin() + static_cast<std::ptrdiff_t>(end))});
    }
    auto& files = levels_[level];
    files.erase(files.begin() + static_cast<std::ptrdiff_t>(first),
                files.begin() + static_cast<std::ptrdiff_t>(last));
    files.insert(files.begin() + static_cast<std::ptrdiff_t>(first),
                 std::make_move_iterator(outputs.begin()),
                 std::make_move_iterator(outputs.end()));
  }

  void insert_sorted(std::size_t level, SstFile file) {
    auto& files = levels_[level];
    auto it = std::partition_point(
        files.begin(), files.end(),
        [&](const SstFile& f) { return f.min_key() < file.min_key(); });
    files.insert(it, std::move(file));
  }

  // Conservation and ordering: every inserted key lives in exactly one file
  // (counts add up and merges reject duplicates), levels >= 1 stay sorted
  // and disjoint.
  void validate_state() const {
    std::uint64_t total = 0;
    for (const auto& level : levels_) {
      for (const SstFile& file : level) total += file.keys.size();
    }
    if (total != inserted_) {
      throw std::logic_error("key conservation violated: " +
                             std::to_string(total) + " stored vs " +
                             std::to_string(inserted_) + " inserted");
    }
    for (std::size_t level = 1; level < levels_.size(); ++level) {
      const auto& files = levels_[level];
      for (std::size_t i = 1; i < files.size(); ++i) {
        if (files[i - 1].max_key() >= files[i].min_key()) {
          throw std::logic_error("level " + std::to_string(level) +
                                 " file ranges overlap");
        }
      }
    }
  }

  const DataMovementConfig& config_;
  double fanout_;
  std::vector<std::vector<SstFile>> levels_;
  std::uint64_t inserted_ = 0;
  TransitionAccum pooled_;  // transitions from levels >= 1
  TransitionAccum l0_;
  std::vector<TransitionAccum> per_level_;
};

}  // namespace

DataMovementReport simulate_data_movement(const DataMovementConfig& config) {
  if (config.keys_per_file == 0) {
    throw std::invalid_argument("keys_per_file must be >= 1");
  }
  if (config.n_keys < 100 * config.keys_per_file) {
    throw std::invalid_argument(
        "n_keys must be >= 100 * keys_per_file for meaningful statistics");
  }
  if (config.l0_file_count == 0) {
    throw std::invalid_argument(
        "C = 0 with a finite fanout is not a valid leveled configuration");
  }
  if (config.fanouts.empty()) {
    throw std::invalid_argument("fanout grid is empty");
  }
  for (double fanout : config.fanouts) {
    if (!(fanout > 1.0) || std::isinf(fanout)) {
      throw std::invalid_argument("fanouts must be finite and > 1");
    }
  }

  DataMovementReport report;
  std::vector<double> xs, ys;
  for (double fanout : config.fanouts) {
    MovementSim sim(config, fanout);
    sim.run();
    CompactionStats stats = sim.stats();
    xs.push_back(fanout);
    ys.push_back(stats.mean_files_touched);
    report.per_fanout.push_back(std::move(stats));
  }
  if (xs.size() >= 2) {
    const LineFit fit = fit_line(xs, ys);
    report.fit_slope = fit.slope;
    report.fit_intercept = fit.intercept;
    report.fit_r_squared = fit.r_squared;
  }
  return report;
}

}  // namespace mqssd
