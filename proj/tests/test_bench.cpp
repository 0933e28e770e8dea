#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "mqssd/bench.hpp"
#include "mqssd/errors.hpp"
#include "mqssd/oracle.hpp"
#include "support.hpp"

using namespace mqssd;
using mqssd::testing::constant_profile;
using mqssd::testing::decreasing_profile;
using mqssd::testing::desk_spec;

namespace {

// Brute-force interval overlap check, independent of validate_plan.
void brute_force_check(const WorkloadSpec& spec, std::uint64_t r,
                       const OffsetPlan& plan) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;
  for (const auto& worker : plan.workers) {
    REQUIRE(worker.size() == r);
    std::uint64_t total = 0;
    for (const Chunk& chunk : worker) {
      CHECK(chunk.offset_bytes % spec.page_size_bytes == 0);
      CHECK(chunk.length_bytes % spec.page_size_bytes == 0);
      CHECK(chunk.length_bytes > 0);
      CHECK(chunk.offset_bytes + chunk.length_bytes <= spec.file_size_bytes);
      total += chunk.length_bytes;
      intervals.emplace_back(chunk.offset_bytes,
                             chunk.offset_bytes + chunk.length_bytes);
    }
    CHECK(total == spec.per_worker_bytes);
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = i + 1; j < intervals.size(); ++j) {
      const bool disjoint = intervals[i].second <= intervals[j].first ||
                            intervals[j].second <= intervals[i].first;
      CHECK(disjoint);
    }
  }
}

}  // namespace

TEST_CASE("plan_offsets single sequential run") {
  WorkloadSpec spec = desk_spec();
  const OffsetPlan plan = plan_offsets(spec, 1, 1, 0);
  REQUIRE(plan.workers.size() == 1);
  REQUIRE(plan.workers[0].size() == 1);
  const Chunk& chunk = plan.workers[0][0];
  CHECK(chunk.length_bytes == spec.per_worker_bytes);
  CHECK(chunk.offset_bytes % spec.page_size_bytes == 0);
  CHECK(chunk.offset_bytes + chunk.length_bytes <= spec.file_size_bytes);
}

TEST_CASE("plan_offsets fully random limit: every chunk is one page") {
  WorkloadSpec spec = desk_spec();
  spec.per_worker_bytes = 1ull << 20;  // 256 pages
  spec.file_size_bytes = 8ull << 20;
  const std::uint64_t r = spec.pages_per_worker();
  const OffsetPlan plan = plan_offsets(spec, 2, r, 0);
  std::set<std::uint64_t> pages;
  for (const auto& worker : plan.workers) {
    for (const Chunk& chunk : worker) {
      CHECK(chunk.length_bytes == spec.page_size_bytes);
      CHECK(pages.insert(chunk.offset_bytes / spec.page_size_bytes).second);
    }
  }
  brute_force_check(spec, r, plan);
}

TEST_CASE("plan_offsets tight region still tiles correctly") {
  WorkloadSpec spec = desk_spec();
  spec.per_worker_bytes = 1ull << 20;
  spec.file_size_bytes = 2ull << 20;  // region == per-worker bytes at k=2
  for (std::uint64_t r : {1ull, 2ull, 7ull, 256ull}) {
    const OffsetPlan plan = plan_offsets(spec, 2, r, 0);
    brute_force_check(spec, r, plan);
  }
}

TEST_CASE("plan_offsets determinism and repetition variation") {
  WorkloadSpec spec = desk_spec();
  const OffsetPlan a = plan_offsets(spec, 4, 13, 2);
  const OffsetPlan b = plan_offsets(spec, 4, 13, 2);
  REQUIRE(a.workers.size() == b.workers.size());
  for (std::size_t w = 0; w < a.workers.size(); ++w) {
    REQUIRE(a.workers[w].size() == b.workers[w].size());
    for (std::size_t c = 0; c < a.workers[w].size(); ++c) {
      CHECK(a.workers[w][c].offset_bytes == b.workers[w][c].offset_bytes);
      CHECK(a.workers[w][c].length_bytes == b.workers[w][c].length_bytes);
    }
  }
  const OffsetPlan c = plan_offsets(spec, 4, 13, 3);
  bool any_different = false;
  for (std::size_t w = 0; w < a.workers.size(); ++w) {
    for (std::size_t i = 0; i < a.workers[w].size(); ++i) {
      if (a.workers[w][i].offset_bytes != c.workers[w][i].offset_bytes) {
        any_different = true;
      }
    }
  }
  CHECK(any_different);
}

TEST_CASE("plan_offsets rejects infeasible region") {
  WorkloadSpec spec = desk_spec();
  spec.file_size_bytes = 32ull << 20;
  spec.per_worker_bytes = 16ull << 20;
  CHECK_THROWS_AS(plan_offsets(spec, 4, 1, 0), std::invalid_argument);
}

TEST_CASE("run_trial refuses overlapping injected plans") {
  WorkloadSpec spec = desk_spec();
  spec.ops = {OpKind::Read};
  OracleBackend backend{OracleConfig(decreasing_profile())};
  OffsetPlan plan = plan_offsets(spec, 2, 4, 0);
  // Duplicate worker 0's chunks into worker 1: cross-worker overlap.
  plan.workers[1] = plan.workers[0];
  CHECK_THROWS_AS(run_trial(spec, backend, OpKind::Read, 2, 4, 0, plan),
                  std::invalid_argument);
}

TEST_CASE("run_trial on the oracle backend matches the cost model") {
  WorkloadSpec spec = desk_spec();
  OracleBackend backend{OracleConfig(constant_profile(2.0))};
  const TrialRecord record = run_trial(spec, backend, OpKind::Read, 4, 16, 0);
  CHECK(record.ok());
  // Constant transfer=2: per-worker elapsed = pages * 2; aggregate
  // throughput = k * B / 2.
  const double expected = 4 * 4096.0 / 2.0;
  CHECK(record.throughput_bytes_per_us ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(record.throughput_bytes_per_us * record.elapsed_us ==
        doctest::Approx(4.0 * spec.per_worker_bytes).epsilon(1e-12));
}

TEST_CASE("run_grid on the oracle emits a deterministic, ordered CSV") {
  WorkloadSpec spec = desk_spec();
  spec.k_grid = {1, 2};
  spec.r_fraction_grid = {0.01, 0.1, 1.0};
  spec.repetitions = 2;
  OracleBackend backend{OracleConfig(decreasing_profile())};

  std::ostringstream csv_a, csv_b;
  const GridResult result = run_grid(spec, backend, &csv_a);
  run_grid(spec, backend, &csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(result.failures == 0);
  CHECK(result.records.size() == 2 * 2 * 3 * 2);

  // Deterministic order: op, then k, then r, then repetition.
  std::size_t index = 0;
  for (OpKind op : {OpKind::Read, OpKind::Write}) {
    for (unsigned k : {1u, 2u}) {
      for (double fraction : spec.r_fraction_grid) {
        const std::uint64_t r = spec.random_accesses_for(fraction);
        for (unsigned rep = 0; rep < 2; ++rep) {
          const TrialRecord& record = result.records[index++];
          CHECK(record.op == op);
          CHECK(record.k == k);
          CHECK(record.random_accesses == r);
          CHECK(record.repetition == rep);
        }
      }
    }
  }

  // Round trip through the CSV reader.
  std::istringstream in(csv_a.str());
  const std::vector<TrialRecord> parsed = read_trial_csv(in);
  REQUIRE(parsed.size() == result.records.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].elapsed_us == result.records[i].elapsed_us);
    CHECK(parsed[i].throughput_bytes_per_us ==
          result.records[i].throughput_bytes_per_us);
    CHECK(parsed[i].r_fraction == result.records[i].r_fraction);
  }
}

TEST_CASE("trial CSV schema errors carry line numbers") {
  std::istringstream missing_header("not,a,header\n");
  CHECK_THROWS_WITH_AS(read_trial_csv(missing_header),
                       doctest::Contains("line 1"), SchemaError);

  std::istringstream bad_row(std::string(kTrialCsvHeader) +
                             "\ndev,read,1,0,0.1,4096,abc,1,0,0,ok\n");
  CHECK_THROWS_WITH_AS(read_trial_csv(bad_row), doctest::Contains("line 2"),
                       SchemaError);
}

TEST_CASE("real file backend runs a small grid with consistent accounting") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "mqssd_bench_test.dat";
  WorkloadSpec spec = desk_spec();
  spec.file_path = path;
  spec.file_size_bytes = 16ull << 20;
  spec.per_worker_bytes = 2ull << 20;
  spec.k_grid = {1, 2};
  spec.r_fraction_grid = {0.01, 1.0};
  spec.repetitions = 1;

  FileBackend backend(path, spec.file_size_bytes, spec.direct_io,
                      FileBackend::Options{1ull << 18});
  const GridResult result = run_grid(spec, backend);
  CHECK(result.failures == 0);
  for (const TrialRecord& record : result.records) {
    CHECK(record.ok());
    CHECK(record.elapsed_us > 0.0);
    CHECK(record.throughput_bytes_per_us ==
          static_cast<double>(record.k) *
              static_cast<double>(record.per_worker_bytes) /
              record.elapsed_us);
  }
  std::filesystem::remove(path);
}

TEST_CASE("precondition writes the requested volume in passes") {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "mqssd_precond_test.dat";
  WorkloadSpec spec = desk_spec();
  spec.file_path = path;
  spec.file_size_bytes = 4ull << 20;
  spec.per_worker_bytes = 1ull << 20;

  const PreconditionRecord skipped = precondition(path, 0, spec);
  CHECK(skipped.skipped);
  CHECK(skipped.id == "skipped");

  const PreconditionRecord two_passes =
      precondition(path, 2 * spec.file_size_bytes, spec);
  CHECK_FALSE(two_passes.skipped);
  CHECK(two_passes.bytes_written == 2 * spec.file_size_bytes);
  CHECK(two_passes.passes == doctest::Approx(2.0));
  CHECK(two_passes.elapsed_us > 0.0);

  // Provenance linkage: the grid run records the precondition id.
  OracleBackend backend{OracleConfig(decreasing_profile())};
  WorkloadSpec grid_spec = desk_spec();
  grid_spec.k_grid = {1};
  grid_spec.r_fraction_grid = {1.0};
  const GridResult result =
      run_grid(grid_spec, backend, nullptr, &two_passes);
  CHECK(result.provenance.precondition_id == two_passes.id);
  std::filesystem::remove(path);
}

TEST_CASE("workload spec invariants") {
  WorkloadSpec spec = desk_spec();
  CHECK_NOTHROW(spec.validate());

  WorkloadSpec bad_k = spec;
  bad_k.k_grid = {1, 512};  // 512 * 16 MiB > 4 GiB
  CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);

  WorkloadSpec bad_fraction = spec;
  bad_fraction.r_fraction_grid = {0.0, 0.5};
  CHECK_THROWS_AS(bad_fraction.validate(), std::invalid_argument);

  WorkloadSpec bad_worker_bytes = spec;
  bad_worker_bytes.per_worker_bytes = 4097;
  CHECK_THROWS_AS(bad_worker_bytes.validate(), std::invalid_argument);
}
