#include "mqssd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mqssd/calibration.hpp"
#include "mqssd/errors.hpp"
#include "mqssd/lsm.hpp"
#include "mqssd/oracle.hpp"
#include "mqssd/profile_json.hpp"

namespace mqssd::cli {

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const SchemaError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

// Output stream selector: file when a path is set, otherwise the fallback.
class OutTarget {
 public:
  OutTarget(const std::filesystem::path& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(open_out(path));
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

}  // namespace

std::vector<double> parse_double_grid(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const std::size_t c1 = token.find(':');
    if (c1 == std::string::npos) {
      values.push_back(parse_double(token));
      continue;
    }
    const std::size_t c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw SchemaError("grid range needs start:stop:factor, got '" + token +
                        "'");
    }
    const double start = parse_double(token.substr(0, c1));
    const double stop = parse_double(token.substr(c1 + 1, c2 - c1 - 1));
    const double factor = parse_double(token.substr(c2 + 1));
    if (!(factor > 1.0) || !(start > 0.0) || !(stop >= start)) {
      throw SchemaError("bad geometric range '" + token +
                        "': need 0 < start <= stop and factor > 1");
    }
    for (double v = start; v <= stop * (1.0 + 1e-12); v *= factor) {
      values.push_back(std::min(v, stop));
    }
  }
  if (values.empty()) {
    throw SchemaError("empty grid: '" + text + "'");
  }
  return values;
}

std::vector<unsigned> parse_k_grid(const std::string& text) {
  std::vector<unsigned> values;
  for (double v : parse_double_grid(text)) {
    const auto k = static_cast<unsigned>(std::llround(v));
    if (k < 1 || std::abs(v - static_cast<double>(k)) > 1e-9) {
      throw SchemaError("k grid values must be positive integers");
    }
    values.push_back(k);
  }
  return values;
}

// ---- bench ---------------------------------------------------------------

namespace {

void print_bench_summary(std::ostream& out,
                         std::span<const TrialRecord> records) {
  // Mean throughput per (op, k, fraction); report min/max over fractions and
  // the sequential:random ratio.
  std::map<std::pair<std::string, unsigned>,
           std::map<double, std::pair<double, std::size_t>>>
      cells;
  for (const TrialRecord& record : records) {
    if (!record.ok()) continue;
    auto& cell = cells[{std::string(to_string(record.op)), record.k}]
                      [record.r_fraction];
    cell.first += record.throughput_bytes_per_us;
    ++cell.second;
  }
  out << "op      k   min_tput    max_tput    seq:rand\n";
  for (const auto& [key, by_fraction] : cells) {
    double min_tput = std::numeric_limits<double>::infinity();
    double max_tput = 0.0;
    for (const auto& [fraction, acc] : by_fraction) {
      const double mean = acc.first / static_cast<double>(acc.second);
      min_tput = std::min(min_tput, mean);
      max_tput = std::max(max_tput, mean);
    }
    const double first_mean =
        by_fraction.begin()->second.first /
        static_cast<double>(by_fraction.begin()->second.second);
    const double last_mean =
        by_fraction.rbegin()->second.first /
        static_cast<double>(by_fraction.rbegin()->second.second);
    out << std::left << std::setw(7) << key.first << ' ' << std::setw(3)
        << key.second << ' ' << std::setw(11) << min_tput << ' '
        << std::setw(11) << max_tput << ' '
        << (last_mean > 0.0 ? first_mean / last_mean : 0.0) << '\n';
  }
}

void emit_dry_run_plans(std::ostream& out, const WorkloadSpec& spec) {
  out << "k,r,worker,chunk,offset_bytes,length_bytes\n";
  for (unsigned k : spec.k_grid) {
    for (double fraction : spec.r_fraction_grid) {
      const std::uint64_t r = spec.random_accesses_for(fraction);
      const OffsetPlan plan = plan_offsets(spec, k, r, 0);
      for (std::size_t worker = 0; worker < plan.workers.size(); ++worker) {
        for (std::size_t c = 0; c < plan.workers[worker].size(); ++c) {
          const Chunk& chunk = plan.workers[worker][c];
          out << k << ',' << r << ',' << worker << ',' << c << ','
              << chunk.offset_bytes << ',' << chunk.length_bytes << '\n';
        }
      }
    }
  }
}

nlohmann::json provenance_json(const GridResult& result,
                               const WorkloadSpec& spec) {
  return {{"backend", result.provenance.backend},
          {"unit_transfer_bytes", result.provenance.unit_transfer_bytes},
          {"direct_io", result.provenance.direct_io},
          {"precondition_id", result.provenance.precondition_id},
          {"min_region_bytes", result.provenance.min_region_bytes},
          {"file_size_bytes", spec.file_size_bytes},
          {"seed", spec.seed},
          {"failures", result.failures}};
}

}  // namespace

int cmd_bench(const BenchOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    WorkloadSpec spec = options.spec;
    spec.validate();

    if (options.dry_run) {
      OutTarget target(options.out_csv, out);
      emit_dry_run_plans(target.stream(), spec);
      return kExitOk;
    }

    std::unique_ptr<IoBackend> backend;
    PreconditionRecord precond;
    precond.id = "skipped";
    if (!options.oracle_config.empty()) {
      backend = std::make_unique<OracleBackend>(
          load_oracle_config(options.oracle_config));
    } else {
      if (spec.file_path.empty()) {
        throw SchemaError("bench needs --file or --oracle");
      }
      precond =
          precondition(spec.file_path, options.precondition_bytes, spec);
      backend = std::make_unique<FileBackend>(
          spec.file_path, spec.file_size_bytes, spec.direct_io,
          FileBackend::Options{options.unit_transfer_bytes});
    }

    OutTarget target(options.out_csv, out);
    GridResult result = run_grid(spec, *backend, &target.stream(), &precond);

    if (!options.out_csv.empty()) {
      std::ofstream meta(options.out_csv.string() + ".meta.json");
      meta << provenance_json(result, spec).dump(2) << '\n';
      print_bench_summary(out, result.records);
    } else {
      print_bench_summary(err, result.records);
    }
    return result.failures == 0 ? kExitOk : kExitIo;
  });
}

// ---- calibrate -------------------------------------------------------------

namespace {

PageGeometry derive_geometry(const CalibrateOptions& options,
                             std::span<const TrialRecord> records) {
  const std::uint64_t page = options.page_size_bytes;
  std::uint64_t working_set = options.working_set_bytes;
  if (working_set == 0) {
    for (const TrialRecord& record : records) {
      working_set = std::max(
          working_set, record.per_worker_bytes * record.k);
    }
  }
  working_set = std::max(working_set, 4 * page);
  std::uint64_t memory = options.memory_bytes;
  if (memory == 0) {
    memory = std::min<std::uint64_t>(1ull << 30, working_set / 2);
  }
  memory = std::clamp<std::uint64_t>(memory, page, working_set - 1);
  return PageGeometry(page, working_set, memory);
}

void print_per_k_table(std::ostream& out, const FitReport& report) {
  std::map<unsigned, const PerKCosts*> writes, reads;
  for (const PerKCosts& costs : report.per_k) {
    (costs.op == OpKind::Write ? writes : reads)[costs.k] = &costs;
  }
  out << "  k       s(k)    beta(k)      R^2       t(k)   alpha(k)      "
         "R^2\n";
  std::set<unsigned> ks;
  for (const auto& [k, unused] : writes) ks.insert(k);
  for (const auto& [k, unused] : reads) ks.insert(k);
  for (unsigned k : ks) {
    out << std::setw(3) << k;
    auto row = [&](const PerKCosts* costs) {
      if (costs == nullptr) {
        out << std::setw(33) << "-";
        return;
      }
      out << ' ' << std::setw(10) << std::setprecision(4) << costs->setup_us
          << ' ' << std::setw(10) << costs->transfer_us << ' '
          << std::setw(8) << costs->r_squared;
    };
    row(writes.count(k) ? writes[k] : nullptr);
    row(reads.count(k) ? reads[k] : nullptr);
    out << '\n';
  }
}

}  // namespace

int cmd_calibrate(const CalibrateOptions& options, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<TrialRecord> records =
        load_trial_csv(options.trials_csv);
    const PageGeometry geometry = derive_geometry(options, records);
    CalibrationOptions calibration;
    calibration.pdam_pages_per_cycle = options.pdam_pages_per_cycle;
    calibration.device_label = options.device_label;
    calibration.source_label = options.trials_csv.filename().string();
    CalibrationResult result =
        calibrate_profile(records, geometry, calibration);

    if (!options.out_profile.empty()) {
      save_device_profile(options.out_profile, result.profile);
    }
    if (!options.out_report.empty()) {
      save_fit_report(options.out_report, result.report);
    }
    print_per_k_table(out, result.report);
    out << "fit converged: " << (result.report.converged() ? "yes" : "no")
        << " (" << result.report.total_iterations() << " iterations)\n";
    return kExitOk;
  });
}

// ---- predict ---------------------------------------------------------------

namespace {

constexpr std::string_view kPredictionsHeader =
    "model,op,k,r_fraction,predicted_throughput";

struct PredictionRow {
  std::string model;
  OpKind op;
  unsigned k;
  double r_fraction;
  double throughput;
};

std::vector<PredictionRow> read_predictions_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kPredictionsHeader) {
    throw SchemaError("line 1: bad predictions header in " + path.string());
  }
  std::vector<PredictionRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string model, op, k, fraction, throughput;
    if (!std::getline(ss, model, ',') || !std::getline(ss, op, ',') ||
        !std::getline(ss, k, ',') || !std::getline(ss, fraction, ',') ||
        !std::getline(ss, throughput)) {
      throw SchemaError("line " + std::to_string(line_number) +
                        ": expected 5 fields");
    }
    rows.push_back(PredictionRow{
        model, op_kind_from_string(op),
        static_cast<unsigned>(std::stoul(k)), parse_double(fraction),
        parse_double(throughput)});
  }
  return rows;
}

}  // namespace

int cmd_predict(const PredictOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const DeviceProfile profile = load_device_profile(options.profile_json);
    const PageGeometry& geometry = profile.mqssd.geometry();
    std::vector<double> fractions = options.r_fraction_grid;
    if (fractions.empty()) {
      fractions = WorkloadSpec::default_r_fraction_grid();
    }
    std::sort(fractions.begin(), fractions.end());
    std::vector<unsigned> ks = options.k_grid;
    std::sort(ks.begin(), ks.end());
    for (unsigned k : ks) {
      if (static_cast<double>(k) > profile.mqssd.k_max()) {
        throw SchemaError("k=" + std::to_string(k) +
                          " exceeds the profile k_max " +
                          std::to_string(profile.mqssd.k_max()));
      }
    }
    const std::uint64_t per_worker = options.per_worker_bytes;
    const double pages = static_cast<double>(per_worker) /
                         static_cast<double>(geometry.page_size_bytes());

    OutTarget target(options.out_csv, out);
    std::ostream& csv = target.stream();
    csv << kPredictionsHeader << '\n';
    const char* models[] = {"dam", "pdam", "affine", "mqssd"};
    std::vector<OpKind> ops = options.ops;
    std::sort(ops.begin(), ops.end());
    for (const char* model : models) {
      for (OpKind op : ops) {
        for (unsigned k : ks) {
          for (double fraction : fractions) {
            const auto r = std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(std::llround(fraction * pages)));
            const double emitted_fraction = static_cast<double>(r) / pages;
            double value = 0.0;
            const std::string_view name(model);
            if (name == "dam") {
              value = predict_dam(profile.dam, geometry, op, r, k);
            } else if (name == "pdam") {
              value = predict_pdam(profile.pdam, geometry, op, r, k);
            } else if (name == "affine") {
              value = predict_affine(profile.affine, geometry, op, r, k,
                                     per_worker);
            } else {
              value = predict_mqssd(profile.mqssd, op, r, k, per_worker);
            }
            csv << model << ',' << to_string(op) << ',' << k << ','
                << format_double(emitted_fraction) << ','
                << format_double(value) << '\n';
          }
        }
      }
    }
    return kExitOk;
  });
}

// ---- compare ---------------------------------------------------------------

namespace {

struct ErrorAccum {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double value) {
    sum += value;
    ++count;
  }
  double mean() const {
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
  }
};

}  // namespace

int cmd_compare(const CompareOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<PredictionRow> predictions =
        read_predictions_csv(options.predictions_csv);
    const std::vector<TrialRecord> trials =
        load_trial_csv(options.trials_csv);

    // Observed mean throughput per cell, keyed by exact decimal fraction.
    std::map<std::string, std::pair<double, std::size_t>> observed;
    for (const TrialRecord& record : trials) {
      if (!record.ok()) continue;
      const std::string key = std::string(to_string(record.op)) + "|" +
                              std::to_string(record.k) + "|" +
                              format_double(record.r_fraction);
      auto& cell = observed[key];
      cell.first += record.throughput_bytes_per_us;
      ++cell.second;
    }
    if (observed.empty()) {
      throw SchemaError("no usable trials to compare against");
    }

    std::map<std::string, ErrorAccum> overall;
    std::map<std::string, std::map<unsigned, ErrorAccum>> per_k;
    std::map<std::string, std::map<std::string, ErrorAccum>> per_fraction;
    for (const PredictionRow& row : predictions) {
      const std::string key = std::string(to_string(row.op)) + "|" +
                              std::to_string(row.k) + "|" +
                              format_double(row.r_fraction);
      auto it = observed.find(key);
      if (it == observed.end()) {
        throw SchemaError("grid mismatch: no trial cell for prediction (" +
                          key + ")");
      }
      const double mean_observed =
          it->second.first / static_cast<double>(it->second.second);
      const double error =
          std::abs(row.throughput - mean_observed) / mean_observed;
      overall[row.model].add(error);
      per_k[row.model][row.k].add(error);
      per_fraction[row.model][format_double(row.r_fraction)].add(error);
    }
    if (overall.empty()) {
      throw SchemaError("predictions CSV has no rows");
    }

    std::vector<std::pair<double, std::string>> ranking;
    for (const auto& [model, accum] : overall) {
      ranking.emplace_back(accum.mean(), model);
    }
    std::sort(ranking.begin(), ranking.end());

    out << "model   mean_abs_rel_error\n";
    for (const auto& [error, model] : ranking) {
      out << std::left << std::setw(7) << model << ' ' << error << '\n';
    }
    out << "best model: " << ranking.front().second << '\n';

    if (!options.out_csv.empty()) {
      std::ofstream csv = open_out(options.out_csv);
      csv << "model,scope,key,mean_abs_rel_error\n";
      for (const auto& [model, accum] : overall) {
        csv << model << ",overall,," << format_double(accum.mean()) << '\n';
      }
      for (const auto& [model, by_k] : per_k) {
        for (const auto& [k, accum] : by_k) {
          csv << model << ",k," << k << ',' << format_double(accum.mean())
              << '\n';
        }
      }
      for (const auto& [model, by_fraction] : per_fraction) {
        for (const auto& [fraction, accum] : by_fraction) {
          csv << model << ",r_fraction," << fraction << ','
              << format_double(accum.mean()) << '\n';
        }
      }
    }
    return kExitOk;
  });
}

// ---- lsm -------------------------------------------------------------------

namespace {

constexpr std::string_view kLsmHeader = "F,k,metric,value";

struct LsmCell {
  double fanout;
  unsigned k;
  std::string metric;
  double value;
};

std::vector<LsmCell> read_lsm_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kLsmHeader) {
    throw SchemaError("bad header in " + path.string() + ", expected '" +
                      std::string(kLsmHeader) + "'");
  }
  std::vector<LsmCell> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string fanout, k, metric, value;
    if (!std::getline(ss, fanout, ',') || !std::getline(ss, k, ',') ||
        !std::getline(ss, metric, ',') || !std::getline(ss, value)) {
      throw SchemaError("bad row in " + path.string() + ": '" + line + "'");
    }
    cells.push_back(LsmCell{parse_double(fanout),
                            static_cast<unsigned>(std::stoul(k)), metric,
                            parse_double(value)});
  }
  return cells;
}

int run_lsm_costs(const LsmOptions& options, std::ostream& out,
                  std::ostream& err) {
  (void)err;
  const DeviceProfile profile = load_device_profile(options.profile_json);
  const std::uint64_t scan_bytes =
      options.scan_bytes != 0 ? options.scan_bytes
                              : 128 * options.entry_size_bytes;

  std::vector<LsmCell> cells;
  auto emit = [&](double fanout, unsigned k, const std::string& metric,
                  double value) {
    cells.push_back(LsmCell{fanout, k, metric, value});
  };

  for (double fanout : options.fanouts) {
    const LsmLayout layout = LsmLayout::leveled(
        fanout, options.file_size_bytes, options.l0_file_count,
        options.block_size_bytes, options.working_set_bytes,
        options.entry_size_bytes);
    for (unsigned k : options.k_grid) {
      emit(fanout, k, "insert_us_per_byte",
           insert_cost_per_byte(layout, profile.mqssd, k));
      emit(fanout, k, "insert_us_per_entry",
           insert_cost_per_entry(layout, profile.mqssd, k));
      emit(fanout, k, "query_us", query_cost(layout, profile.mqssd, k));
      emit(fanout, k, "scan_us",
           scan_cost(layout, profile.mqssd, k, scan_bytes));
    }
  }
  if (options.include_single_level) {
    const LsmLayout layout = LsmLayout::single_level(
        options.file_size_bytes, options.block_size_bytes,
        options.working_set_bytes, options.entry_size_bytes);
    const double inf = std::numeric_limits<double>::infinity();
    for (unsigned k : options.k_grid) {
      const double per_entry = sl_insert_cost(layout, profile.mqssd, k);
      emit(inf, k, "insert_us_per_entry", per_entry);
      emit(inf, k, "insert_us_per_byte",
           per_entry / static_cast<double>(options.entry_size_bytes));
      emit(inf, k, "query_us", sl_query_cost(layout, profile.mqssd, k));
      emit(inf, k, "scan_us",
           scan_cost(layout, profile.mqssd, k, scan_bytes));
    }
  }

  // Optional alignment against measurements: one least-squares scalar per
  // metric, the stand-in for reintroducing workload constants. Outputs stay
  // relative predictions.
  std::map<std::string, double> scalars;
  if (!options.align_csv.empty()) {
    const std::vector<LsmCell> measured = read_lsm_csv(options.align_csv);
    std::map<std::string, std::pair<double, double>> sums;  // pred*meas, pred^2
    for (const LsmCell& cell : cells) {
      for (const LsmCell& m : measured) {
        if (m.metric == cell.metric && m.k == cell.k &&
            ((std::isinf(m.fanout) && std::isinf(cell.fanout)) ||
             m.fanout == cell.fanout)) {
          auto& [pm, pp] = sums[cell.metric];
          pm += cell.value * m.value;
          pp += cell.value * cell.value;
        }
      }
    }
    for (const auto& [metric, acc] : sums) {
      if (acc.second > 0.0) scalars[metric] = acc.first / acc.second;
    }
  }

  OutTarget target(options.out_csv, out);
  std::ostream& csv = target.stream();
  csv << kLsmHeader << '\n';
  for (const LsmCell& cell : cells) {
    csv << format_double(cell.fanout) << ',' << cell.k << ',' << cell.metric
        << ',' << format_double(cell.value) << '\n';
    auto it = scalars.find(cell.metric);
    if (it != scalars.end()) {
      csv << format_double(cell.fanout) << ',' << cell.k << ",aligned_"
          << cell.metric << ',' << format_double(cell.value * it->second)
          << '\n';
    }
  }
  for (const auto& [metric, scalar] : scalars) {
    out << "alignment scalar (" << metric << "): " << scalar
        << " (relative predictions)\n";
  }
  return kExitOk;
}

int run_lsm_simulate(const LsmOptions& options, std::ostream& out,
                     std::ostream& err) {
  (void)err;
  DataMovementConfig config;
  config.n_keys = options.n_keys;
  config.keys_per_file = options.keys_per_file;
  config.l0_file_count = options.l0_file_count;
  config.fanouts = options.fanouts;
  config.seed = options.seed;
  if (!options.simulate_config.empty()) {
    std::ifstream in(options.simulate_config);
    if (!in) {
      throw IoError("cannot open " + options.simulate_config.string());
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("simulate config parse error: ") +
                        e.what());
    }
    config.n_keys = j.value("n_keys", config.n_keys);
    config.keys_per_file = j.value("t_keys", config.keys_per_file);
    config.l0_file_count = j.value("c", config.l0_file_count);
    if (j.contains("f_grid")) {
      config.fanouts = j["f_grid"].get<std::vector<double>>();
    }
    config.seed = j.value("seed", config.seed);
  }

  const DataMovementReport report = simulate_data_movement(config);

  OutTarget target(options.out_csv, out);
  std::ostream& csv = target.stream();
  csv << kLsmHeader << '\n';
  for (const CompactionStats& stats : report.per_fanout) {
    const std::string f = format_double(stats.fanout);
    csv << f << ",0,files_touched_mean,"
        << format_double(stats.mean_files_touched) << '\n';
    csv << f << ",0,files_touched_variance," << format_double(stats.variance)
        << '\n';
    csv << f << ",0,compaction_count,"
        << static_cast<double>(stats.compaction_count) << '\n';
    csv << f << ",0,l0_files_touched_mean,"
        << format_double(stats.l0_mean_files_touched) << '\n';
    csv << f << ",0,l0_compaction_count,"
        << static_cast<double>(stats.l0_compaction_count) << '\n';
    for (const LevelTransitionStats& transition : stats.per_transition) {
      csv << f << ",0,files_touched_mean_l"
          << transition.from_level << ','
          << format_double(transition.mean_files_touched) << '\n';
    }
  }
  csv << "0,0,fit_slope," << format_double(report.fit_slope) << '\n';
  csv << "0,0,fit_intercept," << format_double(report.fit_intercept) << '\n';
  csv << "0,0,fit_r_squared," << format_double(report.fit_r_squared) << '\n';

  out << "files touched (levels >= 1) vs F: slope=" << report.fit_slope
      << " intercept=" << report.fit_intercept
      << " R^2=" << report.fit_r_squared << '\n';
  return kExitOk;
}

}  // namespace

int cmd_lsm(const LsmOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.mode == LsmOptions::Mode::Costs) {
      return run_lsm_costs(options, out, err);
    }
    return run_lsm_simulate(options, out, err);
  });
}

}  // namespace mqssd::cli
