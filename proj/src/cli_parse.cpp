#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqssd/commands.hpp"
#include "mqssd/errors.hpp"

namespace mqssd::cli {

namespace {

std::vector<double> json_double_grid(const nlohmann::json& j) {
  if (j.is_string()) return parse_double_grid(j.get<std::string>());
  return j.get<std::vector<double>>();
}

std::vector<unsigned> json_k_grid(const nlohmann::json& j) {
  if (j.is_string()) return parse_k_grid(j.get<std::string>());
  return j.get<std::vector<unsigned>>();
}

std::vector<OpKind> parse_ops(const std::string& text) {
  if (text == "both") return {OpKind::Read, OpKind::Write};
  return {op_kind_from_string(text)};
}

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config parse error: ") + e.what());
  }
}

// The JSON config mirrors the flags; values given on the command line win.
void apply_bench_config(const nlohmann::json& j, BenchOptions& options,
                        std::string& ops_text, std::string& k_grid_text,
                        std::string& r_grid_text) {
  WorkloadSpec& spec = options.spec;
  spec.device_label = j.value("device_label", spec.device_label);
  if (j.contains("file")) spec.file_path = j["file"].get<std::string>();
  spec.file_size_bytes = j.value("size", spec.file_size_bytes);
  spec.per_worker_bytes = j.value("per_worker", spec.per_worker_bytes);
  if (j.contains("op")) ops_text = j["op"].get<std::string>();
  if (j.contains("k_grid")) {
    spec.k_grid = json_k_grid(j["k_grid"]);
    k_grid_text.clear();
  }
  if (j.contains("r_grid")) {
    spec.r_fraction_grid = json_double_grid(j["r_grid"]);
    r_grid_text.clear();
  }
  spec.repetitions = j.value("reps", spec.repetitions);
  spec.page_size_bytes = j.value("page_size", spec.page_size_bytes);
  spec.direct_io = j.value("direct_io", spec.direct_io);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("oracle")) {
    options.oracle_config = j["oracle"].get<std::string>();
  }
  if (j.contains("out")) options.out_csv = j["out"].get<std::string>();
  options.precondition_bytes =
      j.value("precondition_bytes", options.precondition_bytes);
  options.dry_run = j.value("dry_run", options.dry_run);
  options.unit_transfer_bytes =
      j.value("unit_transfer", options.unit_transfer_bytes);
}

std::uint64_t env_seed_override(std::uint64_t seed) {
  const char* env = std::getenv("MQSSD_SEED");
  if (env == nullptr || *env == '\0') return seed;
  return std::strtoull(env, nullptr, 10);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "mqssd: multi-queue SSD benchmark harness, cost-model calibration "
      "and LSM-tree analysis"};
  app.require_subcommand(1);

  // Shared holders converted after parse.
  std::string config_path;

  BenchOptions bench;
  std::string bench_ops = "both", bench_k_grid, bench_r_grid;
  std::string bench_file, bench_oracle, bench_out;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Run or synthesize the concurrent file-I/O benchmark grid");
  bench_cmd->add_option("--config", config_path,
                        "JSON config mirroring the flags");
  bench_cmd->add_option("--label", bench.spec.device_label, "device label");
  bench_cmd->add_option("--file", bench_file, "target file path");
  bench_cmd->add_option("--size", bench.spec.file_size_bytes,
                        "file size in bytes");
  bench_cmd->add_option("--per-worker", bench.spec.per_worker_bytes,
                        "bytes transferred per worker");
  bench_cmd->add_option("--op", bench_ops, "read|write|both");
  bench_cmd->add_option("--k-grid", bench_k_grid,
                        "concurrency grid (comma list or start:stop:factor)");
  bench_cmd->add_option("--r-grid", bench_r_grid,
                        "random-access fraction grid");
  bench_cmd->add_option("--reps", bench.spec.repetitions, "repetitions");
  bench_cmd->add_option("--page-size", bench.spec.page_size_bytes,
                        "device page size");
  bench_cmd->add_flag("--direct-io,!--no-direct-io", bench.spec.direct_io,
                      "bypass the OS page cache (default on)");
  bench_cmd->add_option("--seed", bench.spec.seed, "plan/noise seed");
  bench_cmd->add_option("--oracle", bench_oracle,
                        "oracle config JSON (synthetic backend, no file)");
  bench_cmd->add_option("--out", bench_out, "output CSV path");
  bench_cmd->add_option("--precondition-bytes", bench.precondition_bytes,
                        "sequential bytes to write before the grid");
  bench_cmd->add_flag("--dry-run", bench.dry_run, "emit offset plans only");
  bench_cmd->add_option("--unit-transfer", bench.unit_transfer_bytes,
                        "I/O unit size per syscall");

  CalibrateOptions calibrate;
  std::string calibrate_trials, calibrate_profile_path, calibrate_report;
  CLI::App* calibrate_cmd = app.add_subcommand(
      "calibrate", "Derive model parameters from a trial CSV");
  calibrate_cmd->add_option("--config", config_path, "JSON config");
  calibrate_cmd->add_option("--trials", calibrate_trials, "input trial CSV")
      ->required();
  calibrate_cmd->add_option("--out-profile", calibrate_profile_path,
                            "output device profile JSON");
  calibrate_cmd->add_option("--out-report", calibrate_report,
                            "output fit report JSON");
  calibrate_cmd->add_option("--page-size", calibrate.page_size_bytes,
                            "device page size");
  calibrate_cmd->add_option("--working-set", calibrate.working_set_bytes,
                            "geometry N (0 = derive from data)");
  calibrate_cmd->add_option("--memory", calibrate.memory_bytes,
                            "geometry M (0 = derive)");
  calibrate_cmd->add_option("--pdam-p", calibrate.pdam_pages_per_cycle,
                            "PDAM concurrent pages (channel count)");
  calibrate_cmd->add_option("--label", calibrate.device_label,
                            "device label override");

  PredictOptions predict;
  std::string predict_profile, predict_out, predict_ops = "both";
  std::string predict_k_grid, predict_r_grid;
  CLI::App* predict_cmd = app.add_subcommand(
      "predict", "Evaluate all four models over a (k, r) grid");
  predict_cmd->add_option("--config", config_path, "JSON config");
  predict_cmd->add_option("--profile", predict_profile, "device profile JSON")
      ->required();
  predict_cmd->add_option("--out", predict_out, "output CSV path");
  predict_cmd->add_option("--op", predict_ops, "read|write|both");
  predict_cmd->add_option("--k-grid", predict_k_grid, "concurrency grid");
  predict_cmd->add_option("--r-grid", predict_r_grid, "fraction grid");
  predict_cmd->add_option("--per-worker", predict.per_worker_bytes,
                          "bytes per worker");

  CompareOptions compare;
  std::string compare_predictions, compare_trials, compare_out;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Score predictions against measured trials");
  compare_cmd->add_option("--config", config_path, "JSON config");
  compare_cmd->add_option("--predictions", compare_predictions,
                          "predictions CSV")
      ->required();
  compare_cmd->add_option("--trials", compare_trials, "trial CSV")->required();
  compare_cmd->add_option("--out", compare_out, "error metric CSV");

  LsmOptions lsm;
  std::string lsm_mode = "costs", lsm_profile, lsm_out, lsm_fanouts;
  std::string lsm_k_grid, lsm_align, lsm_sim_config;
  CLI::App* lsm_cmd = app.add_subcommand(
      "lsm", "LSM-tree cost grids and data-movement simulation");
  lsm_cmd->add_option("--config", config_path, "JSON config");
  lsm_cmd->add_option("--mode", lsm_mode, "costs|simulate");
  lsm_cmd->add_option("--profile", lsm_profile,
                      "device profile JSON (costs mode)");
  lsm_cmd->add_option("--out", lsm_out, "output CSV path");
  lsm_cmd->add_option("--fanouts", lsm_fanouts, "fanout grid");
  lsm_cmd->add_option("--k-grid", lsm_k_grid, "concurrency grid");
  lsm_cmd->add_option("--file-size", lsm.file_size_bytes, "SST file size T");
  lsm_cmd->add_option("--l0-files", lsm.l0_file_count, "L0 file count C");
  lsm_cmd->add_option("--block-size", lsm.block_size_bytes, "DB block B'");
  lsm_cmd->add_option("--working-set", lsm.working_set_bytes, "data size N");
  lsm_cmd->add_option("--entry-size", lsm.entry_size_bytes,
                      "key-value pair bytes");
  lsm_cmd->add_option("--scan-bytes", lsm.scan_bytes,
                      "scan size (0 = 128 entries)");
  lsm_cmd->add_flag("--single-level,!--no-single-level",
                    lsm.include_single_level,
                    "include the single-level layout (default on)");
  lsm_cmd->add_option("--align-csv", lsm_align,
                      "measured (F,k,metric,value) CSV for scalar alignment");
  lsm_cmd->add_option("--n-keys", lsm.n_keys, "simulate: total keys");
  lsm_cmd->add_option("--keys-per-file", lsm.keys_per_file,
                      "simulate: keys per SST file");
  lsm_cmd->add_option("--seed", lsm.seed, "simulate: insertion order seed");
  lsm_cmd->add_option("--sim-config", lsm_sim_config,
                      "simulate: JSON {n_keys,t_keys,c,f_grid,seed}");

  // A config file provides defaults; explicit flags override because CLI11
  // only assigns bound variables for flags that were actually given.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[i + 1];
      break;
    }
    if (arg.rfind("--config=", 0) == 0) {
      config_path = arg.substr(9);
      break;
    }
  }
  if (!config_path.empty() && argc > 1) {
    try {
      const nlohmann::json j = load_config(config_path);
      const std::string subcommand = argv[1];
      if (subcommand == "bench") {
        apply_bench_config(j, bench, bench_ops, bench_k_grid, bench_r_grid);
        if (!bench.spec.file_path.empty()) {
          bench_file = bench.spec.file_path.string();
        }
      }
      // Other commands accept the same flag names as keys.
      if (subcommand == "lsm") {
        if (j.contains("fanouts")) {
          lsm.fanouts = json_double_grid(j["fanouts"]);
        }
        if (j.contains("k_grid")) lsm.k_grid = json_k_grid(j["k_grid"]);
        lsm.n_keys = j.value("n_keys", lsm.n_keys);
        lsm.keys_per_file = j.value("keys_per_file", lsm.keys_per_file);
        lsm.l0_file_count = j.value("l0_files", lsm.l0_file_count);
        lsm.seed = j.value("seed", lsm.seed);
        if (j.contains("mode")) lsm_mode = j["mode"].get<std::string>();
      }
    } catch (const IoError& e) {
      err << "I/O error: " << e.what() << '\n';
      return kExitIo;
    } catch (const std::exception& e) {
      err << "data error: " << e.what() << '\n';
      return kExitData;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  // Flag text -> typed grids; malformed values are usage errors.
  try {
    if (!bench_file.empty()) bench.spec.file_path = bench_file;
    if (!bench_oracle.empty()) bench.oracle_config = bench_oracle;
    if (!bench_out.empty()) bench.out_csv = bench_out;
    bench.spec.ops = parse_ops(bench_ops);
    if (!bench_k_grid.empty()) bench.spec.k_grid = parse_k_grid(bench_k_grid);
    if (!bench_r_grid.empty()) {
      bench.spec.r_fraction_grid = parse_double_grid(bench_r_grid);
    }
    bench.spec.seed = env_seed_override(bench.spec.seed);

    if (!calibrate_trials.empty()) calibrate.trials_csv = calibrate_trials;
    if (!calibrate_profile_path.empty()) {
      calibrate.out_profile = calibrate_profile_path;
    }
    if (!calibrate_report.empty()) calibrate.out_report = calibrate_report;

    if (!predict_profile.empty()) predict.profile_json = predict_profile;
    if (!predict_out.empty()) predict.out_csv = predict_out;
    predict.ops = parse_ops(predict_ops);
    if (!predict_k_grid.empty()) predict.k_grid = parse_k_grid(predict_k_grid);
    if (!predict_r_grid.empty()) {
      predict.r_fraction_grid = parse_double_grid(predict_r_grid);
    }

    if (!compare_predictions.empty()) {
      compare.predictions_csv = compare_predictions;
    }
    if (!compare_trials.empty()) compare.trials_csv = compare_trials;
    if (!compare_out.empty()) compare.out_csv = compare_out;

    if (lsm_mode == "costs") {
      lsm.mode = LsmOptions::Mode::Costs;
    } else if (lsm_mode == "simulate") {
      lsm.mode = LsmOptions::Mode::Simulate;
    } else {
      throw SchemaError("lsm --mode must be costs|simulate");
    }
    if (!lsm_profile.empty()) lsm.profile_json = lsm_profile;
    if (!lsm_out.empty()) lsm.out_csv = lsm_out;
    if (!lsm_fanouts.empty()) lsm.fanouts = parse_double_grid(lsm_fanouts);
    if (!lsm_k_grid.empty()) lsm.k_grid = parse_k_grid(lsm_k_grid);
    if (!lsm_align.empty()) lsm.align_csv = lsm_align;
    if (!lsm_sim_config.empty()) lsm.simulate_config = lsm_sim_config;
    lsm.seed = env_seed_override(lsm.seed);
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
  if (calibrate_cmd->parsed()) return cmd_calibrate(calibrate, out, err);
  if (predict_cmd->parsed()) return cmd_predict(predict, out, err);
  if (compare_cmd->parsed()) return cmd_compare(compare, out, err);
  if (lsm_cmd->parsed()) return cmd_lsm(lsm, out, err);
  err << "usage error: no subcommand\n";
  return kExitUsage;
}

}  // namespace mqssd::cli
