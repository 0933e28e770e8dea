#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mqssd/bench.hpp"
#include "mqssd/calibration.hpp"
#include "mqssd/lsm.hpp"
#include "mqssd/models.hpp"
#include "mqssd/oracle.hpp"
#include "mqssd/profile_json.hpp"
#include "mqssd/trial.hpp"

namespace py = pybind11;
using namespace mqssd;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-queue SSD cost models, calibration, benchmark harness "
            "and LSM-tree analysis";

  py::enum_<OpKind>(m, "OpKind")
      .value("Read", OpKind::Read)
      .value("Write", OpKind::Write);

  py::class_<PageGeometry>(m, "PageGeometry")
      .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(),
           py::arg("page_size_bytes"), py::arg("working_set_bytes"),
           py::arg("memory_bytes"))
      .def_property_readonly("page_size_bytes", &PageGeometry::page_size_bytes)
      .def_property_readonly("working_set_bytes",
                             &PageGeometry::working_set_bytes)
      .def_property_readonly("memory_bytes", &PageGeometry::memory_bytes);

  py::class_<RationalFn>(m, "RationalFn")
      .def(py::init<std::vector<double>, std::vector<double>, double>(),
           py::arg("numerator"), py::arg("denominator"), py::arg("k_max"))
      .def("eval", &RationalFn::eval, py::arg("k"))
      .def("__call__", &RationalFn::eval, py::arg("k"))
      .def_property_readonly("numerator", &RationalFn::numerator)
      .def_property_readonly("denominator", &RationalFn::denominator)
      .def_property_readonly("k_max", &RationalFn::k_max)
      .def_static("constant", &RationalFn::constant, py::arg("value"),
                  py::arg("k_max"), py::arg("coefficients") = 3);

  m.def("eval_rational", &eval_rational, py::arg("fn"), py::arg("k"));

  py::class_<DamParams>(m, "DamParams")
      .def(py::init<double, double>(), py::arg("read_page_cost_us"),
           py::arg("write_page_cost_us"))
      .def_property_readonly(
          "read", [](const DamParams& p) { return p.page_cost_us.read; })
      .def_property_readonly(
          "write", [](const DamParams& p) { return p.page_cost_us.write; });

  py::class_<PdamParams>(m, "PdamParams")
      .def(py::init<double, double, std::uint32_t>(),
           py::arg("read_cycle_cost_us"), py::arg("write_cycle_cost_us"),
           py::arg("pages_per_cycle"))
      .def_property_readonly(
          "read", [](const PdamParams& p) { return p.cycle_cost_us.read; })
      .def_property_readonly(
          "write", [](const PdamParams& p) { return p.cycle_cost_us.write; })
      .def_readonly("pages_per_cycle", &PdamParams::pages_per_cycle);

  py::class_<AffineParams>(m, "AffineParams")
      .def(py::init([](double read_setup, double read_transfer,
                       double write_setup, double write_transfer) {
             return AffineParams({read_setup, read_transfer},
                                 {write_setup, write_transfer});
           }),
           py::arg("read_setup_us"), py::arg("read_transfer_us"),
           py::arg("write_setup_us"), py::arg("write_transfer_us"))
      .def_property_readonly(
          "read",
          [](const AffineParams& p) {
            return py::make_tuple(p.read.setup_us, p.read.transfer_us);
          })
      .def_property_readonly("write", [](const AffineParams& p) {
        return py::make_tuple(p.write.setup_us, p.write.transfer_us);
      });

  py::class_<MqssdProfile>(m, "MqssdProfile")
      .def(py::init<RationalFn, RationalFn, RationalFn, RationalFn,
                    PageGeometry, double>(),
           py::arg("write_setup"), py::arg("write_transfer"),
           py::arg("read_setup"), py::arg("read_transfer"),
           py::arg("geometry"), py::arg("k_max"))
      .def_property_readonly("write_setup", &MqssdProfile::write_setup)
      .def_property_readonly("write_transfer", &MqssdProfile::write_transfer)
      .def_property_readonly("read_setup", &MqssdProfile::read_setup)
      .def_property_readonly("read_transfer", &MqssdProfile::read_transfer)
      .def_property_readonly("geometry", &MqssdProfile::geometry)
      .def_property_readonly("k_max", &MqssdProfile::k_max)
      .def("setup", &MqssdProfile::setup, py::arg("op"))
      .def("transfer", &MqssdProfile::transfer, py::arg("op"));

  py::class_<Provenance>(m, "Provenance")
      .def_readwrite("source", &Provenance::source)
      .def_readwrite("calibrated_at", &Provenance::calibrated_at);

  py::class_<DeviceProfile>(m, "DeviceProfile")
      .def_readwrite("device_label", &DeviceProfile::device_label)
      .def_readonly("dam", &DeviceProfile::dam)
      .def_readonly("pdam", &DeviceProfile::pdam)
      .def_readonly("affine", &DeviceProfile::affine)
      .def_readonly("mqssd", &DeviceProfile::mqssd)
      .def_readonly("provenance", &DeviceProfile::provenance)
      .def("to_json",
           [](const DeviceProfile& p) { return device_profile_to_json(p); })
      .def_static("from_json", [](const std::string& text) {
        return device_profile_from_json(text);
      });

  m.def("load_device_profile", &load_device_profile, py::arg("path"));
  m.def("save_device_profile", &save_device_profile, py::arg("path"),
        py::arg("profile"));

  m.def("predict_dam", &predict_dam, py::arg("params"), py::arg("geometry"),
        py::arg("op"), py::arg("random_accesses"), py::arg("concurrency"));
  m.def("predict_pdam", &predict_pdam, py::arg("params"), py::arg("geometry"),
        py::arg("op"), py::arg("random_accesses"), py::arg("concurrency"));
  m.def("pdam_page_cost", &pdam_page_cost, py::arg("params"), py::arg("op"),
        py::arg("concurrency"));
  m.def("predict_affine", &predict_affine, py::arg("params"),
        py::arg("geometry"), py::arg("op"), py::arg("random_accesses"),
        py::arg("concurrency"), py::arg("per_worker_bytes"));
  m.def("predict_mqssd", &predict_mqssd, py::arg("profile"), py::arg("op"),
        py::arg("random_accesses"), py::arg("concurrency"),
        py::arg("per_worker_bytes"));

  py::class_<TrialRecord>(m, "TrialRecord")
      .def(py::init<>())
      .def_readwrite("device_label", &TrialRecord::device_label)
      .def_readwrite("op", &TrialRecord::op)
      .def_readwrite("k", &TrialRecord::k)
      .def_readwrite("random_accesses", &TrialRecord::random_accesses)
      .def_readwrite("r_fraction", &TrialRecord::r_fraction)
      .def_readwrite("per_worker_bytes", &TrialRecord::per_worker_bytes)
      .def_readwrite("elapsed_us", &TrialRecord::elapsed_us)
      .def_readwrite("throughput_bytes_per_us",
                     &TrialRecord::throughput_bytes_per_us)
      .def_readwrite("repetition", &TrialRecord::repetition)
      .def_readwrite("seed", &TrialRecord::seed)
      .def_readwrite("status", &TrialRecord::status)
      .def("ok", &TrialRecord::ok);

  m.def("load_trial_csv", &load_trial_csv, py::arg("path"));
  m.def(
      "save_trial_csv",
      [](const std::filesystem::path& path,
         const std::vector<TrialRecord>& records) {
        save_trial_csv(path, records);
      },
      py::arg("path"), py::arg("records"));

  py::class_<PerKCosts>(m, "PerKCosts")
      .def_readonly("op", &PerKCosts::op)
      .def_readonly("k", &PerKCosts::k)
      .def_readonly("setup_us", &PerKCosts::setup_us)
      .def_readonly("transfer_us", &PerKCosts::transfer_us)
      .def_readonly("r_squared", &PerKCosts::r_squared)
      .def_readonly("sample_count", &PerKCosts::sample_count)
      .def_readonly("setup_clamped", &PerKCosts::setup_clamped)
      .def_readonly("zero_variance", &PerKCosts::zero_variance);

  m.def(
      "derive_per_k",
      [](const std::vector<TrialRecord>& trials,
         std::uint64_t page_size_bytes) {
        return derive_per_k(trials, page_size_bytes);
      },
      py::arg("trials"), py::arg("page_size_bytes"));

  py::class_<RationalFitResult>(m, "RationalFitResult")
      .def_readonly("fn", &RationalFitResult::fn)
      .def_readonly("relative_residuals",
                    &RationalFitResult::relative_residuals)
      .def_readonly("converged", &RationalFitResult::converged)
      .def_readonly("iterations", &RationalFitResult::iterations);

  m.def("fit_rational", &fit_rational, py::arg("points"),
        py::arg("numerator_degree"), py::arg("denominator_degree"));

  py::class_<FitReport::FnFit>(m, "FnFit")
      .def_readonly("name", &FitReport::FnFit::name)
      .def_readonly("relative_residuals",
                    &FitReport::FnFit::relative_residuals)
      .def_readonly("converged", &FitReport::FnFit::converged)
      .def_readonly("iterations", &FitReport::FnFit::iterations);

  py::class_<FitReport>(m, "FitReport")
      .def_readonly("per_k", &FitReport::per_k)
      .def_readonly("fits", &FitReport::fits)
      .def("converged", &FitReport::converged)
      .def("total_iterations", &FitReport::total_iterations);

  py::class_<CalibrationOptions>(m, "CalibrationOptions")
      .def(py::init<>())
      .def_readwrite("pdam_pages_per_cycle",
                     &CalibrationOptions::pdam_pages_per_cycle)
      .def_readwrite("setup_floor_us", &CalibrationOptions::setup_floor_us)
      .def_readwrite("device_label", &CalibrationOptions::device_label)
      .def_readwrite("source_label", &CalibrationOptions::source_label)
      .def_readwrite("timestamp_override",
                     &CalibrationOptions::timestamp_override);

  py::class_<CalibrationResult>(m, "CalibrationResult")
      .def_readonly("profile", &CalibrationResult::profile)
      .def_readonly("report", &CalibrationResult::report);

  m.def(
      "calibrate_profile",
      [](const std::vector<TrialRecord>& trials, const PageGeometry& geometry,
         const CalibrationOptions& options) {
        return calibrate_profile(trials, geometry, options);
      },
      py::arg("trials"), py::arg("geometry"),
      py::arg("options") = CalibrationOptions{});

  py::class_<WorkloadSpec>(m, "WorkloadSpec")
      .def(py::init<>())
      .def_readwrite("device_label", &WorkloadSpec::device_label)
      .def_readwrite("file_path", &WorkloadSpec::file_path)
      .def_readwrite("file_size_bytes", &WorkloadSpec::file_size_bytes)
      .def_readwrite("per_worker_bytes", &WorkloadSpec::per_worker_bytes)
      .def_readwrite("ops", &WorkloadSpec::ops)
      .def_readwrite("k_grid", &WorkloadSpec::k_grid)
      .def_readwrite("r_fraction_grid", &WorkloadSpec::r_fraction_grid)
      .def_readwrite("repetitions", &WorkloadSpec::repetitions)
      .def_readwrite("page_size_bytes", &WorkloadSpec::page_size_bytes)
      .def_readwrite("direct_io", &WorkloadSpec::direct_io)
      .def_readwrite("seed", &WorkloadSpec::seed)
      .def("pages_per_worker", &WorkloadSpec::pages_per_worker)
      .def("random_accesses_for", &WorkloadSpec::random_accesses_for,
           py::arg("r_fraction"))
      .def("validate", &WorkloadSpec::validate)
      .def_static("default_r_fraction_grid",
                  &WorkloadSpec::default_r_fraction_grid);

  py::class_<Chunk>(m, "Chunk")
      .def_readonly("offset_bytes", &Chunk::offset_bytes)
      .def_readonly("length_bytes", &Chunk::length_bytes);

  py::class_<OffsetPlan>(m, "OffsetPlan")
      .def_readonly("workers", &OffsetPlan::workers)
      .def_readonly("region_bytes", &OffsetPlan::region_bytes);

  m.def("plan_offsets", &plan_offsets, py::arg("spec"), py::arg("k"),
        py::arg("r"), py::arg("repetition"));
  m.def("validate_plan", &validate_plan, py::arg("spec"), py::arg("k"),
        py::arg("r"), py::arg("plan"));

  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init<MqssdProfile, double, std::uint64_t, double>(),
           py::arg("ground_truth"), py::arg("noise_relative_sigma") = 0.0,
           py::arg("seed") = 0, py::arg("latency_floor_us") = 0.0)
      .def_readonly("ground_truth", &OracleConfig::ground_truth)
      .def_readonly("noise_relative_sigma",
                    &OracleConfig::noise_relative_sigma)
      .def_readonly("seed", &OracleConfig::seed)
      .def_readonly("latency_floor_us", &OracleConfig::latency_floor_us);

  m.def("simulate_trial", &simulate_trial, py::arg("config"), py::arg("op"),
        py::arg("k"), py::arg("r"), py::arg("per_worker_bytes"),
        py::arg("repetition") = 0);
  m.def("generate_dataset", &generate_dataset, py::arg("config"),
        py::arg("spec"));

  py::class_<LsmLayout>(m, "LsmLayout")
      .def_static("leveled", &LsmLayout::leveled, py::arg("fanout"),
                  py::arg("file_size_bytes"), py::arg("l0_file_count"),
                  py::arg("block_size_bytes"), py::arg("working_set_bytes"),
                  py::arg("entry_size_bytes"))
      .def_static("single_level", &LsmLayout::single_level,
                  py::arg("file_size_bytes"), py::arg("block_size_bytes"),
                  py::arg("working_set_bytes"), py::arg("entry_size_bytes"))
      .def_property_readonly("is_single_level", &LsmLayout::is_single_level)
      .def_property_readonly("fanout", &LsmLayout::fanout)
      .def_property_readonly("file_size_bytes", &LsmLayout::file_size_bytes)
      .def_property_readonly("l0_file_count", &LsmLayout::l0_file_count)
      .def_property_readonly("block_size_bytes", &LsmLayout::block_size_bytes)
      .def_property_readonly("working_set_bytes",
                             &LsmLayout::working_set_bytes)
      .def_property_readonly("entry_size_bytes", &LsmLayout::entry_size_bytes);

  m.def("level_count", &level_count, py::arg("layout"));
  m.def("sorted_run_count", &sorted_run_count, py::arg("layout"));
  m.def("file_rw_cost", &file_rw_cost, py::arg("files"), py::arg("layout"),
        py::arg("profile"), py::arg("k"));
  m.def("insert_cost_per_byte", &insert_cost_per_byte, py::arg("layout"),
        py::arg("profile"), py::arg("k"));
  m.def("insert_cost_per_entry", &insert_cost_per_entry, py::arg("layout"),
        py::arg("profile"), py::arg("k"));
  m.def("query_cost", &query_cost, py::arg("layout"), py::arg("profile"),
        py::arg("k"));
  m.def("scan_cost", &scan_cost, py::arg("layout"), py::arg("profile"),
        py::arg("k"), py::arg("scan_bytes"));
  m.def("sl_insert_cost", &sl_insert_cost, py::arg("layout"),
        py::arg("profile"), py::arg("k"));
  m.def("sl_query_cost", &sl_query_cost, py::arg("layout"),
        py::arg("profile"), py::arg("k"));

  py::class_<DataMovementConfig>(m, "DataMovementConfig")
      .def(py::init<>())
      .def_readwrite("n_keys", &DataMovementConfig::n_keys)
      .def_readwrite("keys_per_file", &DataMovementConfig::keys_per_file)
      .def_readwrite("l0_file_count", &DataMovementConfig::l0_file_count)
      .def_readwrite("fanouts", &DataMovementConfig::fanouts)
      .def_readwrite("seed", &DataMovementConfig::seed)
      .def_readwrite("validate", &DataMovementConfig::validate);

  py::class_<LevelTransitionStats>(m, "LevelTransitionStats")
      .def_readonly("from_level", &LevelTransitionStats::from_level)
      .def_readonly("mean_files_touched",
                    &LevelTransitionStats::mean_files_touched)
      .def_readonly("variance", &LevelTransitionStats::variance)
      .def_readonly("compactions", &LevelTransitionStats::compactions);

  py::class_<CompactionStats>(m, "CompactionStats")
      .def_readonly("fanout", &CompactionStats::fanout)
      .def_readonly("mean_files_touched",
                    &CompactionStats::mean_files_touched)
      .def_readonly("variance", &CompactionStats::variance)
      .def_readonly("compaction_count", &CompactionStats::compaction_count)
      .def_readonly("l0_mean_files_touched",
                    &CompactionStats::l0_mean_files_touched)
      .def_readonly("l0_compaction_count",
                    &CompactionStats::l0_compaction_count)
      .def_readonly("per_transition", &CompactionStats::per_transition);

  py::class_<DataMovementReport>(m, "DataMovementReport")
      .def_readonly("per_fanout", &DataMovementReport::per_fanout)
      .def_readonly("fit_slope", &DataMovementReport::fit_slope)
      .def_readonly("fit_intercept", &DataMovementReport::fit_intercept)
      .def_readonly("fit_r_squared", &DataMovementReport::fit_r_squared);

  m.def("simulate_data_movement", &simulate_data_movement, py::arg("config"));
}
