#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mqssd/calibration.hpp"
#include "mqssd/models.hpp"

namespace mqssd {

// DeviceProfile JSON schema:
// {
//   "device_label": "...",
//   "geometry": {"B": 4096, "N": ..., "M": ...},
//   "dam":    {"read": <page_cost_us>, "write": ...},
//   "pdam":   {"read": <cycle_cost_us>, "write": ..., "P": ...},
//   "affine": {"read": {"s": ..., "beta": ...}, "write": {...}},
//   "mqssd":  {"s": [c0..cp, d0..dq], "beta": [...], "t": [...],
//              "alpha": [...], "k_max": ...},
//   "provenance": {"source": "...", "calibrated_at": "..."}
// }
// Coefficient arrays are numerator then denominator, each ascending degree;
// the split is recovered from the length (6 -> (2,2), 8 -> (3,3)).
std::string device_profile_to_json(const DeviceProfile& profile);
DeviceProfile device_profile_from_json(std::string_view text);
DeviceProfile load_device_profile(const std::filesystem::path& path);
void save_device_profile(const std::filesystem::path& path,
                         const DeviceProfile& profile);

// FitReport JSON: {"per_k": [...], "residuals": {"s": [...], ...},
// "converged": ..., "iterations": ..., "fits": [...]}
std::string fit_report_to_json(const FitReport& report);
void save_fit_report(const std::filesystem::path& path,
                     const FitReport& report);

}  // namespace mqssd
