#include "mqssd/profile_json.hpp"

#include <fstream>

#include "mqssd/errors.hpp"
#include "json_detail.hpp"

namespace mqssd {

namespace detail {

nlohmann::json geometry_to_json(const PageGeometry& geometry) {
  return {{"B", geometry.page_size_bytes()},
          {"N", geometry.working_set_bytes()},
          {"M", geometry.memory_bytes()}};
}

PageGeometry geometry_from_json(const nlohmann::json& j) {
  return PageGeometry(j.at("B").get<std::uint64_t>(),
                      j.at("N").get<std::uint64_t>(),
                      j.at("M").get<std::uint64_t>());
}

nlohmann::json rational_to_json(const RationalFn& fn) {
  nlohmann::json arr = nlohmann::json::array();
  for (double c : fn.numerator()) arr.push_back(c);
  for (double d : fn.denominator()) arr.push_back(d);
  return arr;
}

RationalFn rational_from_json(const nlohmann::json& j, double k_max) {
  if (!j.is_array() || (j.size() != 6 && j.size() != 8)) {
    throw SchemaError(
        "rational coefficient array must have 6 or 8 entries "
        "(numerator then denominator, ascending degree)");
  }
  const std::size_t half = j.size() / 2;
  std::vector<double> num, den;
  for (std::size_t i = 0; i < half; ++i) num.push_back(j[i].get<double>());
  for (std::size_t i = half; i < j.size(); ++i) {
    den.push_back(j[i].get<double>());
  }
  return RationalFn(std::move(num), std::move(den), k_max);
}

nlohmann::json mqssd_to_json(const MqssdProfile& profile) {
  return {{"s", rational_to_json(profile.write_setup())},
          {"beta", rational_to_json(profile.write_transfer())},
          {"t", rational_to_json(profile.read_setup())},
          {"alpha", rational_to_json(profile.read_transfer())},
          {"k_max", profile.k_max()}};
}

MqssdProfile mqssd_from_json(const nlohmann::json& j,
                             const PageGeometry& geometry) {
  const double k_max = j.at("k_max").get<double>();
  return MqssdProfile(rational_from_json(j.at("s"), k_max),
                      rational_from_json(j.at("beta"), k_max),
                      rational_from_json(j.at("t"), k_max),
                      rational_from_json(j.at("alpha"), k_max), geometry,
                      k_max);
}

}  // namespace detail

std::string device_profile_to_json(const DeviceProfile& profile) {
  nlohmann::json j{
      {"device_label", profile.device_label},
      {"geometry", detail::geometry_to_json(profile.mqssd.geometry())},
      {"dam",
       {{"read", profile.dam.page_cost_us.read},
        {"write", profile.dam.page_cost_us.write}}},
      {"pdam",
       {{"read", profile.pdam.cycle_cost_us.read},
        {"write", profile.pdam.cycle_cost_us.write},
        {"P", profile.pdam.pages_per_cycle}}},
      {"affine",
       {{"read",
         {{"s", profile.affine.read.setup_us},
          {"beta", profile.affine.read.transfer_us}}},
        {"write",
         {{"s", profile.affine.write.setup_us},
          {"beta", profile.affine.write.transfer_us}}}}},
      {"mqssd", detail::mqssd_to_json(profile.mqssd)},
      {"provenance",
       {{"source", profile.provenance.source},
        {"calibrated_at", profile.provenance.calibrated_at}}},
  };
  return j.dump(2) + "\n";
}

DeviceProfile device_profile_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("profile JSON parse error: ") + e.what());
  }
  try {
    PageGeometry geometry = detail::geometry_from_json(j.at("geometry"));
    DamParams dam(j.at("dam").at("read").get<double>(),
                  j.at("dam").at("write").get<double>());
    PdamParams pdam(j.at("pdam").at("read").get<double>(),
                    j.at("pdam").at("write").get<double>(),
                    j.at("pdam").at("P").get<std::uint32_t>());
    const auto& affine_j = j.at("affine");
    AffineParams affine({affine_j.at("read").at("s").get<double>(),
                         affine_j.at("read").at("beta").get<double>()},
                        {affine_j.at("write").at("s").get<double>(),
                         affine_j.at("write").at("beta").get<double>()});
    MqssdProfile mqssd = detail::mqssd_from_json(j.at("mqssd"), geometry);
    Provenance provenance;
    if (j.contains("provenance")) {
      provenance.source = j["provenance"].value("source", "");
      provenance.calibrated_at = j["provenance"].value("calibrated_at", "");
    }
    return DeviceProfile{j.at("device_label").get<std::string>(),
                         dam,
                         pdam,
                         affine,
                         std::move(mqssd),
                         std::move(provenance)};
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("profile JSON schema error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("profile JSON invalid values: ") + e.what());
  }
}

DeviceProfile load_device_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open profile: " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return device_profile_from_json(text);
}

void save_device_profile(const std::filesystem::path& path,
                         const DeviceProfile& profile) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write profile: " + path.string());
  }
  out << device_profile_to_json(profile);
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

std::string fit_report_to_json(const FitReport& report) {
  nlohmann::json per_k = nlohmann::json::array();
  for (const PerKCosts& costs : report.per_k) {
    per_k.push_back({{"op", to_string(costs.op)},
                     {"k", costs.k},
                     {"setup_us", costs.setup_us},
                     {"transfer_us", costs.transfer_us},
                     {"r_squared", costs.r_squared},
                     {"sample_count", costs.sample_count},
                     {"setup_clamped", costs.setup_clamped},
                     {"zero_variance", costs.zero_variance}});
  }
  nlohmann::json residuals = nlohmann::json::object();
  nlohmann::json fits = nlohmann::json::array();
  for (const FitReport::FnFit& fit : report.fits) {
    residuals[fit.name] = fit.relative_residuals;
    fits.push_back({{"name", fit.name},
                    {"converged", fit.converged},
                    {"iterations", fit.iterations}});
  }
  nlohmann::json j{{"per_k", per_k},
                   {"residuals", residuals},
                   {"converged", report.converged()},
                   {"iterations", report.total_iterations()},
                   {"fits", fits}};
  return j.dump(2) + "\n";
}

void save_fit_report(const std::filesystem::path& path,
                     const FitReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write fit report: " + path.string());
  }
  out << fit_report_to_json(report);
}

}  // namespace mqssd
