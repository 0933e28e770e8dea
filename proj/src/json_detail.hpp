#pragma once

// Internal JSON converters shared by the profile and oracle serializers.

#include <json.hpp>

#include "mqssd/models.hpp"

namespace mqssd::detail {

nlohmann::json geometry_to_json(const PageGeometry& geometry);
PageGeometry geometry_from_json(const nlohmann::json& j);

// Flat array: numerator then denominator coefficients, ascending degree.
// Length 6 -> degrees (2,2); length 8 -> (3,3).
nlohmann::json rational_to_json(const RationalFn& fn);
RationalFn rational_from_json(const nlohmann::json& j, double k_max);

nlohmann::json mqssd_to_json(const MqssdProfile& profile);
MqssdProfile mqssd_from_json(const nlohmann::json& j,
                             const PageGeometry& geometry);

}  // namespace mqssd::detail
