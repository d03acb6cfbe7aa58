#pragma once

#include "hncloak/designer.hpp"
#include "hncloak/fullsolve.hpp"
#include "json.hpp"

namespace hncloak {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

json to_json(const FourierShape& shape);
FourierShape shape_from_json(const json& j);

json to_json(const PerturbedCurve& curve);
PerturbedCurve curve_from_json(const json& j);

json to_json(const CloakConfig& config);
CloakConfig config_from_json(const json& j);

json to_json(const ScatteringReport& report);
json to_json(const DesignResult& result);
json to_json(const VerifyReport& report);
json to_json(const QResult& result);

}  // namespace hncloak
