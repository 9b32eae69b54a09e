#pragma once

#include <json.hpp>

#include "detdepth/spec.hpp"

namespace detdepth::internal {

ExplicitSpec SpecFromJsonValue(const nlohmann::json& doc);
nlohmann::json SpecToJsonValue(const ExplicitSpec& spec);

}  // namespace detdepth::internal
