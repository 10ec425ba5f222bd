#pragma once

#include <string>

#include <json.hpp>

#include "ruin2d/model.hpp"

namespace ruin2d {

/// {"lambda": .., "claim": {"type": "exponential", "mu": ..}, "c": [c1, c2], "delta": [d1, d2]}
///
/// Phase-type claims use {"type": "phasetype", "beta": [..], "B": [[..], ..]},
/// empirical claims {"type": "empirical", "sizes": [..]}. Throws InvalidModel
/// on malformed input; the assumptions themselves are checked by validate().
RiskModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const RiskModel& model);

RiskModel load_model(const std::string& path);

}  // namespace ruin2d
