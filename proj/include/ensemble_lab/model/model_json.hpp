#pragma once

#include <string>

#include <json.hpp>

#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

/// Builds a model from its JSON description:
///
///   {"name": "...", "domain": {"type": "ball"|"full_space", "d": 2, "R": 1},
///    "kernel": {"family": "log", "params": {...},
///               "regularization": {"scheme": "shift", "delta": 0.1}},
///    "potential": {"family": "monomial", "params": {"c": 1, "p": 2}},
///    "prior": {"family": "gaussian", "params": {"sigma": 1}},
///    "N": 4, "seed": 7, "flags": {"energy_approximation_property": true}}
///
/// Schema violations throw LabError(configuration) naming the JSON pointer of
/// the offending field.
ModelSpec model_from_json(const nlohmann::json& j);
ModelSpec load_model(const std::string& path);

/// Radial profile from {"family": ..., "params": {...}}.
RadialProfile profile_from_json(const nlohmann::json& j, const std::string& pointer);

/// FNV-1a hash of the canonical (sorted-key) serialization, as 16 hex digits.
std::string model_hash(const nlohmann::json& j);

}  // namespace ensemble_lab
