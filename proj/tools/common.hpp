#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ensemble_lab/io/manifest.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab::cli {

/// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsageError = 2;

/// "min:max:steps" -> steps evenly spaced values (steps >= 2).
std::vector<double> parse_grid(const std::string& spec, const std::string& flag);

/// Model file plus its hash, recorded in the manifest.
struct LoadedModel {
  ModelSpec model;
  nlohmann::json json;
};
LoadedModel load_model_recorded(const std::string& path, io::RunManifest& manifest);

/// --seed wins over the model's "seed"; neither is a usage error.
std::uint64_t require_seed(std::optional<std::uint64_t> flag, const ModelSpec& model, io::RunManifest& manifest,
                           const std::string& name = "seed");

std::filesystem::path output_path(const std::string& dir, const std::string& name);

nlohmann::ordered_json finite_or_string(double v);

}  // namespace ensemble_lab::cli
