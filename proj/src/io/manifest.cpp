#include "ensemble_lab/io/manifest.hpp"

#include "ensemble_lab/io/csv.hpp"

#ifndef ENSEMBLE_LAB_VERSION
#define ENSEMBLE_LAB_VERSION "unknown"
#endif

namespace ensemble_lab::io {

RunManifest::RunManifest(std::string command, std::filesystem::path path)
    : command_(std::move(command)), path_(std::move(path)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::write(const std::filesystem::path& path, const std::string& content) {
  write_file_atomic(path, content);
  outputs_.push_back(path.string());
}

nlohmann::ordered_json RunManifest::to_json(int exit_code, const std::string& status) const {
  nlohmann::ordered_json j;
  j["tool"] = "ensemble_lab";
  j["version"] = ENSEMBLE_LAB_VERSION;
  j["command"] = command_;
  j["model_hash"] = model_hash_;
  j["seeds"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : seeds_) j["seeds"][k] = v;
  j["budgets"] = budgets_;
  j["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  j["outputs"] = outputs_;
  j["warnings"] = warnings_;
  j["results"] = results_;
  j["exit_code"] = exit_code;
  j["status"] = status;
  return j;
}

void RunManifest::finish(int exit_code, const std::string& status) {
  write_file_atomic(path_, to_json(exit_code, status).dump(2) + "\n");
}

}  // namespace ensemble_lab::io
