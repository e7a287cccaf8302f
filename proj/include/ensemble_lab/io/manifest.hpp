#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace ensemble_lab::io {

/// Record of one CLI run. Every file written through write() is listed.
class RunManifest {
 public:
  RunManifest(std::string command, std::filesystem::path path);

  void set_model_hash(std::string hash) { model_hash_ = std::move(hash); }
  void add_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }
  void set_budget(const std::string& name, nlohmann::ordered_json value) { budgets_[name] = std::move(value); }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }
  void set_result(const std::string& name, nlohmann::ordered_json value) { results_[name] = std::move(value); }

  /// Atomic write of `content` to `path`, registered as an output.
  void write(const std::filesystem::path& path, const std::string& content);

  const std::vector<std::string>& outputs() const { return outputs_; }

  nlohmann::ordered_json to_json(int exit_code, const std::string& status) const;

  /// Writes the manifest itself (atomically).
  void finish(int exit_code, const std::string& status);

 private:
  std::string command_;
  std::filesystem::path path_;
  std::string model_hash_;
  std::map<std::string, std::uint64_t> seeds_;
  nlohmann::ordered_json budgets_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json results_ = nlohmann::ordered_json::object();
  std::vector<std::string> warnings_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ensemble_lab::io
