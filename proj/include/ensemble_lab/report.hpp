#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ensemble_lab {

/// Where a check was violated: a point, a grid index, or both.
struct Witness {
  std::vector<double> point;
  std::optional<std::size_t> index;
  std::string description;
};

struct CheckEntry {
  std::string name;
  bool passed = true;
  std::optional<Witness> witness;  // always present when !passed
  double margin = 0.0;             // signed slack; negative means violated
  std::string detail;
};

class ValidationReport {
 public:
  ValidationReport() = default;
  explicit ValidationReport(std::string subject) : subject_(std::move(subject)) {}

  void add_pass(std::string name, double margin, std::string detail = {});
  void add_fail(std::string name, double margin, Witness witness, std::string detail = {});
  void merge(const ValidationReport& other);

  bool passed() const;
  const std::vector<CheckEntry>& entries() const { return entries_; }
  const std::string& subject() const { return subject_; }
  std::size_t failure_count() const;

  /// First failing entry, if any.
  const CheckEntry* first_failure() const;

  /// Stable field order: subject, passed, entries[name, passed, margin, detail, witness].
  nlohmann::ordered_json to_json() const;

 private:
  std::string subject_;
  std::vector<CheckEntry> entries_;
};

}  // namespace ensemble_lab
