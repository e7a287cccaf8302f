#include "ensemble_lab/report.hpp"

#include <algorithm>
#include <cmath>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

void ValidationReport::add_pass(std::string name, double margin, std::string detail) {
  entries_.push_back({std::move(name), true, std::nullopt, margin, std::move(detail)});
}

void ValidationReport::add_fail(std::string name, double margin, Witness witness,
                                std::string detail) {
  entries_.push_back({std::move(name), false, std::move(witness), margin, std::move(detail)});
}

void ValidationReport::merge(const ValidationReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

bool ValidationReport::passed() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return e.passed; });
}

std::size_t ValidationReport::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const CheckEntry& e) { return !e.passed; }));
}

const CheckEntry* ValidationReport::first_failure() const {
  for (const auto& e : entries_) {
    if (!e.passed) return &e;
  }
  return nullptr;
}

namespace {

nlohmann::ordered_json number(double v) {
  // JSON has no inf/nan; keep them readable.
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::ordered_json ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["subject"] = subject_;
  j["passed"] = passed();
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json item;
    item["name"] = e.name;
    item["passed"] = e.passed;
    item["margin"] = number(e.margin);
    item["detail"] = e.detail;
    if (e.witness) {
      nlohmann::ordered_json w;
      w["point"] = nlohmann::ordered_json::array();
      for (double p : e.witness->point) w["point"].push_back(number(p));
      if (e.witness->index) {
        w["index"] = *e.witness->index;
      } else {
        w["index"] = nullptr;
      }
      w["description"] = e.witness->description;
      item["witness"] = std::move(w);
    } else {
      item["witness"] = nullptr;
    }
    j["entries"].push_back(std::move(item));
  }
  return j;
}

}  // namespace ensemble_lab
