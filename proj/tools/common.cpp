#include "common.hpp"

#include <cmath>
#include <fstream>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/io/csv.hpp"
#include "ensemble_lab/model/model_json.hpp"

namespace ensemble_lab::cli {

std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
  require(b != std::string::npos, ErrorKind::usage, flag + " expects min:max:steps, got '" + spec + "'");
  double lo = 0, hi = 0;
  long steps = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(spec.substr(0, a), &used);
    hi = std::stod(spec.substr(a + 1, b - a - 1), &used);
    steps = std::stol(spec.substr(b + 1), &used);
  } catch (const std::exception&) {
    fail(ErrorKind::usage, flag + " expects min:max:steps, got '" + spec + "'");
  }
  require(steps >= 2 && hi > lo, ErrorKind::usage, flag + ": need max > min and steps >= 2");
  std::vector<double> g;
  for (long k = 0; k < steps; ++k) g.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1));
  g.back() = hi;
  return g;
}

LoadedModel load_model_recorded(const std::string& path, io::RunManifest& manifest) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::configuration, "cannot open model file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::configuration, "malformed JSON in " + path + ": " + e.what());
  }
  LoadedModel out{model_from_json(j), j};
  manifest.set_model_hash(model_hash(j));
  return out;
}

std::uint64_t require_seed(std::optional<std::uint64_t> flag, const ModelSpec& model, io::RunManifest& manifest,
                           const std::string& name) {
  std::optional<std::uint64_t> s = flag ? flag : model.seed;
  require(s.has_value(), ErrorKind::usage, "a seed is required: pass --seed or set \"seed\" in the model");
  manifest.add_seed(name, *s);
  return *s;
}

std::filesystem::path output_path(const std::string& dir, const std::string& name) {
  return std::filesystem::path(dir) / name;
}

nlohmann::ordered_json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return io::format_number(v);
}

}  // namespace ensemble_lab::cli
