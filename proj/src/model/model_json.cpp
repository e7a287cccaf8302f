#include "ensemble_lab/model/model_json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  fail(ErrorKind::configuration, "model schema violation at '" + pointer + "': " + what);
}

const json& field(const json& j, const char* key, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(pointer + "/" + key, "missing required field");
  return *it;
}

double number(const json& j, const char* key, const std::string& pointer) {
  const json& v = field(j, key, pointer);
  if (!v.is_number()) schema_error(pointer + "/" + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& pointer) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key, pointer);
}

std::string text(const json& j, const char* key, const std::string& pointer) {
  const json& v = field(j, key, pointer);
  if (!v.is_string()) schema_error(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& params_of(const json& j) {
  static const json empty = json::object();
  auto it = j.find("params");
  return it == j.end() ? empty : *it;
}

template <class F>
auto guarded(const std::string& pointer, F f) {
  try {
    return f();
  } catch (const LabError& e) {
    if (e.kind() == ErrorKind::configuration &&
        std::string(e.what()).find("schema violation") != std::string::npos) {
      throw;
    }
    schema_error(pointer, e.what());
  }
}

}  // namespace

RadialProfile profile_from_json(const json& j, const std::string& pointer) {
  const std::string family = text(j, "family", pointer);
  const json& p = params_of(j);
  const std::string pp = pointer + "/params";
  return guarded(pointer, [&]() -> RadialProfile {
    if (family == "log") return profiles::log_scaled(number_or(p, "c", 1.0, pp));
    if (family == "log_2pi") return profiles::log_repulsive_2pi();
    if (family == "power") return profiles::power(number(p, "a", pp));
    if (family == "inverse_power") return profiles::inverse_power(number(p, "alpha", pp));
    if (family == "exponential") return profiles::exponential(number(p, "a", pp), number(p, "alpha", pp));
    if (family == "born_mayer") return profiles::exponential(1.0, number(p, "alpha", pp));
    if (family == "loglog") return profiles::loglog();
    if (family == "monomial") return profiles::monomial(number(p, "c", pp), number(p, "p", pp));
    if (family == "zero") return profiles::zero();
    schema_error(pointer + "/family", "unknown profile family '" + family + "'");
  });
}

ModelSpec model_from_json(const json& j) {
  if (!j.is_object()) schema_error("", "model must be a JSON object");
  ModelSpec m;
  if (j.contains("name")) m.name = text(j, "name", "");

  const json& dom = field(j, "domain", "");
  const std::string type = text(dom, "type", "/domain");
  const json& dj = field(dom, "d", "/domain");
  if (!dj.is_number_integer() || dj.get<int>() < 1) schema_error("/domain/d", "expected an integer >= 1");
  const int d = dj.get<int>();
  if (type == "ball") {
    const double R = number(dom, "R", "/domain");
    if (!(R > 0.0)) schema_error("/domain/R", "radius must be positive");
    m.domain = Domain::ball(d, R);
  } else if (type == "full_space") {
    m.domain = Domain::full_space(d);
  } else {
    schema_error("/domain/type", "expected 'ball' or 'full_space'");
  }

  if (j.contains("kernel")) {
    const json& kj = j["kernel"];
    m.W = PairKernel::radial(profile_from_json(kj, "/kernel"));
    if (kj.contains("regularization")) {
      const json& rj = kj["regularization"];
      const std::string scheme = text(rj, "scheme", "/kernel/regularization");
      const double delta = number(rj, "delta", "/kernel/regularization");
      if (!(delta > 0.0)) schema_error("/kernel/regularization/delta", "delta must be positive");
      m.W = guarded("/kernel/regularization", [&] {
        return regularize(m.W, regularization_from_string(scheme), delta, d);
      });
    }
  }

  if (j.contains("potential")) {
    const json& vj = j["potential"];
    const std::string family = text(vj, "family", "/potential");
    if (family != "zero") m.V = ExteriorPotential::radial(profile_from_json(vj, "/potential"));
  }

  const json& pj = field(j, "prior", "");
  const std::string pf = text(pj, "family", "/prior");
  const json& pp = params_of(pj);
  if (pf == "gaussian") {
    if (m.domain.is_ball()) schema_error("/prior/family", "gaussian prior requires a full_space domain");
    const double sigma = number_or(pp, "sigma", 1.0, "/prior/params");
    if (!(sigma > 0.0)) schema_error("/prior/params/sigma", "sigma must be positive");
    m.prior = PriorMeasure::gaussian(d, sigma);
  } else if (pf == "uniform_ball" || pf == "uniform") {
    if (!m.domain.is_ball()) schema_error("/prior/family", "uniform prior requires a ball domain");
    m.prior = PriorMeasure::uniform_ball(d, m.domain.radius);
  } else if (pf == "radial_density") {
    const RadialProfile psi0 = profile_from_json(field(pp, "psi0", "/prior/params"), "/prior/params/psi0");
    const double env = number_or(pp, "envelope_sigma", 1.0, "/prior/params");
    m.prior = guarded("/prior", [&] { return PriorMeasure::radial_density(m.domain, psi0, env); });
  } else {
    schema_error("/prior/family", "unknown prior family '" + pf + "'");
  }

  if (j.contains("N")) {
    const json& n = j["N"];
    if (!n.is_number_integer() || n.get<long long>() < 1) schema_error("/N", "expected an integer >= 1");
    m.N = n.get<int>();
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      schema_error("/seed", "expected a non-negative integer");
    }
    m.seed = s.get<std::uint64_t>();
  }
  if (j.contains("flags")) {
    const json& f = j["flags"];
    if (!f.is_object()) schema_error("/flags", "expected an object of booleans");
    for (auto it = f.begin(); it != f.end(); ++it) {
      if (!it->is_boolean()) schema_error("/flags/" + it.key(), "expected a boolean");
      m.flags[it.key()] = it->get<bool>();
    }
  }
  guarded("", [&] {
    m.validate();
    return 0;
  });
  return m;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::configuration, "cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorKind::configuration, "malformed JSON in '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

std::string model_hash(const json& j) {
  const std::string canonical = j.dump();  // nlohmann::json keeps keys sorted
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ensemble_lab
