#include "ensemble_lab/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab::io {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::configuration, "cannot write " + tmp.string());
    out << content;
    out.flush();
    require(static_cast<bool>(out), ErrorKind::configuration, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string curve_to_csv(const SampledCurve& curve, const std::string& x_name) {
  curve.validate();
  std::string s = x_name + ",value,stderr,flag\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    s += format_number(curve.x[i]) + ',' + format_number(curve.y[i]) + ',' +
         (curve.has_errors() ? format_number(curve.std_error[i]) : std::string("nan")) + ',' +
         (curve.is_flagged(i) ? '1' : '0') + '\n';
  }
  return s;
}

void write_curve_csv(const std::filesystem::path& path, const SampledCurve& curve, const std::string& x_name) {
  write_file_atomic(path, curve_to_csv(curve, x_name));
}

namespace {

double parse_number(const std::string& field, const std::string& where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  require(end != begin && *end == '\0', ErrorKind::data, where + ": not a number: '" + field + "'");
  return v;
}

}  // namespace

SampledCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::configuration, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::data, path.string() + ": empty CSV");
  std::size_t columns = 1;
  for (char c : line) columns += c == ',' ? 1 : 0;
  require(columns >= 2, ErrorKind::data, path.string() + ": need at least two columns");
  SampledCurve curve;
  bool any_flag = false, any_err = false;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    const std::string where = path.string() + ":" + std::to_string(row);
    require(f.size() >= 2, ErrorKind::data, where + ": expected at least 2 fields");
    curve.x.push_back(parse_number(f[0], where));
    curve.y.push_back(parse_number(f[1], where));
    const double se = f.size() >= 3 ? parse_number(f[2], where) : kNaN;
    curve.std_error.push_back(se);
    any_err = any_err || !std::isnan(se);
    const bool flag = f.size() >= 4 && parse_number(f[3], where) != 0.0;
    curve.flagged.push_back(flag ? 1 : 0);
    any_flag = any_flag || flag;
  }
  require(!curve.x.empty(), ErrorKind::data, path.string() + ": empty CSV");
  if (!any_err) curve.std_error.clear();
  if (!any_flag) curve.flagged.clear();
  curve.validate();
  return curve;
}

}  // namespace ensemble_lab::io
