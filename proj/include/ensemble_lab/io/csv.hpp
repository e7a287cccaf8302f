#pragma once

#include <filesystem>
#include <string>

#include "ensemble_lab/curve.hpp"

namespace ensemble_lab::io {

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Columns <x_name>,value,stderr,flag; numbers as %.17g, infinities as
/// inf/-inf, missing values as nan.
std::string curve_to_csv(const SampledCurve& curve, const std::string& x_name = "e");
void write_curve_csv(const std::filesystem::path& path, const SampledCurve& curve,
                     const std::string& x_name = "e");

/// Reads a file written by write_curve_csv (the stderr and flag columns are
/// optional). Throws a data error for an empty or malformed file.
SampledCurve read_curve_csv(const std::filesystem::path& path);

std::string format_number(double v);

}  // namespace ensemble_lab::io
