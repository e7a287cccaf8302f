#pragma once

#include <string>
#include <vector>

#include "ensemble_lab/curve.hpp"

namespace ensemble_lab::io {

struct PlotSeries {
  std::string label;
  SampledCurve curve;
};

/// Fixed 800x500 canvas, one polyline per series over its finite points,
/// flagged points as hollow red squares, legend in input order. Output
/// depends only on the input.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title = {});

}  // namespace ensemble_lab::io
