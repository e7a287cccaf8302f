#include <cstdio>
#include <filesystem>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/io/csv.hpp"
#include "ensemble_lab/io/svg.hpp"

namespace ensemble_lab::cli {

int run_plot(const PlotArgs& a, io::RunManifest& m) {
  std::vector<io::PlotSeries> series;
  for (const auto& f : a.csv) series.push_back({std::filesystem::path(f).stem().string(), io::read_curve_csv(f)});
  const std::string out = a.out.empty() ? output_path(a.out_dir, "plot.svg").string() : a.out;
  m.write(out, io::render_svg(series, a.title));
  std::printf("%zu curve(s) -> %s\n", series.size(), out.c_str());
  return kPass;
}

}  // namespace ensemble_lab::cli
