#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ensemble_lab/io/manifest.hpp"

namespace ensemble_lab::cli {

struct ValidateArgs {
  std::string model;
  std::vector<std::string> checks{"homogeneous", "psh", "weak_pd"};
  std::size_t points = 64;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

struct MicroArgs {
  std::string model;
  std::optional<int> N;
  std::string e_grid;
  std::size_t samples = 200000;
  std::optional<std::uint64_t> seed;
  std::string direction = "upper";
  std::string estimator = "direct";
  std::string out;
  std::size_t wl_replicas = 8;
  std::size_t wl_bins = 48;
  double wl_log_f_final = 2e-6;
  bool check_concavity = false;
  std::string out_dir = ".";
};

struct MacroArgs {
  std::string model;
  std::string mode = "radial";
  std::size_t resolution = 256;
  double truncation = 0.0;
  std::string beta_grid = "-3:3:61";
  std::string e_grid;
  double damping = 1.0;
  double tol = 1e-10;
  std::size_t max_iter = 20000;
  std::string start = "warm";
  std::string out_prefix;
  std::string out_dir = ".";
};

struct DualityArgs {
  std::string s_curve;
  std::string f_curve;
  std::size_t window = 6;
  double tol_equiv = 1e-3;
  std::string out_prefix;
  std::string out_dir = ".";
};

struct CriticalArgs {
  std::string model;
  std::optional<std::uint64_t> seed;
  int N = 8;
  std::size_t resolution = 512;
  double truncation = 0.0;
  std::size_t window = 6;
  double rel_tol = 0.1;
  std::size_t samples = 200000;
  std::size_t wl_replicas = 8;
  double wl_log_f_final = 2e-6;
  bool skip_micro = false;
  bool skip_partition = false;
  std::string out_dir = ".";
};

struct DemoArgs {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

struct PlotArgs {
  std::vector<std::string> csv;
  std::string out;
  std::string title;
  std::string out_dir = ".";
};

int run_validate(const ValidateArgs& a, io::RunManifest& m);
int run_micro(const MicroArgs& a, io::RunManifest& m);
int run_macro(const MacroArgs& a, io::RunManifest& m);
int run_duality(const DualityArgs& a, io::RunManifest& m);
int run_critical(const CriticalArgs& a, io::RunManifest& m);
int run_demo(const DemoArgs& a, io::RunManifest& m);
int run_plot(const PlotArgs& a, io::RunManifest& m);

}  // namespace ensemble_lab::cli
