#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

enum class DiscretizationMode { radial, planar };

std::string to_string(DiscretizationMode mode);
DiscretizationMode discretization_mode_from_string(const std::string& s);

/// Diagonal value used when the self-energy of a cell is infinite.
inline constexpr double kSingularDiagonal = 1e30;

struct DiscretizationOptions {
  std::size_t resolution = 256;      // radial: shells; planar: cells across the diameter
  double truncation_radius = 0.0;    // full space only; 0 selects 8 sigma
  std::size_t angular_points = 128;  // periodic trapezoid rule (d = 2)
  Execution execution = Execution::parallel;
};

/// Finite model: nodes with prior weights, kernel matrix (with cell
/// self-energies on the diagonal) and potential vector.
struct DiscretizedModel {
  DiscretizationMode mode = DiscretizationMode::radial;
  int dim = 2;
  std::string grid_id;
  Eigen::MatrixXd nodes;         // radial: n x 1 cell mean radii; planar: n x d centers
  std::vector<double> cell_lo;   // radial shells
  std::vector<double> cell_hi;
  double cell_width = 0.0;       // planar square side
  double truncation_radius = 0.0;
  double truncated_mass = 0.0;   // prior mass outside the grid (renormalized away)
  Eigen::MatrixXd W;
  Eigen::VectorXd V;
  Eigen::VectorXd prior;         // sums to 1
  bool singular_diagonal = false;
  std::vector<std::string> warnings;

  std::size_t size() const { return static_cast<std::size_t>(prior.size()); }
};

/// Probability vector on a discretized model's nodes.
struct GridMeasure {
  std::string grid_id;
  Eigen::VectorXd weights;
  Eigen::VectorXd prior_weights;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

GridMeasure prior_measure(const DiscretizedModel& dm);
GridMeasure make_measure(const DiscretizedModel& dm, Eigen::VectorXd weights);

/// Spherical average of w(|x - y|) over |x| = r, |y| = s in R^d. Closed forms
/// for the log profile (d = 2: -c log max(r, s)) and for r^-alpha (d = 2,
/// elliptic form); otherwise a periodic trapezoid rule (d = 2) or Gauss
/// rule in cos(theta) (d >= 3).
double angular_average(const RadialProfile& w, int d, double r, double s,
                       std::size_t points = 128);

DiscretizedModel discretize(const ModelSpec& model, DiscretizationMode mode,
                            const DiscretizationOptions& options = {});

}  // namespace ensemble_lab
