#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ensemble_lab/model/profile.hpp"

namespace ensemble_lab {

enum class RegularizationScheme { shift, cap, mollify };

std::string to_string(RegularizationScheme scheme);
RegularizationScheme regularization_from_string(const std::string& name);

/// Record of how a kernel was obtained from a singular base.
struct RegularizationInfo {
  std::string base_label;
  RegularizationScheme scheme;
  double delta;
};

/// Symmetric pair interaction W(x, y) with values in (-inf, +inf].
class PairKernel {
 public:
  using PointFunction = std::function<double(std::span<const double>)>;

  struct Radial {
    RadialProfile profile;
  };
  /// W(x, y) = -psi(x - y); psi must be even for W to be symmetric.
  struct TranslationInvariant {
    PointFunction psi;
    std::string label;
    int dim;
  };
  /// Precomputed values on a node set; evaluation only at the nodes.
  struct Table {
    Eigen::MatrixXd nodes;  // n x d
    Eigen::MatrixXd values; // n x n
  };

  static PairKernel radial(RadialProfile profile);
  static PairKernel translation_invariant(PointFunction psi, std::string label, int dim);
  static PairKernel table(Eigen::MatrixXd nodes, Eigen::MatrixXd values);
  static PairKernel zero();

  double operator()(std::span<const double> x, std::span<const double> y) const;

  /// Non-null when W(x, y) = w(|x - y|).
  const RadialProfile* profile() const;
  bool is_zero() const;
  bool finite_on_diagonal() const;
  std::string label() const;

  const std::optional<RegularizationInfo>& regularization() const { return regularization_; }
  void set_regularization(RegularizationInfo info) { regularization_ = std::move(info); }

  const std::variant<Radial, TranslationInvariant, Table>& variant() const { return data_; }

 private:
  explicit PairKernel(std::variant<Radial, TranslationInvariant, Table> data);

  std::variant<Radial, TranslationInvariant, Table> data_;
  std::optional<RegularizationInfo> regularization_;
  bool zero_ = false;
};

/// Number of Gauss points per direction in the mollifier's product rule.
inline constexpr int kMollifierOrder = 64;

/// Finite-on-the-diagonal regularization of a singular kernel.
///
/// shift:   w(r + delta)
/// cap:     w(max(r, delta))
/// mollify: w convolved (in R^dim) with the bump exp(-1/(1 - |u/delta|^2)),
///          integrated by a fixed 64-point product Gauss rule on the bump.
///
/// shift and cap need a radial base; mollify accepts radial or
/// translation-invariant bases in dimension 1 or 2.
PairKernel regularize(const PairKernel& base, RegularizationScheme scheme, double delta,
                      int dim = 2);

}  // namespace ensemble_lab
