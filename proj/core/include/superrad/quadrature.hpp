#pragma once

#include <optional>
#include <vector>

#include "superrad/common.hpp"

namespace superrad {

struct GaussLegendreRule {
  std::vector<double> nodes;    ///< ascending, in (-1, 1)
  std::vector<double> weights;  ///< sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] via Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

/// Product quadrature over the unit sphere: Gauss-Legendre in cos(theta)
/// times the uniform rule in phi, with theta measured from `polar_axis`.
///
/// Directions are stored polar-major: index = i_polar * n_azimuth + i_phi.
class AngularGrid {
 public:
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<Vec3>& directions() const noexcept { return directions_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& phi() const noexcept { return phi_; }
  const Vec3& polar_axis() const noexcept { return polar_axis_; }
  int n_polar() const noexcept { return n_polar_; }
  int n_azimuth() const noexcept { return n_azimuth_; }
  std::optional<double> polar_break() const noexcept { return polar_break_; }

  friend bool operator==(const AngularGrid& a, const AngularGrid& b) {
    return a.directions_ == b.directions_ && a.weights_ == b.weights_;
  }

  friend AngularGrid build_angular_grid(int n_polar, int n_azimuth,
                                        const Vec3& polar_axis,
                                        std::optional<double> polar_break);

 private:
  std::vector<Vec3> directions_;
  std::vector<double> weights_;
  std::vector<double> theta_;
  std::vector<double> phi_;
  Vec3 polar_axis_ = Vec3::UnitZ();
  int n_polar_ = 0;
  int n_azimuth_ = 0;
  std::optional<double> polar_break_;
};

/// Number of polar nodes placed inside the cap when the rule is split.
int polar_cap_nodes(int n_polar);

/// n_polar >= 2 and n_azimuth >= 2. If `polar_break` (rad, in (0, pi)) is
/// given, the cos(theta) rule is composite: polar_cap_nodes(n_polar) nodes on
/// [cos(break), 1] and the rest on [-1, cos(break)]. Splitting at a cone edge
/// makes cone integrals converge spectrally instead of O(1/n).
AngularGrid build_angular_grid(int n_polar, int n_azimuth,
                               const Vec3& polar_axis = Vec3::UnitZ(),
                               std::optional<double> polar_break = std::nullopt);

}  // namespace superrad
