#pragma once

#include <limits>
#include <memory>

#include "superrad/common.hpp"
#include "superrad/dynamics.hpp"
#include "superrad/geometry.hpp"
#include "superrad/quadrature.hpp"

namespace superrad {

/// Modes with eigenvalue below this are treated as non-decaying: they never
/// emit and stay in the excited-state survival.
inline constexpr double kDarkModeThreshold = 1e-12;

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Far-field projections A_m(n_i) = sum_j exp(i(k0 - k0 n_i).r_j) V_jm of every
/// eigenmode onto every grid direction (rows: directions, columns: modes).
///
/// The emitted spectral amplitude in direction n at detuning D is
/// E(n, D) ~ sum_m A_m(n) c_m / (gamma1 lambda_m - i D), so together with the
/// spectrum this is everything needed for photon observables.
class ModeFunction {
 public:
  ModeFunction(ComplexMatrix projections, RealVector eigenvalues,
               ComplexVector mode_coefficients,
               std::shared_ptr<const AngularGrid> grid, double gamma1)
      : projections_(std::move(projections)),
        eigenvalues_(std::move(eigenvalues)),
        coefficients_(std::move(mode_coefficients)),
        grid_(std::move(grid)),
        gamma1_(gamma1) {}

  const ComplexMatrix& projections() const noexcept { return projections_; }
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
  const ComplexVector& mode_coefficients() const noexcept { return coefficients_; }
  const AngularGrid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const AngularGrid>& grid_ptr() const noexcept { return grid_; }
  double gamma1() const noexcept { return gamma1_; }
  std::size_t atom_count() const noexcept {
    return static_cast<std::size_t>(projections_.cols());
  }

  /// Number of leading modes with eigenvalue >= kDarkModeThreshold (the
  /// eigenvalues are sorted descending, so they form a prefix).
  Eigen::Index emitting_modes() const;

 private:
  ComplexMatrix projections_;
  RealVector eigenvalues_;
  ComplexVector coefficients_;
  std::shared_ptr<const AngularGrid> grid_;
  double gamma1_;
};

ModeFunction mode_projection(const SampleGeometry& sample, const EigenSystem& eigen,
                             std::shared_ptr<const AngularGrid> grid);

/// Cumulative emitted-photon probability per steradian up to `time_us`
/// (kInfiniteTime for the complete emission).
struct EmissionProfile {
  std::vector<double> density;
  double time_us = 0.0;
  double total = 0.0;  ///< sum_i w_i density_i
  double max_imag_residue = 0.0;
  std::shared_ptr<const AngularGrid> grid;
};

/// density(n, t) = (1/2pi) sum_{mm'} A_m A*_m' c_m c*_m'
///                 (1 - exp(-gamma1 (l_m + l_m') t)) / (l_m + l_m').
/// The normalisation makes total = 1 - sum_m |c_m|^2 exp(-2 gamma1 l_m t).
EmissionProfile angular_density(const ModeFunction& modes, double time_us);

enum class ConeSense {
  forward,  ///< angle(n, axis) <= half_angle
  axial,    ///< within half_angle of either +axis or -axis
};

double cone_fraction(const EmissionProfile& profile, const Vec3& axis,
                     double half_angle, ConeSense sense = ConeSense::forward);

/// Angular-spectral inner product <E_a, E_b> of the complete (t -> inf)
/// emitted fields, with the detuning integral done in closed form:
/// sum_i w_i sum_{mm'} conj(A^a_m c^a_m) A^b_m' c^b_m' 2pi / (gamma1 (l^a_m + l^b_m')).
Complex field_inner_product(const ModeFunction& a, const ModeFunction& b);

/// |<E_a,E_b>|^2 / (<E_a,E_a><E_b,E_b>).
double mode_overlap(const ModeFunction& a, const ModeFunction& b);

/// Same, with <E_a,E_a> supplied by the caller (sweeps reuse it).
double mode_overlap(const ModeFunction& a, const ModeFunction& b, double norm_a);

struct ProjectionDiagnostics {
  double unitarity_error = 0.0;      ///< max_n |sum_m |A_m(n)|^2 - N| / N
  double orthogonality_error = 0.0;  ///< top modes, relative to lambda
};

/// Checks sum_m |A_m(n)|^2 = N on every direction and
/// (1/4pi) sum_i w_i A_m A*_m' = lambda_m delta_mm' for the `top` largest modes.
ProjectionDiagnostics check_projection(const ModeFunction& modes, int top = 20);

}  // namespace superrad
