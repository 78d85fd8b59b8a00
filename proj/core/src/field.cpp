#include "superrad/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superrad {

namespace {

constexpr Eigen::Index kDirectionBlock = 256;

// K_{mm'} = (1 - exp(-gamma1 (a_m + b_m') t)) / (a_m + b_m'), or 1/(a_m + b_m')
// for infinite t.
RealMatrix time_kernel(const RealVector& a, const RealVector& b, double gamma1,
                       double time_us) {
  RealMatrix k(a.size(), b.size());
  const bool infinite = std::isinf(time_us);
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double s = a(i) + b(j);
      k(i, j) = infinite ? 1.0 / s : -std::expm1(-gamma1 * s * time_us) / s;
    }
  }
  return k;
}

// Rows scaled by the mode coefficients: a_im = A_im c_m over emitting modes.
ComplexMatrix weighted_projections(const ModeFunction& modes) {
  const Eigen::Index m = modes.emitting_modes();
  return modes.projections().leftCols(m) *
         modes.mode_coefficients().head(m).asDiagonal();
}

}  // namespace

Eigen::Index ModeFunction::emitting_modes() const {
  Eigen::Index m = 0;
  while (m < eigenvalues_.size() && eigenvalues_(m) >= kDarkModeThreshold) ++m;
  return m;
}

ModeFunction mode_projection(const SampleGeometry& sample, const EigenSystem& eigen,
                             std::shared_ptr<const AngularGrid> grid) {
  if (!grid) throw std::invalid_argument("mode_projection: null grid");
  const auto n = static_cast<Eigen::Index>(sample.size());
  if (eigen.eigenvectors.rows() != n) {
    throw std::invalid_argument("mode_projection: eigen system does not match sample");
  }
  const double k = sample.k0_magnitude();
  const Vec3 k0 = sample.k0_vector();
  const auto d = static_cast<Eigen::Index>(grid->size());

  Eigen::MatrixX3d positions(n, 3);
  RealVector forward_phase(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    positions.row(j) = sample.position(j).transpose();
    forward_phase(j) = k0.dot(sample.position(j));
  }

  ComplexMatrix projections(d, eigen.eigenvectors.cols());
  ComplexMatrix plane_waves;
  Eigen::MatrixX3d dirs;
  for (Eigen::Index start = 0; start < d; start += kDirectionBlock) {
    const Eigen::Index rows = std::min(kDirectionBlock, d - start);
    dirs.resize(rows, 3);
    for (Eigen::Index i = 0; i < rows; ++i) {
      dirs.row(i) = grid->directions()[start + i].transpose();
    }
    const RealMatrix phase =
        (-k * (dirs * positions.transpose())).rowwise() + forward_phase.transpose();
    plane_waves.resize(rows, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        plane_waves(i, j) = std::polar(1.0, phase(i, j));
      }
    }
    projections.middleRows(start, rows).noalias() = plane_waves * eigen.eigenvectors;
  }
  return ModeFunction(std::move(projections), eigen.eigenvalues,
                      eigen.mode_coefficients, std::move(grid), sample.gamma1());
}

EmissionProfile angular_density(const ModeFunction& modes, double time_us) {
  if (!(time_us >= 0.0)) throw std::invalid_argument("angular_density: t must be >= 0");
  const auto& grid = modes.grid();
  EmissionProfile profile;
  profile.time_us = time_us;
  profile.grid = modes.grid_ptr();
  profile.density.assign(grid.size(), 0.0);

  const Eigen::Index m = modes.emitting_modes();
  if (time_us == 0.0 || m == 0) return profile;

  const RealVector lambda = modes.eigenvalues().head(m);
  const ComplexMatrix kernel =
      time_kernel(lambda, lambda, modes.gamma1(), time_us).cast<Complex>();
  const ComplexMatrix a = weighted_projections(modes);
  const ComplexMatrix b = a * kernel;
  const ComplexVector quad = b.cwiseProduct(a.conjugate()).rowwise().sum();

  const double scale = 1.0 / (2.0 * kPi);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex value = scale * quad(static_cast<Eigen::Index>(i));
    profile.density[i] = value.real();
    profile.max_imag_residue = std::max(profile.max_imag_residue, std::abs(value.imag()));
    total += grid.weights()[i] * value.real();
  }
  profile.total = total;
  return profile;
}

double cone_fraction(const EmissionProfile& profile, const Vec3& axis,
                     double half_angle, ConeSense sense) {
  if (!(half_angle > 0.0 && half_angle <= kPi)) {
    throw std::invalid_argument("cone_fraction: half angle must lie in (0, pi]");
  }
  if (!(profile.total > 0.0) || !profile.grid) {
    throw std::invalid_argument("cone_fraction: profile has zero total emission");
  }
  const Vec3 u = axis.normalized();
  const auto& grid = *profile.grid;
  double inside = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = std::clamp(grid.directions()[i].dot(u), -1.0, 1.0);
    const double angle =
        sense == ConeSense::axial ? std::acos(std::abs(c)) : std::acos(c);
    if (angle <= half_angle) inside += grid.weights()[i] * profile.density[i];
  }
  return inside / profile.total;
}

Complex field_inner_product(const ModeFunction& a, const ModeFunction& b) {
  if (!(a.grid_ptr() == b.grid_ptr() || a.grid() == b.grid())) {
    throw std::invalid_argument("mode_overlap: mode functions use different grids");
  }
  if (a.gamma1() != b.gamma1()) {
    throw std::invalid_argument("mode_overlap: mode functions use different gamma1");
  }
  const Eigen::Index ma = a.emitting_modes();
  const Eigen::Index mb = b.emitting_modes();
  if (ma == 0 || mb == 0) {
    throw std::invalid_argument("mode_overlap: no emitting modes");
  }
  const ComplexMatrix wa = weighted_projections(a);
  const ComplexMatrix wb = weighted_projections(b);
  // K^T so that (wb K^T)_{im} = sum_m' wb_im' K_{mm'}.
  const ComplexMatrix kernel_t =
      time_kernel(b.eigenvalues().head(mb), a.eigenvalues().head(ma), a.gamma1(),
                  kInfiniteTime)
          .cast<Complex>();
  const ComplexMatrix folded = wb * kernel_t;
  const ComplexVector per_direction =
      wa.conjugate().cwiseProduct(folded).rowwise().sum();
  const auto& weights = a.grid().weights();
  Complex sum(0.0, 0.0);
  for (Eigen::Index i = 0; i < per_direction.size(); ++i) {
    sum += weights[static_cast<std::size_t>(i)] * per_direction(i);
  }
  return (2.0 * kPi / a.gamma1()) * sum;
}

double mode_overlap(const ModeFunction& a, const ModeFunction& b, double norm_a) {
  const Complex ab = field_inner_product(a, b);
  const double norm_b = field_inner_product(b, b).real();
  if (!(norm_a > 0.0) || !(norm_b > 0.0)) {
    throw std::invalid_argument("mode_overlap: zero-norm field");
  }
  return std::norm(ab) / (norm_a * norm_b);
}

double mode_overlap(const ModeFunction& a, const ModeFunction& b) {
  return mode_overlap(a, b, field_inner_product(a, a).real());
}

ProjectionDiagnostics check_projection(const ModeFunction& modes, int top) {
  ProjectionDiagnostics diag;
  const auto& proj = modes.projections();
  const double n = static_cast<double>(modes.atom_count());
  diag.unitarity_error =
      (proj.rowwise().squaredNorm().array() - n).abs().maxCoeff() / n;

  const Eigen::Index k = std::min<Eigen::Index>(top, modes.emitting_modes());
  if (k == 0) return diag;
  const auto& weights = modes.grid().weights();
  Eigen::Map<const RealVector> w(weights.data(), static_cast<Eigen::Index>(weights.size()));
  const ComplexMatrix lead = proj.leftCols(k);
  const ComplexMatrix gram =
      (lead.adjoint() * w.cast<Complex>().asDiagonal() * lead) / kFourPi;
  const RealVector& lambda = modes.eigenvalues();
  for (Eigen::Index p = 0; p < k; ++p) {
    for (Eigen::Index q = 0; q < k; ++q) {
      const double target = p == q ? lambda(p) : 0.0;
      const double err =
          std::abs(gram(p, q) - target) / std::sqrt(lambda(p) * lambda(q));
      diag.orthogonality_error = std::max(diag.orthogonality_error, err);
    }
  }
  return diag;
}

}  // namespace superrad
