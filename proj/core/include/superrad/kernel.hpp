#pragma once

#include <cstddef>

#include "superrad/common.hpp"
#include "superrad/geometry.hpp"

namespace superrad {

/// sin(x)/x, with a Taylor series below |x| = 1e-4 and sinc(0) == 1 exactly.
double sinc(double x);

/// Pairwise decay coupling sinc(k0|r|) * exp(-i k0.r) for separation r (um)
/// and wavevector k0 (rad/um). Returns exactly 1 at r = 0.
Complex coupling_entry(const Vec3& r, const Vec3& k0_vector);

/// Dense Hermitian kernel F_{jj'} = coupling_entry(r_j - r_j').
///
/// F is the Gram matrix of the plane waves exp(i(k0 n - k0).r_j) averaged over
/// directions n, hence positive semi-definite with unit diagonal.
class CouplingKernel {
 public:
  CouplingKernel(ComplexMatrix matrix, SampleGeometry sample,
                 std::size_t coincident_pairs)
      : matrix_(std::move(matrix)),
        sample_(std::move(sample)),
        coincident_pairs_(coincident_pairs) {}

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const SampleGeometry& sample() const noexcept { return sample_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  /// Number of atom pairs at zero separation; non-zero means the geometry
  /// invariant was relaxed and build_kernel emitted a warning.
  std::size_t coincident_pairs() const noexcept { return coincident_pairs_; }

 private:
  ComplexMatrix matrix_;
  SampleGeometry sample_;
  std::size_t coincident_pairs_;
};

CouplingKernel build_kernel(const SampleGeometry& sample);

/// Cross kernel F_{jj'} = coupling_entry(r^a_j - r^b_j') between two samples
/// sharing the same k0; rows index `a`, columns index `b`.
ComplexMatrix cross_kernel(const SampleGeometry& a, const SampleGeometry& b);

/// gamma_col = (gamma1/N) sum_{jj'} F_{jj'}, in us^-1. Throws NumericalFailure
/// if the discarded imaginary part exceeds 1e-10 * gamma1.
double collective_rate(const CouplingKernel& kernel);

/// || F b0 - (gamma_col/gamma1) b0 || for the uniform unit vector b0; zero iff
/// the symmetric state is an eigenvector.
double symmetric_state_residual(const CouplingKernel& kernel);

struct KernelDiagnostics {
  double hermiticity_error = 0.0;  ///< max |F_jk - conj(F_kj)|
  double diagonal_error = 0.0;     ///< max |F_jj - 1|
  double trace_error = 0.0;        ///< |tr F - N|
};

KernelDiagnostics check_kernel(const CouplingKernel& kernel);

}  // namespace superrad
