#include "superrad/kernel.hpp"

#include <cmath>
#include <iostream>

namespace superrad {

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

Complex coupling_entry(const Vec3& r, const Vec3& k0_vector) {
  const double dist = r.norm();
  if (dist == 0.0) return Complex(1.0, 0.0);
  const double amplitude = sinc(k0_vector.norm() * dist);
  return std::polar(amplitude, -k0_vector.dot(r));
}

CouplingKernel build_kernel(const SampleGeometry& sample) {
  const std::size_t n = sample.size();
  if (n == 0) throw std::invalid_argument("build_kernel: empty sample");
  const Vec3 k0 = sample.k0_vector();
  const auto& p = sample.positions();

  ComplexMatrix f(n, n);
  std::size_t coincident = 0;
  for (std::size_t j = 0; j < n; ++j) {
    f(j, j) = Complex(1.0, 0.0);
    for (std::size_t i = j + 1; i < n; ++i) {
      const Vec3 r = p[i] - p[j];
      if (r.squaredNorm() == 0.0) ++coincident;
      const Complex value = coupling_entry(r, k0);
      f(i, j) = value;
      f(j, i) = std::conj(value);
    }
  }
  if (coincident > 0) {
    std::clog << "warning: build_kernel: " << coincident
              << " coincident atom pair(s); kernel entries set to 1\n";
  }
  return CouplingKernel(std::move(f), sample, coincident);
}

ComplexMatrix cross_kernel(const SampleGeometry& a, const SampleGeometry& b) {
  if ((a.k0_vector() - b.k0_vector()).norm() > 1e-12 * a.k0_magnitude()) {
    throw std::invalid_argument("cross_kernel: samples have different k0");
  }
  const Vec3 k0 = a.k0_vector();
  ComplexMatrix f(a.size(), b.size());
  for (std::size_t jb = 0; jb < b.size(); ++jb) {
    for (std::size_t ja = 0; ja < a.size(); ++ja) {
      f(ja, jb) = coupling_entry(a.position(ja) - b.position(jb), k0);
    }
  }
  return f;
}

double collective_rate(const CouplingKernel& kernel) {
  const double n = static_cast<double>(kernel.size());
  const Complex total = kernel.matrix().sum();
  const double gamma1 = kernel.sample().gamma1();
  const double rate = gamma1 * total.real() / n;
  if (std::abs(gamma1 * total.imag() / n) > 1e-10 * gamma1) {
    throw NumericalFailure("collective_rate: imaginary part " +
                           std::to_string(total.imag() / n) + " too large");
  }
  return std::max(rate, 0.0);
}

double symmetric_state_residual(const CouplingKernel& kernel) {
  const auto n = static_cast<Eigen::Index>(kernel.size());
  const ComplexVector b0 =
      ComplexVector::Constant(n, Complex(1.0 / std::sqrt(double(n)), 0.0));
  const double ratio = collective_rate(kernel) / kernel.sample().gamma1();
  return (kernel.matrix() * b0 - ratio * b0).norm();
}

KernelDiagnostics check_kernel(const CouplingKernel& kernel) {
  const auto& f = kernel.matrix();
  KernelDiagnostics d;
  d.hermiticity_error = (f - f.adjoint()).cwiseAbs().maxCoeff();
  d.diagonal_error =
      (f.diagonal().array() - Complex(1.0, 0.0)).abs().maxCoeff();
  d.trace_error = std::abs(f.trace() - Complex(double(f.rows()), 0.0));
  return d;
}

}  // namespace superrad
