#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "superrad/common.hpp"
#include "superrad/geometry.hpp"
#include "superrad/kernel.hpp"

namespace superrad {

/// Spectral decomposition F = V diag(lambda) V^dagger together with the
/// coefficients c_m = v_m^dagger b0 of the uniform initial state.
struct EigenSystem {
  RealVector eigenvalues;          ///< descending, clamped at 0
  ComplexMatrix eigenvectors;      ///< columns v_m
  ComplexVector mode_coefficients; ///< c_m
  std::size_t clamped_count = 0;   ///< eigenvalues in [-1e-10 N, 0) set to 0

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(eigenvalues.size());
  }
};

/// Amplitudes b_j(t) of the single-excitation state in the phase-matched
/// frame, b_j = exp(-i k0.r_j) a_j, where a_j multiplies |e_j>|0> in the
/// interaction-picture state. Time in us.
struct AmplitudeState {
  ComplexVector beta;
  double time_us = 0.0;
};

/// Eigenvalues below -clamp_tolerance * N are treated as a numerical failure.
inline constexpr double kEigenClampTolerance = 1e-10;

EigenSystem diagonalize(const CouplingKernel& kernel);

/// b_j = 1/sqrt(N) at t = 0.
AmplitudeState initial_amplitudes(std::size_t atom_count);
AmplitudeState initial_amplitudes(const SampleGeometry& sample);

/// Closed-form b(t) = sum_m c_m exp(-gamma1 lambda_m t) v_m.
AmplitudeState propagate(const EigenSystem& eigen, double t_us, double gamma1);

/// Classical fixed-step RK4 on db/dt = -gamma1 F b from the uniform state.
/// Independent of the eigen route; used only as a correctness oracle.
/// Requires gamma1 * lambda_max * dt <= 0.01, with lambda_max bounded here by
/// the Gershgorin row-sum so that no eigensolve is needed.
AmplitudeState integrate_ode_oracle(const CouplingKernel& kernel, double t_us,
                                    double dt_us);

/// a_j = exp(i k0.r_j) b_j, for display.
ComplexVector alpha_amplitudes(const AmplitudeState& state,
                               const SampleGeometry& sample);

double excited_population(const AmplitudeState& state);

/// sum_m |c_m|^2 exp(-2 gamma1 lambda_m t); equals excited_population of the
/// propagated state.
double survival_probability(const EigenSystem& eigen, double t_us, double gamma1);

std::vector<double> per_atom_populations(const AmplitudeState& state);

/// Mean per-atom population in each lattice layer perpendicular to `axis`;
/// atoms are grouped by their coordinate along `axis` rounded to `tolerance`.
/// Layers are returned in ascending coordinate order.
std::vector<double> layer_populations(const std::vector<double>& populations,
                                      const SampleGeometry& sample,
                                      const Vec3& axis, double tolerance = 1e-6);

inline constexpr double kDefaultFitThreshold = 0.9;
inline constexpr std::size_t kMinFitSamples = 20;

/// Least-squares slope of ln P(t) over samples with P >= threshold, returned
/// as the positive rate (2 gamma_fit, us^-1).
double fit_early_decay(std::span<const double> times_us,
                       std::span<const double> populations,
                       double threshold = kDefaultFitThreshold);

}  // namespace superrad
