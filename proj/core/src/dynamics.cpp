#include "superrad/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace superrad {

EigenSystem diagonalize(const CouplingKernel& kernel) {
  const auto n = static_cast<Eigen::Index>(kernel.size());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(kernel.matrix());
  if (solver.info() != Eigen::Success) {
    const auto d = check_kernel(kernel);
    throw NumericalFailure(
        "diagonalize: eigensolver did not converge (N=" + std::to_string(n) +
        ", hermiticity error " + std::to_string(d.hermiticity_error) + ")");
  }

  // Eigen returns ascending order; we want descending.
  EigenSystem es;
  es.eigenvalues = solver.eigenvalues().reverse();
  es.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double floor = -kEigenClampTolerance * double(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    double& lambda = es.eigenvalues(m);
    if (lambda < floor) {
      throw NumericalFailure("diagonalize: eigenvalue " + std::to_string(lambda) +
                             " below PSD tolerance");
    }
    if (lambda < 0.0) {
      lambda = 0.0;
      ++es.clamped_count;
    }
  }

  const ComplexVector b0 = initial_amplitudes(kernel.size()).beta;
  es.mode_coefficients = es.eigenvectors.adjoint() * b0;
  return es;
}

AmplitudeState initial_amplitudes(std::size_t atom_count) {
  if (atom_count == 0) throw std::invalid_argument("initial_amplitudes: N = 0");
  const double amp = 1.0 / std::sqrt(static_cast<double>(atom_count));
  return {ComplexVector::Constant(static_cast<Eigen::Index>(atom_count),
                                  Complex(amp, 0.0)),
          0.0};
}

AmplitudeState initial_amplitudes(const SampleGeometry& sample) {
  return initial_amplitudes(sample.size());
}

AmplitudeState propagate(const EigenSystem& eigen, double t_us, double gamma1) {
  if (!(t_us >= 0.0)) throw std::invalid_argument("propagate: t must be >= 0");
  if (t_us == 0.0) return initial_amplitudes(eigen.size());
  const ComplexVector weights =
      eigen.mode_coefficients.array() *
      (-gamma1 * t_us * eigen.eigenvalues.array()).exp().cast<Complex>();
  return {eigen.eigenvectors * weights, t_us};
}

AmplitudeState integrate_ode_oracle(const CouplingKernel& kernel, double t_us,
                                    double dt_us) {
  if (!(t_us >= 0.0)) throw std::invalid_argument("oracle: t must be >= 0");
  if (!(dt_us > 0.0)) throw std::invalid_argument("oracle: dt must be > 0");
  const double gamma1 = kernel.sample().gamma1();
  const double row_bound = kernel.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  if (gamma1 * row_bound * dt_us > 0.01) {
    throw std::invalid_argument("oracle: dt too large (gamma1*lambda_max*dt > 0.01)");
  }

  AmplitudeState state = initial_amplitudes(kernel.size());
  if (t_us == 0.0) return state;

  const ComplexMatrix g = -gamma1 * kernel.matrix();
  const auto steps = static_cast<long long>(std::ceil(t_us / dt_us));
  const double h = t_us / static_cast<double>(steps);
  ComplexVector& y = state.beta;
  for (long long s = 0; s < steps; ++s) {
    const ComplexVector k1 = g * y;
    const ComplexVector k2 = g * (y + 0.5 * h * k1);
    const ComplexVector k3 = g * (y + 0.5 * h * k2);
    const ComplexVector k4 = g * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  state.time_us = t_us;
  return state;
}

ComplexVector alpha_amplitudes(const AmplitudeState& state,
                               const SampleGeometry& sample) {
  const Vec3 k0 = sample.k0_vector();
  ComplexVector alpha(state.beta.size());
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    alpha(j) = std::polar(1.0, k0.dot(sample.position(j))) * state.beta(j);
  }
  return alpha;
}

double excited_population(const AmplitudeState& state) {
  return state.beta.squaredNorm();
}

double survival_probability(const EigenSystem& eigen, double t_us, double gamma1) {
  return (eigen.mode_coefficients.cwiseAbs2().array() *
          (-2.0 * gamma1 * t_us * eigen.eigenvalues.array()).exp())
      .sum();
}

std::vector<double> per_atom_populations(const AmplitudeState& state) {
  std::vector<double> out(static_cast<std::size_t>(state.beta.size()));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::norm(state.beta(j));
  return out;
}

std::vector<double> layer_populations(const std::vector<double>& populations,
                                      const SampleGeometry& sample,
                                      const Vec3& axis, double tolerance) {
  if (populations.size() != sample.size()) {
    throw std::invalid_argument("layer_populations: size mismatch");
  }
  const Vec3 u = axis.normalized();
  std::map<long long, std::pair<double, std::size_t>> layers;
  for (std::size_t j = 0; j < populations.size(); ++j) {
    const auto key =
        static_cast<long long>(std::llround(u.dot(sample.position(j)) / tolerance));
    auto& [sum, count] = layers[key];
    sum += populations[j];
    ++count;
  }
  std::vector<double> out;
  out.reserve(layers.size());
  for (const auto& [key, acc] : layers) {
    out.push_back(acc.first / static_cast<double>(acc.second));
  }
  return out;
}

double fit_early_decay(std::span<const double> times_us,
                       std::span<const double> populations, double threshold) {
  if (times_us.size() != populations.size()) {
    throw std::invalid_argument("fit_early_decay: length mismatch");
  }
  std::vector<double> ts;
  std::vector<double> logs;
  for (std::size_t i = 0; i < times_us.size(); ++i) {
    if (!(populations[i] > 0.0)) {
      throw std::invalid_argument("fit_early_decay: populations must be > 0");
    }
    if (populations[i] >= threshold) {
      ts.push_back(times_us[i]);
      logs.push_back(std::log(populations[i]));
    }
  }
  if (ts.size() < kMinFitSamples) {
    throw std::invalid_argument("fit_early_decay: only " + std::to_string(ts.size()) +
                                " samples in the fit window (need " +
                                std::to_string(kMinFitSamples) + ")");
  }
  const double n = static_cast<double>(ts.size());
  const double t_mean = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
  const double y_mean = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxy += (ts[i] - t_mean) * (logs[i] - y_mean);
    sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_early_decay: degenerate times");
  return -sxy / sxx;
}

}  // namespace superrad
