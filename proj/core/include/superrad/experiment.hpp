#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include <nlohmann/json.hpp>

#include "superrad/config.hpp"
#include "superrad/dynamics.hpp"
#include "superrad/field.hpp"
#include "superrad/geometry.hpp"
#include "superrad/kernel.hpp"

namespace superrad {

/// Sample plus its kernel and spectral decomposition.
struct PreparedSample {
  SampleGeometry sample;
  CouplingKernel kernel;
  EigenSystem eigen;
  double gamma_col;

  static PreparedSample from(SampleGeometry sample);
};

/// The lattice described by `config`, before any perturbation.
SampleGeometry config_lattice(const ExperimentConfig& config);

/// The lattice with config.perturbation applied.
SampleGeometry config_sample(const ExperimentConfig& config);

/// Grid whose polar axis is k0 and whose polar rule is split at the cone
/// half-angle, at the configured resolution times `refinement`.
std::shared_ptr<const AngularGrid> config_grid(const ExperimentConfig& config,
                                               const SampleGeometry& sample,
                                               int refinement = 1);

// Each command validates the config, writes its files below
// config.output_dir and returns the JSON it wrote.

/// rates.json: gamma_col, lambda extremes, symmetric-state residual.
nlohmann::json run_rates(const ExperimentConfig& config);

/// population_trace.csv, snapshot_NNNN.csv, evolve.json.
nlohmann::json run_evolve(const ExperimentConfig& config);

/// angular_NNNN.csv per requested time, angular_inf.csv, angular.json.
nlohmann::json run_angular(const ExperimentConfig& config);

/// overlap.json: one {seed, removed_count, fidelity} record. Without explicit
/// samples, compares the lattice with its configured perturbation.
nlohmann::json run_overlap(const ExperimentConfig& config,
                           const std::optional<SampleGeometry>& sample_a = std::nullopt,
                           const std::optional<SampleGeometry>& sample_b = std::nullopt);

/// sweep.json: per-trial records and min/mean/max per removal count.
nlohmann::json robustness_sweep(const ExperimentConfig& config);

/// Evolve + angular + rates, plus summary.json.
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace superrad
