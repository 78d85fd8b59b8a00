#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "superrad/common.hpp"
#include "superrad/geometry.hpp"

namespace superrad {

struct GridSpec {
  int n_polar = 64;
  int n_azimuth = 64;
};

struct SweepSpec {
  std::vector<std::size_t> removal_counts{1, 5, 10, 20, 30};
  int seeds = 20;
  std::uint64_t base_seed = 0;
};

/// Everything a run needs. Defaults reproduce the 7x7x20 Rb lattice.
struct ExperimentConfig {
  std::array<int, 3> lattice_dims{7, 7, 20};
  double spacing_um = 0.37;
  double wavelength_um = 0.795;
  double gamma1_per_us = 18.5;
  std::optional<Vec3> k0_direction;
  GridSpec grid;
  std::vector<double> times_us;  ///< ascending; defaults to log_schedule(1e-4, 0.2, 200)
  std::optional<std::vector<double>> snapshot_times_us;  ///< unset: every schedule time
  std::vector<double> angular_times_us{0.1};
  PerturbationSpec perturbation;
  SweepSpec sweep;
  std::filesystem::path output_dir = "out";
  double cone_half_angle_rad = 0.3;
  double fit_threshold = 0.9;
  bool grid_convergence_check = true;
  int threads = 0;  ///< 0: hardware concurrency

  ExperimentConfig();

  /// Throws ConfigError naming the first invalid field; the message lists
  /// every problem found.
  void validate() const;

  PhysicalConstants constants() const;
  std::size_t atom_count() const;
};

/// `count` points log-spaced from start to stop inclusive.
std::vector<double> log_schedule(double start_us, double stop_us, int count);

/// Parses a config object. Unknown keys and type mismatches are ConfigErrors.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace superrad
