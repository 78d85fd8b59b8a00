#include "superrad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "superrad/csv.hpp"
#include "superrad/sample_io.hpp"

namespace superrad {

using nlohmann::json;

PreparedSample PreparedSample::from(SampleGeometry sample) {
  CouplingKernel kernel = build_kernel(sample);
  EigenSystem eigen = diagonalize(kernel);
  const double rate = collective_rate(kernel);
  return PreparedSample{std::move(sample), std::move(kernel), std::move(eigen), rate};
}

SampleGeometry config_lattice(const ExperimentConfig& config) {
  return build_lattice(config.lattice_dims, config.spacing_um, config.constants());
}

SampleGeometry config_sample(const ExperimentConfig& config) {
  return apply_perturbation(config_lattice(config), config.perturbation);
}

std::shared_ptr<const AngularGrid> config_grid(const ExperimentConfig& config,
                                               const SampleGeometry& sample,
                                               int refinement) {
  return std::make_shared<const AngularGrid>(build_angular_grid(
      config.grid.n_polar * refinement, config.grid.n_azimuth * refinement,
      sample.k0_direction(), config.cone_half_angle_rad));
}

namespace {

std::string indexed_name(const char* stem, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", stem, index);
  return buf;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json rates_json(const PreparedSample& p) {
  const double gamma1 = p.sample.gamma1();
  json j;
  j["atom_count"] = p.sample.size();
  j["wavelength_um"] = p.sample.wavelength();
  j["gamma1_per_us"] = gamma1;
  j["gamma_col_per_us"] = p.gamma_col;
  j["gamma_col_over_gamma1"] = p.gamma_col / gamma1;
  j["lambda_max"] = p.eigen.eigenvalues(0);
  j["lambda_min"] = p.eigen.eigenvalues(p.eigen.eigenvalues.size() - 1);
  j["clamped_eigenvalues"] = p.eigen.clamped_count;
  j["symmetric_state_residual"] = symmetric_state_residual(p.kernel);
  j["max_pairwise_distance_um"] = max_pairwise_distance(p.sample);
  j["coincident_pairs"] = p.kernel.coincident_pairs();
  return j;
}

void write_profile(const std::filesystem::path& path, const EmissionProfile& profile) {
  CsvWriter csv(path, {"theta_rad", "phi_rad", "weight_sr", "density_per_sr"});
  const auto& grid = *profile.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.cell(grid.theta()[i]).cell(grid.phi()[i]).cell(grid.weights()[i]).cell(
        profile.density[i]);
    csv.end_row();
  }
  csv.close();
}

json evolve_impl(const ExperimentConfig& config, const PreparedSample& p) {
  const auto& out = config.output_dir;
  const double gamma1 = p.sample.gamma1();

  std::vector<double> populations;
  populations.reserve(config.times_us.size());
  CsvWriter trace(out / "population_trace.csv",
                  {"time_us", "population", "exponential_reference"});
  for (double t : config.times_us) {
    const double pop = excited_population(propagate(p.eigen, t, gamma1));
    populations.push_back(pop);
    trace.cell(t).cell(pop).cell(std::exp(-2.0 * p.gamma_col * t));
    trace.end_row();
  }
  trace.close();

  const auto& snapshot_times =
      config.snapshot_times_us ? *config.snapshot_times_us : config.times_us;
  const Vec3 axis = p.sample.k0_direction();
  json snapshots = json::array();
  for (std::size_t s = 0; s < snapshot_times.size(); ++s) {
    const double t = snapshot_times[s];
    const auto pops = per_atom_populations(propagate(p.eigen, t, gamma1));
    const std::string name = indexed_name("snapshot", s);
    CsvWriter csv(out / name, {"atom_index", "x_um", "y_um", "z_um", "population"});
    for (std::size_t j = 0; j < pops.size(); ++j) {
      const Vec3& r = p.sample.position(j);
      csv.cell(j).cell(r.x()).cell(r.y()).cell(r.z()).cell(pops[j]);
      csv.end_row();
    }
    csv.close();
    const auto layers = layer_populations(pops, p.sample, axis);
    const auto [lo, hi] = std::minmax_element(layers.begin(), layers.end());
    snapshots.push_back({{"file", name},
                         {"time_us", t},
                         {"layer_populations", layers},
                         {"layer_ratio_max_over_min", *lo > 0.0 ? *hi / *lo : 0.0}});
  }

  json j;
  j["gamma_col_over_gamma1"] = p.gamma_col / gamma1;
  j["two_gamma_col_per_us"] = 2.0 * p.gamma_col;
  j["fit_threshold"] = config.fit_threshold;
  try {
    const double fitted = fit_early_decay(config.times_us, populations, config.fit_threshold);
    j["fitted_early_rate_per_us"] = fitted;
    j["fitted_over_two_gamma_col"] = fitted / (2.0 * p.gamma_col);
  } catch (const std::invalid_argument& e) {
    j["fitted_early_rate_per_us"] = nullptr;
    j["fit_error"] = e.what();
  }
  j["snapshots"] = snapshots;
  return j;
}

json angular_impl(const ExperimentConfig& config, const PreparedSample& p) {
  const auto& out = config.output_dir;
  const Vec3 axis = p.sample.k0_direction();
  const double half = config.cone_half_angle_rad;

  const auto grid = config_grid(config, p.sample);
  const ModeFunction modes = mode_projection(p.sample, p.eigen, grid);
  const auto diag = check_projection(modes);

  json profiles = json::array();
  auto record = [&](const EmissionProfile& profile, const std::string& name) {
    write_profile(out / name, profile);
    const auto dark = p.eigen.mode_coefficients.size() - modes.emitting_modes();
    const double survival =
        std::isinf(profile.time_us)
            ? p.eigen.mode_coefficients.tail(dark).squaredNorm()
            : survival_probability(p.eigen, profile.time_us, p.sample.gamma1());
    json r;
    r["file"] = name;
    r["time_us"] = std::isinf(profile.time_us) ? json("inf") : json(profile.time_us);
    r["total_emitted"] = profile.total;
    r["closure_error"] = std::abs(profile.total + survival - 1.0);
    r["max_imag_residue"] = profile.max_imag_residue;
    if (profile.total > 0.0) {
      r["cone_fraction"] = cone_fraction(profile, axis, half);
      r["axial_cone_fraction"] = cone_fraction(profile, axis, half, ConeSense::axial);
    }
    profiles.push_back(r);
  };
  for (std::size_t s = 0; s < config.angular_times_us.size(); ++s) {
    record(angular_density(modes, config.angular_times_us[s]),
           indexed_name("angular", s));
  }
  const EmissionProfile full = angular_density(modes, kInfiniteTime);
  record(full, "angular_inf.csv");

  json j;
  j["grid"] = {{"n_polar", grid->n_polar()},
               {"n_azimuth", grid->n_azimuth()},
               {"directions", grid->size()},
               {"polar_break_rad", half}};
  j["cone_half_angle_rad"] = half;
  j["cone_fraction"] = cone_fraction(full, axis, half);
  j["axial_cone_fraction"] = cone_fraction(full, axis, half, ConeSense::axial);
  j["unitarity_error"] = diag.unitarity_error;
  j["orthogonality_error_top20"] = diag.orthogonality_error;
  j["profiles"] = profiles;

  if (config.grid_convergence_check) {
    const auto fine_grid = config_grid(config, p.sample, 2);
    const ModeFunction fine = mode_projection(p.sample, p.eigen, fine_grid);
    const EmissionProfile fine_full = angular_density(fine, kInfiniteTime);
    const double fine_cone = cone_fraction(fine_full, axis, half);
    j["grid_convergence"] = {
        {"n_polar", fine_grid->n_polar()},
        {"n_azimuth", fine_grid->n_azimuth()},
        {"cone_fraction", fine_cone},
        {"cone_fraction_delta", std::abs(fine_cone - j["cone_fraction"].get<double>())},
        {"total_emitted_delta", std::abs(fine_full.total - full.total)}};
  }
  return j;
}

}  // namespace

json run_rates(const ExperimentConfig& config) {
  config.validate();
  const auto p = PreparedSample::from(config_sample(config));
  json j = rates_json(p);
  write_json(config.output_dir / "rates.json", j);
  return j;
}

json run_evolve(const ExperimentConfig& config) {
  config.validate();
  const auto p = PreparedSample::from(config_sample(config));
  json j = evolve_impl(config, p);
  write_json(config.output_dir / "evolve.json", j);
  return j;
}

json run_angular(const ExperimentConfig& config) {
  config.validate();
  const auto p = PreparedSample::from(config_sample(config));
  json j = angular_impl(config, p);
  write_json(config.output_dir / "angular.json", j);
  return j;
}

json run_overlap(const ExperimentConfig& config,
                 const std::optional<SampleGeometry>& sample_a,
                 const std::optional<SampleGeometry>& sample_b) {
  config.validate();
  const SampleGeometry a = sample_a ? *sample_a : config_lattice(config);
  const SampleGeometry b = sample_b ? *sample_b : config_sample(config);
  const auto pa = PreparedSample::from(a);
  const auto pb = PreparedSample::from(b);
  const auto grid = config_grid(config, a);
  const ModeFunction ma = mode_projection(a, pa.eigen, grid);
  const ModeFunction mb = mode_projection(b, pb.eigen, grid);

  json j;
  j["seed"] = config.perturbation.seed;
  j["removed_count"] = static_cast<long long>(a.size()) - static_cast<long long>(b.size());
  j["fidelity"] = mode_overlap(ma, mb);
  write_json(config.output_dir / "overlap.json", j);
  return j;
}

json robustness_sweep(const ExperimentConfig& config) {
  config.validate();
  for (auto k : config.sweep.removal_counts) {
    if (k >= config.atom_count()) {
      throw ConfigError("sweep.removal_counts", "count " + std::to_string(k) +
                                                    " must be < N=" +
                                                    std::to_string(config.atom_count()));
    }
  }
  const auto full = PreparedSample::from(config_lattice(config));
  const auto grid = config_grid(config, full.sample);
  const ModeFunction full_modes = mode_projection(full.sample, full.eigen, grid);
  const double full_norm = field_inner_product(full_modes, full_modes).real();

  struct Trial {
    std::size_t removed;
    std::uint64_t seed;
    double fidelity = 0.0;
  };
  std::vector<Trial> trials;
  for (auto k : config.sweep.removal_counts) {
    for (int s = 0; s < config.sweep.seeds; ++s) {
      trials.push_back({k, config.sweep.base_seed + static_cast<std::uint64_t>(s)});
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      try {
        PerturbationSpec spec;
        spec.removal_count = trials[i].removed;
        spec.seed = trials[i].seed;
        const auto reduced = PreparedSample::from(remove_atoms(full.sample, spec));
        const ModeFunction modes = mode_projection(reduced.sample, reduced.eigen, grid);
        trials[i].fidelity = mode_overlap(full_modes, modes, full_norm);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned count = std::min<std::size_t>(
      config.threads > 0 ? static_cast<unsigned>(config.threads) : hw, trials.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  json records = json::array();
  json aggregate = json::array();
  for (auto k : config.sweep.removal_counts) {
    double lo = 1.0;
    double hi = 0.0;
    double sum = 0.0;
    int n = 0;
    for (const auto& t : trials) {
      if (t.removed != k) continue;
      lo = std::min(lo, t.fidelity);
      hi = std::max(hi, t.fidelity);
      sum += t.fidelity;
      ++n;
    }
    aggregate.push_back({{"removed_count", k},
                         {"trials", n},
                         {"min", lo},
                         {"mean", sum / n},
                         {"max", hi}});
  }
  for (const auto& t : trials) {
    records.push_back(
        {{"seed", t.seed}, {"removed_count", t.removed}, {"fidelity", t.fidelity}});
  }

  json j;
  j["atom_count"] = full.sample.size();
  j["grid"] = {{"n_polar", grid->n_polar()}, {"n_azimuth", grid->n_azimuth()}};
  j["trials"] = records;
  j["aggregate"] = aggregate;
  write_json(config.output_dir / "sweep.json", j);
  return j;
}

json run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto p = PreparedSample::from(config_sample(config));
  write_sample(config.output_dir / "sample.txt", p.sample);

  json rates = rates_json(p);
  write_json(config.output_dir / "rates.json", rates);
  json evolve = evolve_impl(config, p);
  write_json(config.output_dir / "evolve.json", evolve);
  json angular = angular_impl(config, p);
  write_json(config.output_dir / "angular.json", angular);

  json summary;
  summary["config"] = to_json(config);
  summary["atom_count"] = p.sample.size();
  summary["gamma_col_over_gamma1"] = rates["gamma_col_over_gamma1"];
  summary["fitted_early_rate_per_us"] = evolve["fitted_early_rate_per_us"];
  summary["two_gamma_col_per_us"] = evolve["two_gamma_col_per_us"];
  summary["cone_fraction_" + format_double(config.cone_half_angle_rad) + "rad"] =
      angular["cone_fraction"];
  summary["axial_cone_fraction"] = angular["axial_cone_fraction"];
  if (angular.contains("grid_convergence")) {
    summary["grid_convergence"] = angular["grid_convergence"];
  }
  write_json(config.output_dir / "summary.json", summary);
  return summary;
}

}  // namespace superrad
