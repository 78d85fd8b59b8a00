#include "superrad/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace superrad {

using nlohmann::json;

std::vector<double> log_schedule(double start_us, double stop_us, int count) {
  if (!(start_us > 0.0) || !(stop_us > start_us) || count < 2) {
    throw std::invalid_argument("log_schedule: need 0 < start < stop and count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(start_us);
  const double b = std::log(stop_us);
  for (int i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = start_us;
  out.back() = stop_us;
  return out;
}

ExperimentConfig::ExperimentConfig() : times_us(log_schedule(1e-4, 0.2, 200)) {}

PhysicalConstants ExperimentConfig::constants() const {
  PhysicalConstants c;
  c.wavelength_um = wavelength_um;
  c.gamma1_per_us = gamma1_per_us;
  c.k0_direction = k0_direction;
  return c;
}

std::size_t ExperimentConfig::atom_count() const {
  std::size_t n = 1;
  for (int d : lattice_dims) n *= static_cast<std::size_t>(std::max(d, 0));
  return n;
}

namespace {

class Problems {
 public:
  void add(const std::string& field, const std::string& what) {
    // ConfigError prefixes the first field itself.
    if (count_++ == 0) {
      first_field_ = field;
      text_ << what;
    } else {
      text_ << "; " << field << ": " << what;
    }
  }
  void raise() const {
    if (count_ == 0) return;
    throw ConfigError(first_field_, text_.str());
  }

 private:
  std::string first_field_;
  std::ostringstream text_;
  int count_ = 0;
};

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

bool sorted_nonnegative(const std::vector<double>& v) {
  if (!std::is_sorted(v.begin(), v.end())) return false;
  return std::all_of(v.begin(), v.end(),
                     [](double t) { return t >= 0.0 && std::isfinite(t); });
}

}  // namespace

void ExperimentConfig::validate() const {
  Problems p;
  for (int d : lattice_dims) {
    if (d < 1) {
      p.add("lattice_dims", "every dimension must be >= 1");
      break;
    }
  }
  if (!positive(spacing_um)) p.add("spacing_um", "must be > 0");
  if (!positive(wavelength_um)) p.add("wavelength_um", "must be > 0");
  if (!positive(gamma1_per_us)) p.add("gamma1_per_us", "must be > 0");
  if (k0_direction && !(k0_direction->norm() > 0.0 && k0_direction->allFinite())) {
    p.add("k0_direction", "must be a non-zero finite vector");
  }
  if (grid.n_polar < 2) p.add("grid.n_polar", "must be >= 2");
  if (grid.n_azimuth < 2) p.add("grid.n_azimuth", "must be >= 2");
  if (times_us.empty()) p.add("times_us", "schedule is empty");
  if (!sorted_nonnegative(times_us)) p.add("times_us", "must be ascending and >= 0");
  if (snapshot_times_us && !sorted_nonnegative(*snapshot_times_us)) {
    p.add("snapshot_times_us", "must be ascending and >= 0");
  }
  if (!sorted_nonnegative(angular_times_us)) {
    p.add("angular_times_us", "must be ascending and >= 0");
  }
  if (perturbation.removal_indices && perturbation.removal_count) {
    p.add("perturbation", "removal_indices and removal_count are exclusive");
  }
  if (!(perturbation.jitter_sigma_um >= 0.0)) {
    p.add("perturbation.jitter_sigma_um", "must be >= 0");
  }
  const std::size_t n = atom_count();
  if (perturbation.removal_count && *perturbation.removal_count >= n) {
    p.add("perturbation.removal_count", "must be < N=" + std::to_string(n));
  }
  if (perturbation.removal_indices) {
    for (auto idx : *perturbation.removal_indices) {
      if (idx >= n) {
        p.add("perturbation.removal_indices",
              "index " + std::to_string(idx) + " out of range");
        break;
      }
    }
  }
  if (sweep.seeds < 1) p.add("sweep.seeds", "must be >= 1");
  if (output_dir.empty()) p.add("output_dir", "must not be empty");
  if (!(cone_half_angle_rad > 0.0 && cone_half_angle_rad < kPi)) {
    p.add("cone_half_angle_rad", "must lie in (0, pi)");
  }
  if (!(fit_threshold > 0.0 && fit_threshold < 1.0)) {
    p.add("fit_threshold", "must lie in (0, 1)");
  }
  if (threads < 0) p.add("threads", "must be >= 0");
  p.raise();
}

namespace {

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

template <typename T>
T get_as(const json& obj, const std::string& field) {
  try {
    return obj.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("wrong type: ") + e.what());
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& prefix, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = get_as<T>(*it, prefix + key);
}

const json& require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "must be an object");
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  require_object(j, "<root>");
  reject_unknown(j, "",
                 {"lattice_dims", "spacing_um", "wavelength_um", "gamma1_per_us",
                  "k0_direction", "grid", "times_us", "time_schedule",
                  "snapshot_times_us", "angular_times_us", "perturbation", "sweep",
                  "output_dir", "cone_half_angle_rad", "fit_threshold",
                  "grid_convergence_check", "threads"});
  ExperimentConfig c;
  read(j, "lattice_dims", "", c.lattice_dims);
  read(j, "spacing_um", "", c.spacing_um);
  read(j, "wavelength_um", "", c.wavelength_um);
  read(j, "gamma1_per_us", "", c.gamma1_per_us);
  if (auto it = j.find("k0_direction"); it != j.end() && !it->is_null()) {
    const auto v = get_as<std::array<double, 3>>(*it, "k0_direction");
    c.k0_direction = Vec3(v[0], v[1], v[2]);
  }
  if (auto it = j.find("grid"); it != j.end()) {
    const auto& g = require_object(*it, "grid");
    reject_unknown(g, "grid.", {"n_polar", "n_azimuth"});
    read(g, "n_polar", "grid.", c.grid.n_polar);
    read(g, "n_azimuth", "grid.", c.grid.n_azimuth);
  }
  if (j.contains("times_us") && j.contains("time_schedule")) {
    throw ConfigError("time_schedule", "give either times_us or time_schedule");
  }
  read(j, "times_us", "", c.times_us);
  if (auto it = j.find("time_schedule"); it != j.end()) {
    const auto& s = require_object(*it, "time_schedule");
    reject_unknown(s, "time_schedule.", {"start_us", "stop_us", "count"});
    double start = 1e-4;
    double stop = 0.2;
    int count = 200;
    read(s, "start_us", "time_schedule.", start);
    read(s, "stop_us", "time_schedule.", stop);
    read(s, "count", "time_schedule.", count);
    try {
      c.times_us = log_schedule(start, stop, count);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("time_schedule", e.what());
    }
  }
  if (auto it = j.find("snapshot_times_us"); it != j.end() && !it->is_null()) {
    c.snapshot_times_us = get_as<std::vector<double>>(*it, "snapshot_times_us");
  }
  read(j, "angular_times_us", "", c.angular_times_us);
  if (auto it = j.find("perturbation"); it != j.end()) {
    const auto& p = require_object(*it, "perturbation");
    reject_unknown(p, "perturbation.",
                   {"removal_indices", "removal_count", "jitter_sigma_um", "seed"});
    if (auto r = p.find("removal_indices"); r != p.end() && !r->is_null()) {
      c.perturbation.removal_indices =
          get_as<std::vector<std::size_t>>(*r, "perturbation.removal_indices");
    }
    if (auto r = p.find("removal_count"); r != p.end() && !r->is_null()) {
      c.perturbation.removal_count =
          get_as<std::size_t>(*r, "perturbation.removal_count");
    }
    read(p, "jitter_sigma_um", "perturbation.", c.perturbation.jitter_sigma_um);
    read(p, "seed", "perturbation.", c.perturbation.seed);
  }
  if (auto it = j.find("sweep"); it != j.end()) {
    const auto& s = require_object(*it, "sweep");
    reject_unknown(s, "sweep.", {"removal_counts", "seeds", "base_seed"});
    read(s, "removal_counts", "sweep.", c.sweep.removal_counts);
    read(s, "seeds", "sweep.", c.sweep.seeds);
    read(s, "base_seed", "sweep.", c.sweep.base_seed);
  }
  if (auto it = j.find("output_dir"); it != j.end()) {
    c.output_dir = get_as<std::string>(*it, "output_dir");
  }
  read(j, "cone_half_angle_rad", "", c.cone_half_angle_rad);
  read(j, "fit_threshold", "", c.fit_threshold);
  read(j, "grid_convergence_check", "", c.grid_convergence_check);
  read(j, "threads", "", c.threads);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["lattice_dims"] = c.lattice_dims;
  j["spacing_um"] = c.spacing_um;
  j["wavelength_um"] = c.wavelength_um;
  j["gamma1_per_us"] = c.gamma1_per_us;
  if (c.k0_direction) {
    j["k0_direction"] = {c.k0_direction->x(), c.k0_direction->y(), c.k0_direction->z()};
  } else {
    j["k0_direction"] = nullptr;
  }
  j["grid"] = {{"n_polar", c.grid.n_polar}, {"n_azimuth", c.grid.n_azimuth}};
  j["times_us"] = c.times_us;
  if (c.snapshot_times_us) {
    j["snapshot_times_us"] = *c.snapshot_times_us;
  } else {
    j["snapshot_times_us"] = nullptr;
  }
  j["angular_times_us"] = c.angular_times_us;
  json p;
  p["removal_indices"] = c.perturbation.removal_indices
                             ? json(*c.perturbation.removal_indices)
                             : json(nullptr);
  p["removal_count"] = c.perturbation.removal_count
                           ? json(*c.perturbation.removal_count)
                           : json(nullptr);
  p["jitter_sigma_um"] = c.perturbation.jitter_sigma_um;
  p["seed"] = c.perturbation.seed;
  j["perturbation"] = p;
  j["sweep"] = {{"removal_counts", c.sweep.removal_counts},
                {"seeds", c.sweep.seeds},
                {"base_seed", c.sweep.base_seed}};
  j["output_dir"] = c.output_dir.string();
  j["cone_half_angle_rad"] = c.cone_half_angle_rad;
  j["fit_threshold"] = c.fit_threshold;
  j["grid_convergence_check"] = c.grid_convergence_check;
  j["threads"] = c.threads;
  return j;
}

}  // namespace superrad
