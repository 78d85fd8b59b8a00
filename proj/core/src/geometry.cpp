#include "superrad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "superrad/random.hpp"

namespace superrad {

namespace {

bool has_coincident(const std::vector<Vec3>& positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if ((positions[i] - positions[j]).squaredNorm() == 0.0) return true;
    }
  }
  return false;
}

}  // namespace

SampleGeometry::SampleGeometry(std::vector<Vec3> positions, double k0_magnitude,
                               Vec3 k0_direction, double gamma1,
                               CoincidencePolicy coincidence)
    : positions_(std::move(positions)),
      k0_magnitude_(k0_magnitude),
      k0_direction_(k0_direction),
      gamma1_(gamma1),
      coincidence_(coincidence) {
  if (!(k0_magnitude_ > 0.0) || !std::isfinite(k0_magnitude_)) {
    throw std::invalid_argument("k0 magnitude must be positive and finite");
  }
  if (!(gamma1_ > 0.0) || !std::isfinite(gamma1_)) {
    throw std::invalid_argument("gamma1 must be positive and finite");
  }
  if (std::abs(k0_direction_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("k0 direction must be a unit vector");
  }
  for (const auto& r : positions_) {
    if (!r.allFinite()) throw std::invalid_argument("non-finite atom position");
  }
  if (coincidence_ == CoincidencePolicy::reject && has_coincident(positions_)) {
    throw std::invalid_argument("sample contains coincident atoms");
  }
}

SampleGeometry SampleGeometry::with_positions(std::vector<Vec3> positions) const {
  return SampleGeometry(std::move(positions), k0_magnitude_, k0_direction_,
                        gamma1_, coincidence_);
}

bool operator==(const SampleGeometry& a, const SampleGeometry& b) {
  return a.positions_ == b.positions_ && a.k0_magnitude_ == b.k0_magnitude_ &&
         a.k0_direction_ == b.k0_direction_ && a.gamma1_ == b.gamma1_;
}

void PerturbationSpec::validate() const {
  if (removal_indices && removal_count) {
    throw std::invalid_argument(
        "perturbation: removal_indices and removal_count are exclusive");
  }
  if (!(jitter_sigma_um >= 0.0)) {
    throw std::invalid_argument("perturbation: jitter sigma must be >= 0");
  }
}

Vec3 longest_axis(std::array<int, 3> dims) {
  int best = 0;
  for (int a = 1; a < 3; ++a) {
    if (dims[a] >= dims[best]) best = a;
  }
  return Vec3::Unit(best);
}

SampleGeometry build_lattice(std::array<int, 3> dims, double spacing_um,
                             const PhysicalConstants& constants) {
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("lattice dims must be >= 1");
  }
  if (!(spacing_um > 0.0) || !std::isfinite(spacing_um)) {
    throw std::invalid_argument("lattice spacing must be positive");
  }
  if (!(constants.wavelength_um > 0.0)) {
    throw std::invalid_argument("wavelength must be positive");
  }

  const Vec3 centre(0.5 * (dims[0] - 1), 0.5 * (dims[1] - 1),
                    0.5 * (dims[2] - 1));
  std::vector<Vec3> positions;
  positions.reserve(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
  for (int x = 0; x < dims[0]; ++x) {
    for (int y = 0; y < dims[1]; ++y) {
      for (int z = 0; z < dims[2]; ++z) {
        positions.emplace_back(spacing_um * (Vec3(x, y, z) - centre));
      }
    }
  }

  Vec3 direction = constants.k0_direction.value_or(longest_axis(dims));
  const double norm = direction.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("k0 direction is zero");
  direction /= norm;

  return SampleGeometry(std::move(positions),
                        2.0 * kPi / constants.wavelength_um, direction,
                        constants.gamma1_per_us);
}

std::vector<std::size_t> surviving_indices(std::size_t n,
                                           const PerturbationSpec& spec) {
  spec.validate();
  std::vector<bool> removed(n, false);

  if (spec.removal_indices) {
    for (std::size_t idx : *spec.removal_indices) {
      if (idx >= n) {
        throw std::invalid_argument("removal index " + std::to_string(idx) +
                                    " out of range for N=" + std::to_string(n));
      }
      removed[idx] = true;
    }
  } else if (spec.removal_count && *spec.removal_count > 0) {
    const std::size_t k = *spec.removal_count;
    if (k >= n) {
      throw std::invalid_argument("removal count " + std::to_string(k) +
                                  " must be < N=" + std::to_string(n));
    }
    // Partial Fisher-Yates: the first k slots become the removed set.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RandomStream rng(mix_seed(spec.seed, kRemovalStream));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(order[i], order[j]);
      removed[order[i]] = true;
    }
  }

  std::vector<std::size_t> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!removed[i]) kept.push_back(i);
  }
  if (kept.empty()) throw std::invalid_argument("perturbation removes every atom");
  return kept;
}

SampleGeometry remove_atoms(const SampleGeometry& sample,
                            const PerturbationSpec& spec) {
  const auto kept = surviving_indices(sample.size(), spec);
  std::vector<Vec3> positions;
  positions.reserve(kept.size());
  for (std::size_t i : kept) positions.push_back(sample.position(i));
  return sample.with_positions(std::move(positions));
}

SampleGeometry jitter_positions(const SampleGeometry& sample, double sigma_um,
                                std::uint64_t seed) {
  if (!(sigma_um >= 0.0)) {
    throw std::invalid_argument("jitter sigma must be >= 0");
  }
  if (sigma_um == 0.0) return sample;
  RandomStream rng(mix_seed(seed, kJitterStream));
  std::vector<Vec3> positions = sample.positions();
  for (auto& r : positions) {
    for (int a = 0; a < 3; ++a) r[a] += sigma_um * rng.gaussian();
  }
  return sample.with_positions(std::move(positions));
}

SampleGeometry apply_perturbation(const SampleGeometry& sample,
                                  const PerturbationSpec& spec) {
  return jitter_positions(remove_atoms(sample, spec), spec.jitter_sigma_um,
                          spec.seed);
}

double max_pairwise_distance(const SampleGeometry& sample) {
  const auto& p = sample.positions();
  double best = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      best = std::max(best, (p[i] - p[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double min_pairwise_distance(const SampleGeometry& sample) {
  const auto& p = sample.positions();
  if (p.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      best = std::min(best, (p[i] - p[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

}  // namespace superrad
