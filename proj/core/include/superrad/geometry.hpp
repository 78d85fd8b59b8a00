#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "superrad/common.hpp"

namespace superrad {

/// Physical constants shared by every sample. Defaults are the 87Rb D1 line
/// (5S -> 5P1/2, 0.795 um) with 2*gamma1 = 37 us^-1.
struct PhysicalConstants {
  double wavelength_um = 0.795;
  double gamma1_per_us = 18.5;
  /// Unset means "along the longest lattice axis".
  std::optional<Vec3> k0_direction;
};

enum class CoincidencePolicy { reject, allow };

/// Atomic positions together with the phase-matching wavevector and the
/// single-atom amplitude decay rate gamma1 (half the population decay rate).
///
/// Immutable once constructed. Units: um for positions, rad/um for k0,
/// us^-1 for gamma1.
class SampleGeometry {
 public:
  SampleGeometry(std::vector<Vec3> positions, double k0_magnitude,
                 Vec3 k0_direction, double gamma1,
                 CoincidencePolicy coincidence = CoincidencePolicy::reject);

  std::size_t size() const noexcept { return positions_.size(); }
  const std::vector<Vec3>& positions() const noexcept { return positions_; }
  const Vec3& position(std::size_t j) const { return positions_.at(j); }
  double k0_magnitude() const noexcept { return k0_magnitude_; }
  const Vec3& k0_direction() const noexcept { return k0_direction_; }
  Vec3 k0_vector() const { return k0_magnitude_ * k0_direction_; }
  double gamma1() const noexcept { return gamma1_; }
  double wavelength() const noexcept { return 2.0 * kPi / k0_magnitude_; }

  /// Same constants, different atoms. Coincidence policy is inherited.
  SampleGeometry with_positions(std::vector<Vec3> positions) const;

  bool allows_coincident() const noexcept {
    return coincidence_ == CoincidencePolicy::allow;
  }

  friend bool operator==(const SampleGeometry& a, const SampleGeometry& b);

 private:
  std::vector<Vec3> positions_;
  double k0_magnitude_;
  Vec3 k0_direction_;
  double gamma1_;
  CoincidencePolicy coincidence_;
};

struct PerturbationSpec {
  std::optional<std::vector<std::size_t>> removal_indices;
  std::optional<std::size_t> removal_count;
  double jitter_sigma_um = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument if both removal fields are set or the
  /// jitter is negative.
  void validate() const;
};

/// Cubic lattice of dims[0]*dims[1]*dims[2] atoms centred on the origin.
/// Atom index runs fastest along z, then y, then x.
SampleGeometry build_lattice(std::array<int, 3> dims, double spacing_um,
                             const PhysicalConstants& constants = {});

/// Unit vector along the lattice axis with the largest extent; ties go to the
/// later axis so that a cube points along z.
Vec3 longest_axis(std::array<int, 3> dims);

/// Deletes atoms either by explicit index or by drawing `removal_count`
/// distinct indices uniformly at random from `spec.seed`. The jitter field of
/// `spec` is ignored here; see jitter_positions.
SampleGeometry remove_atoms(const SampleGeometry& sample,
                            const PerturbationSpec& spec);

/// Adds independent N(0, sigma^2) displacements to every coordinate.
SampleGeometry jitter_positions(const SampleGeometry& sample, double sigma_um,
                                std::uint64_t seed);

/// remove_atoms followed by jitter_positions (same seed stream family).
SampleGeometry apply_perturbation(const SampleGeometry& sample,
                                  const PerturbationSpec& spec);

/// Indices that survive remove_atoms with the same arguments, ascending.
std::vector<std::size_t> surviving_indices(std::size_t n,
                                           const PerturbationSpec& spec);

double max_pairwise_distance(const SampleGeometry& sample);
double min_pairwise_distance(const SampleGeometry& sample);

}  // namespace superrad
