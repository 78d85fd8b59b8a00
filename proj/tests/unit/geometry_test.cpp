#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superrad/geometry.hpp"

namespace superrad {
namespace {

TEST(BuildLattice, SingleAtomSitsAtOrigin) {
  const auto s = build_lattice({1, 1, 1}, 0.37);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.position(0), Vec3::Zero());
}

TEST(BuildLattice, ReferenceLatticeHas980Atoms) {
  const auto s = build_lattice({7, 7, 20}, 0.37);
  EXPECT_EQ(s.size(), 980u);
  EXPECT_EQ(s.k0_direction(), Vec3::UnitZ());
  EXPECT_DOUBLE_EQ(s.gamma1(), 18.5);
  EXPECT_NEAR(s.k0_magnitude(), 2.0 * kPi / 0.795, 1e-15);
}

TEST(BuildLattice, IsCentredOnOrigin) {
  const auto s = build_lattice({3, 4, 5}, 0.5);
  Vec3 sum = Vec3::Zero();
  for (const auto& r : s.positions()) sum += r;
  EXPECT_LT(sum.norm(), 1e-12);
}

TEST(BuildLattice, MaximumDistanceIsBoxDiagonal) {
  const auto s = build_lattice({7, 7, 20}, 0.37);
  const double expected =
      std::sqrt(2.0 * std::pow(6 * 0.37, 2) + std::pow(19 * 0.37, 2));
  EXPECT_NEAR(max_pairwise_distance(s), expected, 1e-12);
  EXPECT_NEAR(expected, 7.70, 0.005);
}

TEST(BuildLattice, NearestNeighboursAreOneSpacingApart) {
  const auto s = build_lattice({4, 3, 5}, 0.37);
  EXPECT_GE(min_pairwise_distance(s), 0.37 - 1e-12);
  EXPECT_EQ(s.size(), 60u);
}

TEST(BuildLattice, DefaultAxisIsLongestDimension) {
  EXPECT_EQ(longest_axis({20, 7, 7}), Vec3::UnitX());
  EXPECT_EQ(longest_axis({7, 20, 7}), Vec3::UnitY());
  EXPECT_EQ(longest_axis({3, 3, 3}), Vec3::UnitZ());
}

TEST(BuildLattice, ExplicitDirectionIsNormalised) {
  PhysicalConstants c;
  c.k0_direction = Vec3(1.0, 1.0, 0.0);
  const auto s = build_lattice({2, 2, 2}, 0.4, c);
  EXPECT_NEAR(s.k0_direction().norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.k0_direction().x(), std::sqrt(0.5), 1e-15);
}

TEST(BuildLattice, RejectsBadArguments) {
  EXPECT_THROW(build_lattice({0, 1, 1}, 0.37), std::invalid_argument);
  EXPECT_THROW(build_lattice({1, -2, 1}, 0.37), std::invalid_argument);
  EXPECT_THROW(build_lattice({1, 1, 1}, 0.0), std::invalid_argument);
  EXPECT_THROW(build_lattice({1, 1, 1}, -0.37), std::invalid_argument);
}

TEST(SampleGeometry, EnforcesInvariants) {
  const std::vector<Vec3> two{Vec3::Zero(), Vec3::UnitX()};
  EXPECT_THROW(SampleGeometry(two, 0.0, Vec3::UnitZ(), 1.0), std::invalid_argument);
  EXPECT_THROW(SampleGeometry(two, 1.0, Vec3::UnitZ(), -1.0), std::invalid_argument);
  EXPECT_THROW(SampleGeometry(two, 1.0, Vec3(0, 0, 1.1), 1.0), std::invalid_argument);
  const std::vector<Vec3> same{Vec3::Zero(), Vec3::Zero()};
  EXPECT_THROW(SampleGeometry(same, 1.0, Vec3::UnitZ(), 1.0), std::invalid_argument);
  EXPECT_NO_THROW(
      SampleGeometry(same, 1.0, Vec3::UnitZ(), 1.0, CoincidencePolicy::allow));
}

TEST(RemoveAtoms, ZeroCountIsIdentity) {
  const auto s = build_lattice({3, 3, 4}, 0.37);
  PerturbationSpec spec;
  spec.removal_count = 0;
  EXPECT_EQ(remove_atoms(s, spec), s);
  EXPECT_EQ(remove_atoms(s, PerturbationSpec{}), s);
}

TEST(RemoveAtoms, RemovesRequestedNumberFromOriginals) {
  const auto s = build_lattice({7, 7, 20}, 0.37);
  PerturbationSpec spec;
  spec.removal_count = 10;
  spec.seed = 42;
  const auto r = remove_atoms(s, spec);
  ASSERT_EQ(r.size(), 970u);
  EXPECT_EQ(r.k0_vector(), s.k0_vector());
  EXPECT_EQ(r.gamma1(), s.gamma1());

  const auto kept = surviving_indices(s.size(), spec);
  ASSERT_EQ(kept.size(), 970u);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EXPECT_EQ(r.position(i), s.position(kept[i]));
  }
  EXPECT_EQ(std::set<std::size_t>(kept.begin(), kept.end()).size(), kept.size());
}

TEST(RemoveAtoms, IsDeterministicInSeed) {
  const auto s = build_lattice({7, 7, 20}, 0.37);
  PerturbationSpec spec;
  spec.removal_count = 30;
  spec.seed = 7;
  EXPECT_EQ(remove_atoms(s, spec), remove_atoms(s, spec));
  auto other = spec;
  other.seed = 8;
  EXPECT_NE(surviving_indices(s.size(), spec), surviving_indices(s.size(), other));
}

TEST(RemoveAtoms, ExplicitIndices) {
  const auto s = build_lattice({2, 2, 2}, 1.0);
  PerturbationSpec spec;
  spec.removal_indices = std::vector<std::size_t>{0, 7};
  const auto r = remove_atoms(s, spec);
  ASSERT_EQ(r.size(), 6u);
  EXPECT_EQ(r.position(0), s.position(1));
  EXPECT_EQ(r.position(5), s.position(6));
}

TEST(RemoveAtoms, RejectsInvalidSpecs) {
  const auto s = build_lattice({2, 2, 2}, 1.0);
  PerturbationSpec out_of_range;
  out_of_range.removal_indices = std::vector<std::size_t>{8};
  EXPECT_THROW(remove_atoms(s, out_of_range), std::invalid_argument);

  PerturbationSpec too_many;
  too_many.removal_count = 8;
  EXPECT_THROW(remove_atoms(s, too_many), std::invalid_argument);

  PerturbationSpec both;
  both.removal_count = 1;
  both.removal_indices = std::vector<std::size_t>{0};
  EXPECT_THROW(remove_atoms(s, both), std::invalid_argument);
}

TEST(JitterPositions, ZeroSigmaIsIdentity) {
  const auto s = build_lattice({3, 3, 3}, 0.37);
  EXPECT_EQ(jitter_positions(s, 0.0, 1), s);
}

TEST(JitterPositions, MeanSquareDisplacementMatchesSigma) {
  const auto s = build_lattice({7, 7, 20}, 0.37);
  const double sigma = 0.01;
  const auto j = jitter_positions(s, sigma, 123);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += (j.position(i) - s.position(i)).squaredNorm();
  }
  const double msd = sum / (3.0 * s.size());
  EXPECT_NEAR(msd, sigma * sigma, 0.2 * sigma * sigma);
}

TEST(JitterPositions, IsDeterministicAndRejectsNegativeSigma) {
  const auto s = build_lattice({3, 3, 3}, 0.37);
  EXPECT_EQ(jitter_positions(s, 0.02, 5), jitter_positions(s, 0.02, 5));
  EXPECT_FALSE(jitter_positions(s, 0.02, 5) == jitter_positions(s, 0.02, 6));
  EXPECT_THROW(jitter_positions(s, -0.1, 5), std::invalid_argument);
}

// Property: removal keeps exactly N-k atoms and the physical constants,
// for random lattices, counts and seeds.
TEST(RemoveAtoms, CardinalityProperty) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> dim(1, 6);
    const auto s = build_lattice({dim(rng), dim(rng), dim(rng) + 1}, 0.37);
    PerturbationSpec spec;
    spec.removal_count = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
    spec.seed = rng();
    const auto r = remove_atoms(s, spec);
    EXPECT_EQ(r.size(), s.size() - *spec.removal_count);
    EXPECT_EQ(r.k0_vector(), s.k0_vector());
    EXPECT_EQ(r.gamma1(), s.gamma1());
  }
}

}  // namespace
}  // namespace superrad
