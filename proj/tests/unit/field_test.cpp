#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superrad/config.hpp"
#include "superrad/field.hpp"

namespace superrad {
namespace {

struct Prepared {
  SampleGeometry sample;
  EigenSystem eigen;
  ModeFunction modes;
};

Prepared prepare(const SampleGeometry& s, std::shared_ptr<const AngularGrid> grid) {
  auto es = diagonalize(build_kernel(s));
  auto modes = mode_projection(s, es, std::move(grid));
  return {s, std::move(es), std::move(modes)};
}

std::shared_ptr<const AngularGrid> grid_for(const SampleGeometry& s, int np, int na,
                                            std::optional<double> brk = 0.3) {
  return std::make_shared<const AngularGrid>(
      build_angular_grid(np, na, s.k0_direction(), brk));
}

const Prepared& reference() {
  static const Prepared p = [] {
    const auto s = build_lattice({7, 7, 20}, 0.37);
    return prepare(s, grid_for(s, 64, 64));
  }();
  return p;
}

TEST(ModeProjection, SingleAtomAtOriginIsFlat) {
  const auto s = build_lattice({1, 1, 1}, 0.37);
  const auto p = prepare(s, grid_for(s, 8, 8));
  const Complex a0 = p.modes.projections()(0, 0);
  EXPECT_NEAR(std::abs(a0), 1.0, 1e-15);
  EXPECT_LE((p.modes.projections().array() - a0).abs().maxCoeff(), 1e-15);
}

TEST(ModeProjection, ReferenceSampleUnitarityAndOrthogonality) {
  const auto diag = check_projection(reference().modes, 20);
  EXPECT_LE(diag.unitarity_error, 1e-8);
  EXPECT_LE(diag.orthogonality_error, 1e-3);
}

TEST(ModeProjection, MatchesDirectSumAndForwardIdentity) {
  const auto s = build_lattice({3, 3, 5}, 0.37);
  auto grid = std::make_shared<AngularGrid>(build_angular_grid(4, 4));
  const auto es = diagonalize(build_kernel(s));
  const auto modes = mode_projection(s, es, grid);
  const auto& n = grid->directions()[3];
  ComplexVector direct = ComplexVector::Zero(es.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Complex phase = std::exp(Complex(0, (s.k0_vector() - s.k0_magnitude() * n).dot(s.position(j))));
    direct += phase * es.eigenvectors.row(j).transpose();
  }
  EXPECT_LE((modes.projections().row(3).transpose() - direct).cwiseAbs().maxCoeff(), 1e-12);
  // At n = k0_hat every phase vanishes, so A_m = sum_j V_jm = sqrt(N) conj(c_m).
  const ComplexVector forward = es.eigenvectors.colwise().sum().transpose();
  EXPECT_NEAR(forward.squaredNorm(), double(s.size()), 1e-10);
  EXPECT_LE((forward - std::sqrt(double(s.size())) * es.mode_coefficients.conjugate())
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(AngularDensity, SingleAtomIsIsotropic) {
  const auto s = build_lattice({1, 1, 1}, 0.37);
  const auto p = prepare(s, grid_for(s, 16, 16));
  const auto profile = angular_density(p.modes, kInfiniteTime);
  for (double d : profile.density) EXPECT_NEAR(d, 1.0 / kFourPi, 1e-10);
  EXPECT_NEAR(profile.total, 1.0, 1e-12);
  const double t = 1.0 / (2.0 * 18.5);
  const auto partial = angular_density(p.modes, t);
  EXPECT_NEAR(partial.total, 1.0 - std::exp(-1.0), 1e-12);
}

TEST(AngularDensity, ZeroAtTimeZero) {
  const auto profile = angular_density(reference().modes, 0.0);
  EXPECT_EQ(profile.total, 0.0);
  for (double d : profile.density) EXPECT_EQ(d, 0.0);
  EXPECT_THROW(angular_density(reference().modes, -1.0), std::invalid_argument);
  EXPECT_THROW(cone_fraction(profile, Vec3::UnitZ(), 0.3), std::invalid_argument);
}

TEST(AngularDensity, ReferenceSampleEmitsEverythingForward) {
  const auto& p = reference();
  const auto profile = angular_density(p.modes, kInfiniteTime);
  EXPECT_NEAR(profile.total, 1.0, 1e-6);
  EXPECT_LE(profile.max_imag_residue, 1e-12);
  for (double d : profile.density) EXPECT_GE(d, -1e-12);
  const auto peak = std::max_element(profile.density.begin(), profile.density.end()) -
                    profile.density.begin();
  EXPECT_GT(p.modes.grid().directions()[peak].dot(p.sample.k0_direction()), std::cos(0.3));
  EXPECT_GT(profile.density[peak], 100.0 / kFourPi);
}

// The eigen-route density against RK4 amplitudes integrated in time.
TEST(AngularDensity, MatchesTimeDomainOracle) {
  std::mt19937_64 rng(21);
  const auto s = oracle::random_sample(6, rng);
  const auto p = prepare(s, grid_for(s, 6, 5));
  const double t = 0.08;
  const auto profile = angular_density(p.modes, t);
  for (std::size_t i : {0u, 7u, 14u, 29u}) {
    const double ref =
        oracle::time_domain_density(s, p.modes.grid().directions()[i], t, 4000);
    EXPECT_NEAR(profile.density[i], ref, 1e-9 * std::max(1.0, ref)) << i;
  }
}

// Property: emitted + surviving = 1 at every time, on random samples and the
// reference lattice.
TEST(AngularDensity, UnitarityClosure) {
  std::mt19937_64 rng(8);
  std::vector<Prepared> samples;
  for (int i = 0; i < 5; ++i) {
    const auto s = oracle::random_sample(
        std::uniform_int_distribution<std::size_t>(2, 40)(rng), rng);
    samples.push_back(prepare(s, grid_for(s, 48, 48)));
  }
  const std::vector<double> times{1e-4, 0.003, 0.01, 0.05, 0.1, 0.5};
  for (const auto& p : samples) {
    for (double t : times) {
      const auto profile = angular_density(p.modes, t);
      EXPECT_NEAR(profile.total + survival_probability(p.eigen, t, 18.5), 1.0, 1e-6);
    }
  }
  for (double t : {0.01, 0.1}) {
    const auto profile = angular_density(reference().modes, t);
    EXPECT_NEAR(profile.total + survival_probability(reference().eigen, t, 18.5), 1.0, 1e-6);
  }
}

TEST(ConeFraction, FullSphereAndIsotropicCap) {
  const auto s = build_lattice({1, 1, 1}, 0.37);
  const auto p = prepare(s, grid_for(s, 32, 16));
  const auto profile = angular_density(p.modes, kInfiniteTime);
  EXPECT_NEAR(cone_fraction(profile, Vec3::UnitZ(), kPi), 1.0, 1e-12);
  const double expected = (1.0 - std::cos(0.3)) / 2.0;
  EXPECT_NEAR(expected, 0.02233, 1e-5);
  EXPECT_NEAR(cone_fraction(profile, Vec3::UnitZ(), 0.3), expected, 1e-10);
  // Only the forward cap is a node boundary, so the backward lobe is approximate.
  const double backward = cone_fraction(profile, -Vec3::UnitZ(), 0.3);
  EXPECT_NEAR(backward, expected, 5e-3);
  EXPECT_NEAR(cone_fraction(profile, Vec3::UnitZ(), 0.3, ConeSense::axial),
              expected + backward, 1e-12);
  EXPECT_THROW(cone_fraction(profile, Vec3::UnitZ(), 0.0), std::invalid_argument);
}

TEST(ConeFraction, ReferenceSampleReferenceValue) {
  const auto& p = reference();
  const auto profile = angular_density(p.modes, kInfiniteTime);
  // Independent numpy evaluation on the same split grid, and on a grid with
  // twice the resolution: both give 0.93151874743106.
  EXPECT_NEAR(cone_fraction(profile, p.sample.k0_direction(), 0.3), 0.9315187474310641, 1e-9);
}

TEST(ModeOverlap, SelfOverlapIsOne) {
  EXPECT_NEAR(mode_overlap(reference().modes, reference().modes), 1.0, 1e-10);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    const auto s = oracle::random_sample(15, rng);
    const auto p = prepare(s, grid_for(s, 24, 24));
    EXPECT_NEAR(mode_overlap(p.modes, p.modes), 1.0, 1e-10);
  }
}

TEST(ModeOverlap, CoincidentSingleAtomsOverlapFully) {
  const auto s = build_lattice({1, 1, 1}, 0.37);
  const auto grid = grid_for(s, 8, 8);
  const auto a = prepare(s, grid);
  const auto b = prepare(s.with_positions({Vec3::Zero()}), grid);
  EXPECT_NEAR(mode_overlap(a.modes, b.modes), 1.0, 1e-12);
}

// Quadrature route against the analytic angular Gram matrix.
TEST(ModeOverlap, MatchesAnalyticAngularOracleAndIsSymmetric) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto full = oracle::random_sample(12, rng);
    PerturbationSpec spec;
    spec.removal_count = 1 + trial % 3;
    spec.seed = rng();
    const auto reduced = jitter_positions(remove_atoms(full, spec), 0.05, spec.seed);
    const auto grid = grid_for(full, 48, 48);
    const auto a = prepare(full, grid);
    const auto b = prepare(reduced, grid);
    const double ab = mode_overlap(a.modes, b.modes);
    const double ba = mode_overlap(b.modes, a.modes);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_LE(ab, 1.0 + 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, oracle::analytic_overlap(full, reduced), 1e-9) << trial;
  }
}

TEST(ModeOverlap, RejectsMismatchedGrids) {
  const auto s = build_lattice({2, 2, 2}, 0.37);
  const auto a = prepare(s, grid_for(s, 8, 8));
  const auto b = prepare(s, grid_for(s, 10, 8));
  EXPECT_THROW(mode_overlap(a.modes, b.modes), std::invalid_argument);
}

TEST(ModeOverlap, ReferenceSampleRobustToTenRemovals) {
  const auto& p = reference();
  PerturbationSpec spec;
  spec.removal_count = 10;
  spec.seed = 1;
  const auto reduced = prepare(remove_atoms(p.sample, spec), p.modes.grid_ptr());
  EXPECT_GE(mode_overlap(p.modes, reduced.modes), 0.99);
}

TEST(GridConvergence, DoublingChangesObservablesLittle) {
  const auto s = build_lattice({4, 4, 10}, 0.37);
  PerturbationSpec spec;
  spec.removal_count = 5;
  const auto r = remove_atoms(s, spec);
  double cone[2];
  double overlap[2];
  for (int level = 0; level < 2; ++level) {
    const auto grid = grid_for(s, 32 << level, 32 << level);
    const auto a = prepare(s, grid);
    const auto b = prepare(r, grid);
    cone[level] = cone_fraction(angular_density(a.modes, kInfiniteTime), s.k0_direction(), 0.3);
    overlap[level] = mode_overlap(a.modes, b.modes);
  }
  EXPECT_LT(std::abs(cone[1] - cone[0]), 1e-4);
  EXPECT_LT(std::abs(overlap[1] - overlap[0]), 1e-4);
}

}  // namespace
}  // namespace superrad
