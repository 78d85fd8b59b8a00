#include "superrad/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace superrad {

namespace {

// Returns (P_n(x), P_{n-1}(x)) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pn1] = legendre_pair(n, x);
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto [pn, pn1] = legendre_pair(n, x);
    dp = n * (x * pn - pn1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

int polar_cap_nodes(int n_polar) { return std::max(1, n_polar / 4); }

namespace {

// Right-handed orthonormal frame (e1, e2, axis).
std::pair<Vec3, Vec3> transverse_frame(const Vec3& axis) {
  const Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (helper - helper.dot(axis) * axis).normalized();
  return {e1, axis.cross(e1)};
}

}  // namespace

AngularGrid build_angular_grid(int n_polar, int n_azimuth, const Vec3& polar_axis,
                               std::optional<double> polar_break) {
  if (n_polar < 2 || n_azimuth < 2) {
    throw std::invalid_argument("build_angular_grid: need n_polar >= 2 and n_azimuth >= 2");
  }
  const double axis_norm = polar_axis.norm();
  if (!(axis_norm > 0.0)) throw std::invalid_argument("build_angular_grid: zero axis");
  if (polar_break && !(*polar_break > 0.0 && *polar_break < kPi)) {
    throw std::invalid_argument("build_angular_grid: polar break must lie in (0, pi)");
  }

  // Polar nodes in u = cos(theta), ascending.
  std::vector<double> u;
  std::vector<double> wu;
  auto append_panel = [&](int count, double lo, double hi) {
    const auto rule = gauss_legendre(count);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    for (int i = 0; i < count; ++i) {
      u.push_back(mid + half * rule.nodes[i]);
      wu.push_back(half * rule.weights[i]);
    }
  };
  if (polar_break) {
    const int cap = polar_cap_nodes(n_polar);
    const double edge = std::cos(*polar_break);
    append_panel(n_polar - cap, -1.0, edge);
    append_panel(cap, edge, 1.0);
  } else {
    append_panel(n_polar, -1.0, 1.0);
  }

  AngularGrid grid;
  grid.polar_axis_ = polar_axis / axis_norm;
  grid.n_polar_ = n_polar;
  grid.n_azimuth_ = n_azimuth;
  grid.polar_break_ = polar_break;
  const auto [e1, e2] = transverse_frame(grid.polar_axis_);

  const std::size_t total = static_cast<std::size_t>(n_polar) * n_azimuth;
  grid.directions_.reserve(total);
  grid.weights_.reserve(total);
  grid.theta_.reserve(total);
  grid.phi_.reserve(total);
  const double dphi = 2.0 * kPi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double ct = u[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double theta = std::acos(ct);
    for (int k = 0; k < n_azimuth; ++k) {
      const double phi = k * dphi;
      Vec3 n = st * std::cos(phi) * e1 + st * std::sin(phi) * e2 + ct * grid.polar_axis_;
      n.normalize();
      grid.directions_.push_back(n);
      grid.weights_.push_back(wu[i] * dphi);
      grid.theta_.push_back(theta);
      grid.phi_.push_back(phi);
    }
  }
  return grid;
}

}  // namespace superrad
