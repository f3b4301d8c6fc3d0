#include "maxstab/zonoid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace maxstab {

ZonoidPolyline envelope_bivariate(const ModelSpec& m, int n_angles, double quad_tol) {
  if (m.dim() != 2)
    throw std::invalid_argument("envelope_bivariate: model must be bivariate");
  if (n_angles < 2)
    throw std::invalid_argument("envelope_bivariate: need at least two angles");
  const Family fam = m.family();
  if (fam != Family::dirichlet && fam != Family::husler_reiss)
    throw std::invalid_argument(
        "envelope_bivariate: boundary is polygonal for this family, use "
        "choquet_zonoid_polyline");

  const double half_pi = std::numbers::pi / 2.0;
  const double eps = std::numbers::pi / (8.0 * n_angles);
  ZonoidPolyline poly;
  poly.label = family_name(fam);
  poly.angles.push_back(0.0);
  poly.points.push_back({1.0, 0.0});
  for (int k = 0; k < n_angles; ++k) {
    const double alpha =
        eps + (half_pi - 2.0 * eps) * (n_angles == 1 ? 0.5 : double(k) / (n_angles - 1));
    const double x1 = std::cos(alpha), x2 = std::sin(alpha);
    BivariateEll e;
    if (fam == Family::husler_reiss)
      e = hr_bivariate_ell(m.gamma()(0, 1), x1, x2);
    else
      e = dirichlet_bivariate_ell(m.alpha()[0], m.alpha()[1], x1, x2, quad_tol);
    poly.angles.push_back(alpha);
    poly.points.push_back({e.d1, e.d2});
  }
  poly.angles.push_back(half_pi);
  poly.points.push_back({0.0, 1.0});
  return poly;
}

ZonoidPolyline polyline_from_vertices(std::vector<std::array<double, 2>> pts, std::string label) {
  ZonoidPolyline poly;
  poly.points = std::move(pts);
  poly.label = std::move(label);
  return poly;
}

ZonoidPolyline choquet_zonoid_polyline(const ModelSpec& m) {
  if (m.dim() != 2)
    throw std::invalid_argument("choquet_zonoid_polyline: model must be bivariate");
  double theta12;
  switch (m.family()) {
    case Family::choquet: theta12 = m.theta().values[3]; break;
    case Family::independent: theta12 = 2.0; break;
    case Family::fully_dependent: theta12 = 1.0; break;
    default:
      throw std::invalid_argument(
          "choquet_zonoid_polyline: model has no spectral coefficient table");
  }
  std::vector<std::array<double, 2>> pts;
  pts.push_back({1.0, 0.0});
  if (theta12 > 1.0) {
    pts.push_back({1.0, theta12 - 1.0});
    if (theta12 < 2.0) pts.push_back({theta12 - 1.0, 1.0});
  }
  pts.push_back({0.0, 1.0});
  ZonoidPolyline poly = polyline_from_vertices(std::move(pts), family_name(m.family()));
  return poly;
}

double support_function_of_polyline(const ZonoidPolyline& poly, std::span<const double> u) {
  if (u.size() != 2)
    throw std::invalid_argument("support_function_of_polyline: direction must be bivariate");
  double h = 0.0;  // the origin belongs to every max-zonoid closure
  for (const auto& p : poly.points) h = std::max(h, u[0] * p[0] + u[1] * p[1]);
  return h;
}

NestingReport nesting_check(const ZonoidPolyline& p1, const ZonoidPolyline& p2, double tol,
                            int n_directions) {
  if (n_directions <= 0) n_directions = 720;
  NestingReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  const double half_pi = std::numbers::pi / 2.0;
  for (int k = 0; k <= n_directions; ++k) {
    const double alpha = half_pi * double(k) / n_directions;
    const double u[2] = {std::cos(alpha), std::sin(alpha)};
    const double margin =
        support_function_of_polyline(p1, u) - support_function_of_polyline(p2, u);
    if (margin > rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_direction = {u[0], u[1]};
    }
  }
  rep.nested = rep.worst_margin <= tol;
  return rep;
}

}  // namespace maxstab
