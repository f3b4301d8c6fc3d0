#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "maxstab/models.hpp"

namespace maxstab {

// Boundary polyline of a bivariate max-zonoid, ordered from (1,0) to (0,1).
// Envelope polylines also carry the direction angle of each support point.
struct ZonoidPolyline {
  std::vector<double> angles;                  // empty for vertex polylines
  std::vector<std::array<double, 2>> points;
  std::string label;
};

// Envelope of the support lines x1 cos(a) + x2 sin(a) = ell(cos a, sin a):
// the support point in direction a is (d1 ell, d2 ell) evaluated at
// (cos a, sin a).  Angles are clipped eps = pi/(8 n) away from the axes and
// the exact corner points (1,0), (0,1) are appended.  Only smooth bivariate
// models qualify; spectral / independent / fully dependent boundaries are
// polygons, see choquet_zonoid_halfspaces and polyline_from_vertices.
ZonoidPolyline envelope_bivariate(const ModelSpec& m, int n_angles, double quad_tol = 1e-10);

ZonoidPolyline polyline_from_vertices(std::vector<std::array<double, 2>> pts, std::string label);

// Vertex polyline of a bivariate spectral zonoid {k >= 0 : k1 <= theta(1),
// k2 <= theta(2), k1 + k2 <= theta(12)}.
ZonoidPolyline choquet_zonoid_polyline(const ModelSpec& m);

// Support function max over polyline vertices of <u, p> (the origin and the
// axis segments are inside every max-zonoid, so vertices suffice for u >= 0).
double support_function_of_polyline(const ZonoidPolyline& poly, std::span<const double> u);

struct NestingReport {
  bool nested = false;      // poly1 subset poly2 (within tol)
  double worst_margin = 0;  // max over directions of h1(u) - h2(u)
  std::vector<double> worst_direction;
};

// Certifies set inclusion of convex bodies by comparing support functions on
// a uniform direction grid of the first quadrant plus both axes.
NestingReport nesting_check(const ZonoidPolyline& p1, const ZonoidPolyline& p2, double tol = 1e-9,
                            int n_directions = 0);

}  // namespace maxstab
