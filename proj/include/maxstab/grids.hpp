#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxstab/subsets.hpp"

namespace maxstab {

inline void check_direction(std::span<const double> x, bool strictly_positive) {
  if (x.empty()) throw std::invalid_argument("direction: empty vector");
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("direction: non-finite component");
    if (strictly_positive ? (v <= 0.0) : (v < 0.0))
      throw std::invalid_argument(strictly_positive ? "direction: component must be > 0"
                                                    : "direction: component must be >= 0");
  }
}

// Lattice {k/m : k in N_0^d, sum k = m} on the unit simplex, enumerated in
// lexicographic order of k.  Contains every vertex e_i, and the barycenter
// exactly when d divides m.  Size is C(m+d-1, d-1).
class SimplexGrid {
 public:
  SimplexGrid(int d, int m) : d_(d), m_(m) {
    check_dim(d);
    if (m < 1) throw std::invalid_argument("simplex grid: m must be >= 1");
    double count = 1.0;
    for (int i = 1; i < d; ++i) count *= static_cast<double>(m + i) / i;
    if (count > 2.0e6)
      throw std::invalid_argument("simplex grid: size " + std::to_string(count) +
                                  " exceeds limit 2e6; reduce m");
    std::vector<int> k(d, 0);
    build(0, m, k);
  }

  int dim() const { return d_; }
  int resolution() const { return m_; }
  std::size_t size() const { return points_.size() / d_; }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * d_, static_cast<std::size_t>(d_)};
  }

  // Same point with zero components raised to eps = 1/(4m): strictly interior
  // directions for the upper-orthant functionals.
  std::vector<double> interior_point(std::size_t i, double eps = -1.0) const {
    if (eps <= 0.0) eps = 1.0 / (4.0 * m_);
    std::vector<double> p(point(i).begin(), point(i).end());
    for (double& v : p)
      if (v < eps) v = eps;
    return p;
  }

  std::string describe() const {
    return "simplex(d=" + std::to_string(d_) + ",m=" + std::to_string(m_) + ")";
  }

  static int default_resolution(int d) { return d == 2 ? 64 : (d == 3 ? 16 : 8); }

 private:
  void build(int pos, int rem, std::vector<int>& k) {
    if (pos == d_ - 1) {
      k[pos] = rem;
      for (int v : k) points_.push_back(static_cast<double>(v) / m_);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      k[pos] = v;
      build(pos + 1, rem - v, k);
    }
  }

  int d_;
  int m_;
  std::vector<double> points_;
};

}  // namespace maxstab
