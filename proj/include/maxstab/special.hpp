#pragma once

#include <cmath>
#include <stdexcept>

#include "maxstab/rng.hpp"

namespace maxstab {

inline double norm_pdf(double x) {
  return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// Standard normal pair via Box-Muller; consumes exactly two uniforms.
inline void normal_pair(RngStream& rng, double& z1, double& z2) {
  const double u1 = rng.next_open01();
  const double u2 = rng.next_open01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586477 * u2;
  z1 = r * std::cos(a);
  z2 = r * std::sin(a);
}

// Normal draws with carry, so consumers can take an odd count.
class NormalSource {
 public:
  explicit NormalSource(RngStream& rng) : rng_(rng) {}
  double operator()() {
    if (has_) {
      has_ = false;
      return carry_;
    }
    double a, b;
    normal_pair(rng_, a, b);
    carry_ = b;
    has_ = true;
    return a;
  }

 private:
  RngStream& rng_;
  double carry_ = 0.0;
  bool has_ = false;
};

// Gamma(shape) via Marsaglia-Tsang for shape >= 1; smaller shapes use the
// boosting identity Gamma(a) = Gamma(a+1) * U^(1/a), which avoids the
// degraded acceptance rate of rejection samplers at small shapes.
inline double sample_gamma(RngStream& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(rng.next_open01(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  NormalSource normals(rng);
  for (;;) {
    double x, v;
    do {
      x = normals();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v;
  }
}

// Unit Frechet draw: F(t) = exp(-1/t).
inline double sample_frechet(RngStream& rng) {
  return -1.0 / std::log(rng.next_open01());
}

// Solves sqrt(2*pi) * u * exp(u^2/2) = n for u > 0 (normalizing level of
// Gaussian maxima); monotone, solved by bisection.
inline double gaussian_max_level(double n) {
  if (!(n > 1.0)) throw std::invalid_argument("gaussian_max_level: n must be > 1");
  auto f = [n](double u) { return std::log(2.5066282746310005024) + std::log(u) + 0.5 * u * u - std::log(n); };
  double lo = 1e-8, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace maxstab
