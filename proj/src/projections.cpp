#include "maxstab/projections.hpp"

#include <cmath>
#include <stdexcept>

namespace maxstab {

namespace {

void check_weights(int d, std::span<const double> a, bool strict) {
  if (static_cast<int>(a.size()) != d)
    throw std::invalid_argument("projection: weight length must match the dimension");
  bool any = false;
  for (double v : a) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("projection: weights must be finite and nonnegative");
    if (strict && v <= 0.0)
      throw std::invalid_argument("projection: weights must be strictly positive");
    any = any || v > 0.0;
  }
  if (!any) throw std::invalid_argument("projection: weights must not be all zero");
}

void check_level(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("projection: level t must be positive and finite");
}

}  // namespace

EllValue cdf_max_projection(const ModelSpec& m, std::span<const double> a, double t,
                            const EvalOptions& opts) {
  check_weights(m.dim(), a, false);
  check_level(t);
  const EllValue e = ell(m, a, opts);
  EllValue out = e;
  out.value = std::exp(-e.value / t);
  const double scale = out.value / t;  // |d/d ell| of exp(-ell/t)
  out.tol = e.tol * scale;
  out.stderr_mean = e.stderr_mean * scale;
  return out;
}

MinProjection::MinProjection(const ModelSpec& m, std::span<const double> a,
                             const EvalOptions& opts)
    : d_(m.dim()) {
  check_weights(d_, a, true);
  ells_.resize(std::size_t{1} << d_);
  std::vector<double> x(d_);
  for (mask_t s = 1; s <= full_mask(d_); ++s) {
    for (int i = 0; i < d_; ++i) x[i] = contains(s, i + 1) ? a[i] : 0.0;
    ells_[s] = ell(m, x, opts);
  }
}

double MinProjection::survival(double t) const {
  check_level(t);
  double acc = 1.0;  // empty-set term
  for (mask_t s = 1; s <= full_mask(d_); ++s) {
    const double term = std::exp(-ells_[s].value / t);
    acc += (subset_size(s) & 1) ? -term : term;
  }
  return std::max(0.0, acc);
}

double MinProjection::survival_band3(double t) const {
  check_level(t);
  double band = 0.0;
  for (mask_t s = 1; s <= full_mask(d_); ++s) {
    const EllValue& e = ells_[s];
    const double scale = std::exp(-e.value / t) / t;
    band += scale * (e.tol + 3.0 * e.stderr_mean);
  }
  return band;
}

double MinProjection::quantile_survival(double p) const {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("quantile_survival: p must lie in (0, 1)");
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (survival(lo) <= p && ++guard < 1200) lo *= 0.5;
  guard = 0;
  while (survival(hi) > p && ++guard < 1200) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (survival(mid) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EllValue survival_min_projection(const ModelSpec& m, std::span<const double> a, double t,
                                 const EvalOptions& opts) {
  const MinProjection proj(m, a, opts);
  EllValue out;
  out.value = proj.survival(t);
  std::uint64_t min_n = 0;
  for (mask_t s = 1; s <= full_mask(m.dim()); ++s) {
    const EllValue& e = proj.ell_of_subset(s);
    const double scale = std::exp(-e.value / t) / t;
    out.tol += scale * e.tol;
    out.stderr_mean += scale * e.stderr_mean;
    if (e.kind == ValueKind::monte_carlo) min_n = min_n == 0 ? e.n : std::min(min_n, e.n);
    if (e.kind != ValueKind::exact && out.kind == ValueKind::exact) out.kind = e.kind;
    if (e.kind == ValueKind::monte_carlo) out.kind = ValueKind::monte_carlo;
  }
  out.n = min_n;
  return out;
}

double return_level(const ModelSpec& m, std::span<const double> a, ProjectionKind kind,
                    double period, LevelScale scale, const EvalOptions& opts) {
  if (!(period > 1.0))
    throw std::invalid_argument("return_level: period must exceed 1");
  double t;
  if (kind == ProjectionKind::max) {
    const double p = 1.0 / period;
    t = ell(m, a, opts).value / -std::log1p(-p);
  } else {
    t = MinProjection(m, a, opts).quantile_survival(1.0 / period);
  }
  return scale == LevelScale::gumbel ? std::log(t) : t;
}

double gev_to_frechet(double x, double mu, double sigma, double xi) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gev_to_frechet: sigma must be positive");
  const double s = (x - mu) / sigma;
  if (std::abs(xi) < 1e-12) return std::exp(s);
  const double base = 1.0 + xi * s;
  if (!(base > 0.0))
    throw std::domain_error("gev_to_frechet: x outside the support of the GEV");
  return std::pow(base, 1.0 / xi);
}

double frechet_to_gev(double z, double mu, double sigma, double xi) {
  if (!(sigma > 0.0)) throw std::invalid_argument("frechet_to_gev: sigma must be positive");
  if (!(z > 0.0)) throw std::domain_error("frechet_to_gev: z must be positive");
  if (std::abs(xi) < 1e-12) return mu + sigma * std::log(z);
  return mu + sigma * std::expm1(xi * std::log(z)) / xi;
}

}  // namespace maxstab
