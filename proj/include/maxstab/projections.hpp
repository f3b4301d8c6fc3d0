#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxstab/models.hpp"

namespace maxstab {

// P(max_i a_i X_i <= t) = exp(-ell(a)/t) for positive weights a and t > 0.
EllValue cdf_max_projection(const ModelSpec& m, std::span<const double> a, double t,
                            const EvalOptions& opts = {});

// P(min_i a_i X_i > t) by inclusion-exclusion over the 2^d - 1 subvector
// ell values.  MinProjection precomputes those once and supports sweeps in t.
class MinProjection {
 public:
  MinProjection(const ModelSpec& m, std::span<const double> a, const EvalOptions& opts = {});

  double survival(double t) const;
  // 3x the propagated first-order uncertainty of survival(t) coming from
  // quadrature tolerances / Monte Carlo standard errors of the ell values.
  double survival_band3(double t) const;
  // Smallest t with survival(t) <= p, i.e. the level exceeded with
  // probability p by the weighted minimum.
  double quantile_survival(double p) const;

  const EllValue& ell_of_subset(mask_t s) const { return ells_[s]; }
  int dim() const { return d_; }

 private:
  int d_;
  std::vector<EllValue> ells_;  // indexed by subset mask, [0] unused
};

EllValue survival_min_projection(const ModelSpec& m, std::span<const double> a, double t,
                                 const EvalOptions& opts = {});

enum class ProjectionKind { max, min };
enum class LevelScale { frechet, gumbel };

// Level exceeded once per `period` observations on average: for the maximum
// this is ell(a)/(-log(1-1/period)) in Frechet scale; for the minimum the
// survival curve is inverted numerically.  Gumbel scale takes log.
double return_level(const ModelSpec& m, std::span<const double> a, ProjectionKind kind,
                    double period, LevelScale scale, const EvalOptions& opts = {});

// Marginal transform between GEV(mu, sigma, xi) and unit Frechet coordinates.
double gev_to_frechet(double x, double mu, double sigma, double xi);
double frechet_to_gev(double z, double mu, double sigma, double xi);

}  // namespace maxstab
