#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxstab/coeffs.hpp"
#include "maxstab/subsets.hpp"

namespace maxstab {

enum class Family { independent, fully_dependent, dirichlet, husler_reiss, choquet };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::independent: return "independent";
    case Family::fully_dependent: return "dependent";
    case Family::dirichlet: return "dirichlet";
    case Family::husler_reiss: return "husler_reiss";
    case Family::choquet: return "choquet";
  }
  return "?";
}

// How a returned value was computed, with the matching accuracy handle:
// exact (floating point only), quadrature (absolute tolerance), or Monte
// Carlo (standard error and sample count).
enum class ValueKind { exact, quadrature, monte_carlo };

struct EllValue {
  double value = 0.0;
  ValueKind kind = ValueKind::exact;
  double tol = 0.0;          // quadrature absolute tolerance bound
  double stderr_mean = 0.0;  // Monte Carlo standard error
  std::uint64_t n = 0;       // Monte Carlo sample count

  // Tolerance contribution of this value in a comparison: quadrature adds
  // tol, exact adds nothing; Monte Carlo is handled via stderr separately.
  double comparison_tol() const { return kind == ValueKind::quadrature ? tol : 0.0; }
};

struct EvalOptions {
  std::uint64_t mc_n = 100000;
  std::uint64_t seed = 1;
  double quad_tol = 1e-10;
};

// Records the Monte Carlo origin of a coefficient table, so that order
// checks against the source model can reuse the identical sample block
// (common random numbers) and compare per sample.
struct McProvenance {
  std::uint64_t block_key = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double max_stderr = 0.0;
};

class ModelSpec {
 public:
  static ModelSpec independent(int d);
  static ModelSpec fully_dependent(int d);
  static ModelSpec dirichlet(std::vector<double> alpha);
  static ModelSpec husler_reiss(Eigen::MatrixXd gamma);
  // Accepts a table of any coefficient kind; validates and stores all three.
  static ModelSpec choquet(const CoefficientTable& table, double tol = 1e-12);

  Family family() const { return fam_; }
  int dim() const { return d_; }

  const std::vector<double>& alpha() const;
  const Eigen::MatrixXd& gamma() const;
  const CoefficientTable& tau() const;
  const CoefficientTable& theta() const;
  const CoefficientTable& chi() const;

  // Stable hash of family + parameters; keys Monte Carlo sample blocks.
  std::uint64_t params_hash() const;

  // True when ell() is exact or quadrature for this model (no Monte Carlo).
  bool exact_capable() const;

  std::optional<McProvenance> provenance;

 private:
  ModelSpec() = default;
  Family fam_ = Family::independent;
  int d_ = 0;
  std::vector<double> alpha_;
  Eigen::MatrixXd gamma_;
  CoefficientTable tau_, theta_, chi_;
};

// Stable tail dependence function at x >= 0 (componentwise), the support
// function of the max-zonoid.  Zero components reduce to the marginal model
// on the positive support, so vertex and face evaluations stay exact.
EllValue ell(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts = {});

// Exponent measure V(x) = ell(1/x) for x in (0, inf]^d (inf allowed).
EllValue exponent(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts = {});

// P(X <= x) = exp(-V(x)); accuracy fields are propagated through exp.
EllValue cdf(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts = {});

// theta(A) = ell(1_A), in [1, |A|].
EllValue extremal_coefficient(const ModelSpec& m, mask_t a, const EvalOptions& opts = {});

// chi(A) = E min_{i in A} Z_i, in [0, 1].
EllValue tail_dependence_coefficient(const ModelSpec& m, mask_t a, const EvalOptions& opts = {});

// chi^(w)(A) = E min_{i in A} (w_i Z_i) for strictly positive weights.
EllValue directional_chi(const ModelSpec& m, std::span<const double> w, mask_t a,
                         const EvalOptions& opts = {});

// Restriction of ell to the unit simplex.
EllValue pickands(const ModelSpec& m, std::span<const double> w, const EvalOptions& opts = {});

// Braced-list conveniences; spans cannot bind to initializer lists directly.
inline EllValue ell(const ModelSpec& m, std::initializer_list<double> x,
                    const EvalOptions& opts = {}) {
  return ell(m, std::span<const double>(x.begin(), x.size()), opts);
}
inline EllValue exponent(const ModelSpec& m, std::initializer_list<double> x,
                         const EvalOptions& opts = {}) {
  return exponent(m, std::span<const double>(x.begin(), x.size()), opts);
}
inline EllValue cdf(const ModelSpec& m, std::initializer_list<double> x,
                    const EvalOptions& opts = {}) {
  return cdf(m, std::span<const double>(x.begin(), x.size()), opts);
}
inline EllValue directional_chi(const ModelSpec& m, std::initializer_list<double> w, mask_t a,
                                const EvalOptions& opts = {}) {
  return directional_chi(m, std::span<const double>(w.begin(), w.size()), a, opts);
}
inline EllValue pickands(const ModelSpec& m, std::initializer_list<double> w,
                         const EvalOptions& opts = {}) {
  return pickands(m, std::span<const double>(w.begin(), w.size()), opts);
}

// Distribution of the subvector indexed by `a`, same family.
ModelSpec marginalize(const ModelSpec& m, mask_t a);

// Spectral model with the same extremal coefficient function; theta values
// are computed exactly where possible and by Monte Carlo otherwise (the
// result then carries provenance).
ModelSpec associated_choquet(const ModelSpec& m, const EvalOptions& opts = {});

// Angular density of the Dirichlet model on the open unit simplex.
double dirichlet_angular_density(std::span<const double> alpha, std::span<const double> w);

// Closed-form pieces for the bivariate families, shared with the zonoid
// envelope: ell and its partial derivatives.
struct BivariateEll {
  double value;
  double d1;
  double d2;
  double tol;  // 0 for closed forms, quadrature bound otherwise
};
BivariateEll hr_bivariate_ell(double gamma12, double x1, double x2);
BivariateEll dirichlet_bivariate_ell(double a1, double a2, double x1, double x2, double quad_tol = 1e-10);

}  // namespace maxstab
