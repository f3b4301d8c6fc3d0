#include "maxstab/models.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "maxstab/grids.hpp"
#include "maxstab/montecarlo.hpp"
#include "maxstab/rng.hpp"
#include "maxstab/special.hpp"
#include "maxstab/variogram.hpp"

namespace maxstab {

namespace {

void check_alpha(const std::vector<double>& alpha) {
  if (alpha.empty()) throw std::invalid_argument("dirichlet: empty alpha");
  check_dim(static_cast<int>(alpha.size()));
  for (double a : alpha)
    if (!std::isfinite(a) || a <= 0.0)
      throw std::invalid_argument("dirichlet: alpha components must be finite and > 0");
}

}  // namespace

ModelSpec ModelSpec::independent(int d) {
  check_dim(d);
  ModelSpec m;
  m.fam_ = Family::independent;
  m.d_ = d;
  return m;
}

ModelSpec ModelSpec::fully_dependent(int d) {
  check_dim(d);
  ModelSpec m;
  m.fam_ = Family::fully_dependent;
  m.d_ = d;
  return m;
}

ModelSpec ModelSpec::dirichlet(std::vector<double> alpha) {
  check_alpha(alpha);
  ModelSpec m;
  m.fam_ = Family::dirichlet;
  m.d_ = static_cast<int>(alpha.size());
  m.alpha_ = std::move(alpha);
  return m;
}

ModelSpec ModelSpec::husler_reiss(Eigen::MatrixXd gamma) {
  validate_variogram(gamma);
  ModelSpec m;
  m.fam_ = Family::husler_reiss;
  m.d_ = static_cast<int>(gamma.rows());
  m.gamma_ = std::move(gamma);
  return m;
}

ModelSpec ModelSpec::choquet(const CoefficientTable& table, double tol) {
  ModelSpec m;
  m.fam_ = Family::choquet;
  m.d_ = table.dim;
  m.tau_ = validate_choquet_table(table, tol);
  m.theta_ = tau_to_theta(m.tau_);
  m.chi_ = tau_to_chi(m.tau_);
  return m;
}

const std::vector<double>& ModelSpec::alpha() const {
  if (fam_ != Family::dirichlet) throw std::logic_error("alpha(): not a dirichlet model");
  return alpha_;
}

const Eigen::MatrixXd& ModelSpec::gamma() const {
  if (fam_ != Family::husler_reiss) throw std::logic_error("gamma(): not a husler_reiss model");
  return gamma_;
}

const CoefficientTable& ModelSpec::tau() const {
  if (fam_ != Family::choquet) throw std::logic_error("tau(): not a choquet model");
  return tau_;
}
const CoefficientTable& ModelSpec::theta() const {
  if (fam_ != Family::choquet) throw std::logic_error("theta(): not a choquet model");
  return theta_;
}
const CoefficientTable& ModelSpec::chi() const {
  if (fam_ != Family::choquet) throw std::logic_error("chi(): not a choquet model");
  return chi_;
}

std::uint64_t ModelSpec::params_hash() const {
  std::uint64_t h = fnv1a(family_name(fam_));
  h = fnv1a_bytes(&d_, sizeof(d_), h);
  switch (fam_) {
    case Family::dirichlet:
      h = fnv1a_bytes(alpha_.data(), alpha_.size() * sizeof(double), h);
      break;
    case Family::husler_reiss:
      h = fnv1a_bytes(gamma_.data(), static_cast<std::size_t>(gamma_.size()) * sizeof(double), h);
      break;
    case Family::choquet:
      h = fnv1a_bytes(tau_.values.data(), tau_.values.size() * sizeof(double), h);
      break;
    default:
      break;
  }
  return h;
}

bool ModelSpec::exact_capable() const {
  switch (fam_) {
    case Family::independent:
    case Family::fully_dependent:
    case Family::choquet:
      return true;
    case Family::dirichlet:
    case Family::husler_reiss:
      return d_ <= 2;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Bivariate closed forms

BivariateEll hr_bivariate_ell(double gamma12, double x1, double x2) {
  if (!(x1 > 0.0) || !(x2 > 0.0)) throw std::invalid_argument("hr_bivariate_ell: x must be > 0");
  if (gamma12 < 0.0) throw std::invalid_argument("hr_bivariate_ell: gamma12 must be >= 0");
  if (gamma12 == 0.0) {
    // Degenerate limit: full dependence.
    return x1 >= x2 ? BivariateEll{x1, 1.0, 0.0, 0.0} : BivariateEll{x2, 0.0, 1.0, 0.0};
  }
  const double eta = std::sqrt(gamma12);
  const double t = std::log(x1 / x2) / eta;
  const double p = eta / 2.0 + t;
  const double q = eta / 2.0 - t;
  const double value = x1 * norm_cdf(p) + x2 * norm_cdf(q);
  // d/dx1: Phi(p) + phi(p)/eta - (x2/x1) phi(q)/eta; the last two cancel
  // because x1 phi(p) = x2 phi(q) on the support line, kept explicit anyway.
  const double d1 = norm_cdf(p) + norm_pdf(p) / eta - (x2 / x1) * norm_pdf(q) / eta;
  const double d2 = norm_cdf(q) + norm_pdf(q) / eta - (x1 / x2) * norm_pdf(p) / eta;
  return {value, d1, d2, 0.0};
}

// Write the gamma generator as Z_i = G_i / a_i with G_1 = T B, G_2 = T (1 - B)
// for T ~ Gamma(a1 + a2) independent of B ~ Beta(a1, a2).  Then
//   ell(x) = E max(x1 Z1, x2 Z2) = (a1 + a2) E max(u B, v (1 - B)),
// u = x1/a1, v = x2/a2, and the beta expectation splits at q = v/(u+v) into
// regularized incomplete beta functions:
//   ell  = x1 + (x2 - x1) I_q(a1, a2) + (u + v) q^a1 (1-q)^a2 / B(a1, a2),
//   d1   = E[Z1; x1 Z1 > x2 Z2] = 1 - I_q(a1 + 1, a2),
//   d2   = E[Z2; x1 Z1 <= x2 Z2] = I_q(a1, a2 + 1).
BivariateEll dirichlet_bivariate_ell(double a1, double a2, double x1, double x2, double quad_tol) {
  if (!(x1 > 0.0) || !(x2 > 0.0))
    throw std::invalid_argument("dirichlet_bivariate_ell: x must be > 0");
  (void)quad_tol;  // closed form; kept for call-site compatibility
  const double u = x1 / a1, v = x2 / a2;
  const double q = v / (u + v);
  const double log_q = std::log(v) - std::log(u + v);
  const double log_qc = std::log(u) - std::log(u + v);
  const double lbeta = std::lgamma(a1) + std::lgamma(a2) - std::lgamma(a1 + a2);
  const double mass = std::exp(a1 * log_q + a2 * log_qc - lbeta);
  const double value = x1 + (x2 - x1) * boost::math::ibeta(a1, a2, q) + (u + v) * mass;
  const double d1 = 1.0 - boost::math::ibeta(a1 + 1.0, a2, q);
  const double d2 = boost::math::ibeta(a1, a2 + 1.0, q);
  return {value, d1, d2, 1e-13 * (x1 + x2)};
}

// ---------------------------------------------------------------------------
// ell dispatch

namespace {

EllValue exact_value(double v) { return {v, ValueKind::exact, 0.0, 0.0, 0}; }

EllValue ell_positive(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts) {
  const int d = m.dim();
  switch (m.family()) {
    case Family::independent: {
      double s = 0.0;
      for (double v : x) s += v;
      return exact_value(s);
    }
    case Family::fully_dependent:
      return exact_value(*std::max_element(x.begin(), x.end()));
    case Family::choquet: {
      const double layer = choquet_ell_layer(m.theta(), x);
      const double spectral = choquet_ell_spectral(m.tau(), x);
      const double scale = std::max(1.0, std::abs(layer));
      if (std::abs(layer - spectral) > 1e-12 * scale)
        throw std::logic_error("choquet ell: layer and spectral forms disagree");
      return exact_value(layer);
    }
    case Family::husler_reiss: {
      if (d == 1) return exact_value(x[0]);
      if (d == 2) {
        const BivariateEll b = hr_bivariate_ell(m.gamma()(0, 1), x[0], x[1]);
        return exact_value(b.value);
      }
      const McEstimate e = estimate_ell(m, x, opts.mc_n, opts.seed);
      return {e.mean, ValueKind::monte_carlo, 0.0, e.stderr_mean, e.n};
    }
    case Family::dirichlet: {
      if (d == 1) return exact_value(x[0]);
      if (d == 2) {
        const BivariateEll b =
            dirichlet_bivariate_ell(m.alpha()[0], m.alpha()[1], x[0], x[1], opts.quad_tol);
        return {b.value, ValueKind::quadrature, b.tol, 0.0, 0};
      }
      const McEstimate e = estimate_ell(m, x, opts.mc_n, opts.seed);
      return {e.mean, ValueKind::monte_carlo, 0.0, e.stderr_mean, e.n};
    }
  }
  throw std::logic_error("ell: unreachable");
}

}  // namespace

EllValue ell(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts) {
  if (static_cast<int>(x.size()) != m.dim())
    throw std::invalid_argument("ell: dimension mismatch");
  check_direction(x, /*strictly_positive=*/false);
  mask_t support = 0;
  for (int i = 0; i < m.dim(); ++i)
    if (x[i] > 0.0) support |= mask_t{1} << i;
  if (support == 0) return exact_value(0.0);
  if (support != full_mask(m.dim())) {
    std::vector<double> xs;
    for (int i = 0; i < m.dim(); ++i)
      if (x[i] > 0.0) xs.push_back(x[i]);
    return ell_positive(marginalize(m, support), xs, opts);
  }
  return ell_positive(m, x, opts);
}

EllValue exponent(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (std::isnan(v) || v <= 0.0)
      throw std::invalid_argument("exponent: components must be in (0, inf]");
    y[i] = std::isinf(v) ? 0.0 : 1.0 / v;
  }
  return ell(m, y, opts);
}

EllValue cdf(const ModelSpec& m, std::span<const double> x, const EvalOptions& opts) {
  EllValue v = exponent(m, x, opts);
  EllValue out = v;
  out.value = std::exp(-v.value);
  out.tol = v.tol * out.value;               // |d exp(-V)| = exp(-V) |dV|
  out.stderr_mean = v.stderr_mean * out.value;
  return out;
}

EllValue extremal_coefficient(const ModelSpec& m, mask_t a, const EvalOptions& opts) {
  if (a == 0 || a > full_mask(m.dim()))
    throw std::invalid_argument("extremal_coefficient: bad subset");
  std::vector<double> x(m.dim(), 0.0);
  for (int i = 1; i <= m.dim(); ++i)
    if (contains(a, i)) x[i - 1] = 1.0;
  return ell(m, x, opts);
}

EllValue tail_dependence_coefficient(const ModelSpec& m, mask_t a, const EvalOptions& opts) {
  if (a == 0 || a > full_mask(m.dim()))
    throw std::invalid_argument("tail_dependence_coefficient: bad subset");
  std::vector<double> w(m.dim(), 1.0);
  return directional_chi(m, w, a, opts);
}

EllValue directional_chi(const ModelSpec& m, std::span<const double> w, mask_t a,
                         const EvalOptions& opts) {
  if (static_cast<int>(w.size()) != m.dim())
    throw std::invalid_argument("directional_chi: dimension mismatch");
  if (a == 0 || a > full_mask(m.dim())) throw std::invalid_argument("directional_chi: bad subset");
  check_direction(w, /*strictly_positive=*/true);
  if (subset_size(a) == 1) {
    // E (w_i Z_i) = w_i by marginal standardization.
    return exact_value(w[mask_indices(a)[0] - 1]);
  }
  if (m.family() == Family::choquet) {
    double wmin = std::numeric_limits<double>::infinity();
    for (int i : mask_indices(a)) wmin = std::min(wmin, w[i - 1]);
    return exact_value(wmin * m.chi().at(a));
  }
  const ModelSpec marg = marginalize(m, a);
  if (marg.exact_capable()) {
    // inclusion-exclusion over subsets of a: chi = sum (-1)^(|I|+1) ell(w_I)
    double sum = 0.0, tol = 0.0;
    for (mask_t i = a;; i = (i - 1) & a) {
      if (i != 0) {
        std::vector<double> wi(m.dim(), 0.0);
        for (int k : mask_indices(i)) wi[k - 1] = w[k - 1];
        const EllValue e = ell(m, wi, opts);
        sum += (subset_size(i) & 1 ? 1.0 : -1.0) * e.value;
        tol += e.comparison_tol();
      }
      if (i == 0) break;
    }
    EllValue out = exact_value(sum);
    if (tol > 0.0) {
      out.kind = ValueKind::quadrature;
      out.tol = tol;
    }
    return out;
  }
  const McEstimate e = estimate_directional_chi(m, w, a, opts.mc_n, opts.seed);
  return {e.mean, ValueKind::monte_carlo, 0.0, e.stderr_mean, e.n};
}

EllValue pickands(const ModelSpec& m, std::span<const double> w, const EvalOptions& opts) {
  double s = 0.0;
  for (double v : w) s += v;
  if (std::abs(s - 1.0) > 1e-9)
    throw std::invalid_argument("pickands: weights must lie on the unit simplex");
  return ell(m, w, opts);
}

ModelSpec marginalize(const ModelSpec& m, mask_t a) {
  if (a == 0 || a > full_mask(m.dim())) throw std::invalid_argument("marginalize: bad subset");
  const std::vector<int> idx = mask_indices(a);
  const int k = static_cast<int>(idx.size());
  if (k == m.dim()) return m;
  switch (m.family()) {
    case Family::independent:
      return ModelSpec::independent(k);
    case Family::fully_dependent:
      return ModelSpec::fully_dependent(k);
    case Family::dirichlet: {
      std::vector<double> sub;
      for (int i : idx) sub.push_back(m.alpha()[i - 1]);
      return ModelSpec::dirichlet(std::move(sub));
    }
    case Family::husler_reiss: {
      Eigen::MatrixXd g(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) g(r, c) = m.gamma()(idx[r] - 1, idx[c] - 1);
      return ModelSpec::husler_reiss(std::move(g));
    }
    case Family::choquet: {
      CoefficientTable th(k, CoeffKind::theta);
      for (mask_t b = 1; b <= full_mask(k); ++b) {
        mask_t embedded = 0;
        for (int j = 1; j <= k; ++j)
          if (contains(b, j)) embedded |= singleton(idx[j - 1]);
        th.at(b) = m.theta().at(embedded);
      }
      return ModelSpec::choquet(th, 1e-9);
    }
  }
  throw std::logic_error("marginalize: unreachable");
}

ModelSpec associated_choquet(const ModelSpec& m, const EvalOptions& opts) {
  const int d = m.dim();
  check_dim(d, kMaxExactDim);
  if (m.family() == Family::choquet) return m;
  CoefficientTable th(d, CoeffKind::theta);
  double max_se = 0.0;
  bool any_mc = false;
  for (mask_t a = 1; a <= full_mask(d); ++a) {
    const EllValue e = extremal_coefficient(m, a, opts);
    th.at(a) = e.value;
    if (e.kind == ValueKind::monte_carlo) {
      any_mc = true;
      max_se = std::max(max_se, e.stderr_mean);
    }
  }
  const double tol = any_mc ? std::max(1e-9, 3.0 * max_se) : 1e-9;
  ModelSpec out = ModelSpec::choquet(th, tol);
  if (any_mc)
    out.provenance = McProvenance{generator_block_key(m, opts.mc_n, opts.seed), opts.mc_n,
                                  opts.seed, max_se};
  return out;
}

double dirichlet_angular_density(std::span<const double> alpha, std::span<const double> w) {
  const int d = static_cast<int>(alpha.size());
  if (d < 2) throw std::invalid_argument("dirichlet_angular_density: need d >= 2");
  if (static_cast<int>(w.size()) != d)
    throw std::invalid_argument("dirichlet_angular_density: dimension mismatch");
  double sw = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("dirichlet_angular_density: w must be >= 0");
    sw += v;
  }
  if (std::abs(sw - 1.0) > 1e-9)
    throw std::invalid_argument("dirichlet_angular_density: w must lie on the unit simplex");
  double abar = 0.0, s = 0.0;
  for (int i = 0; i < d; ++i) {
    if (!(alpha[i] > 0.0)) throw std::invalid_argument("dirichlet_angular_density: alpha > 0");
    abar += alpha[i];
    s += alpha[i] * w[i];
  }
  double logh = std::lgamma(abar + 1.0) - std::log(s);
  for (int i = 0; i < d; ++i) {
    if (w[i] == 0.0) {
      if (alpha[i] < 1.0) return std::numeric_limits<double>::infinity();
      if (alpha[i] > 1.0) return 0.0;
      // alpha_i == 1: factor w^0 = 1
      logh += alpha[i] * (std::log(alpha[i]) - std::log(s)) - std::lgamma(alpha[i]);
      continue;
    }
    logh += alpha[i] * (std::log(alpha[i]) - std::log(s)) + (alpha[i] - 1.0) * std::log(w[i]) -
            std::lgamma(alpha[i]);
  }
  return std::exp(logh);
}

}  // namespace maxstab
