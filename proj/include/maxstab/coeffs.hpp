#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxstab/subsets.hpp"

namespace maxstab {

// The three equivalent coefficient systems of the finite spectral (Choquet)
// dependence model:
//   tau   - nonnegative mass on nonempty subsets, sum_{K: i in K} tau(K) = 1
//   theta - extremal coefficients theta(A) = sum_{K: K meets A} tau(K)
//   chi   - tail dependence coefficients chi(A) = sum_{K: K superset A} tau(K)
enum class CoeffKind { tau, theta, chi };

inline const char* coeff_kind_name(CoeffKind k) {
  switch (k) {
    case CoeffKind::tau: return "tau";
    case CoeffKind::theta: return "theta";
    case CoeffKind::chi: return "chi";
  }
  return "?";
}

struct CoefficientTable {
  int dim = 0;
  CoeffKind kind = CoeffKind::tau;
  std::vector<double> values;  // size 2^dim, values[0] == 0

  CoefficientTable() = default;
  CoefficientTable(int d, CoeffKind k) : dim(d), kind(k), values(std::size_t{1} << d, 0.0) {
    check_dim(d, kMaxExactDim);
  }

  double at(mask_t a) const {
    if (a == 0 || a > full_mask(dim)) throw std::invalid_argument("coefficient table: bad subset");
    return values[a];
  }
  double& at(mask_t a) {
    if (a == 0 || a > full_mask(dim)) throw std::invalid_argument("coefficient table: bad subset");
    return values[a];
  }
};

namespace detail {
inline void expect_kind(const CoefficientTable& t, CoeffKind k, const char* op) {
  if (t.kind != k)
    throw std::invalid_argument(std::string(op) + ": expected " + coeff_kind_name(k) +
                                " table, got " + coeff_kind_name(t.kind));
  if (t.values.size() != (std::size_t{1} << t.dim))
    throw std::invalid_argument(std::string(op) + ": table storage size mismatch");
}

// chi(A) = sum over nonempty I subset A of (-1)^(|I|+1) theta(I) and the same
// map sends chi back to theta (it is an involution).
inline std::vector<double> alternating_involution(const std::vector<double>& in, int d) {
  std::vector<double> f(in.size());
  f[0] = 0.0;
  for (mask_t s = 1; s < in.size(); ++s)
    f[s] = (subset_size(s) & 1) ? in[s] : -in[s];
  zeta_subsets(f, d);
  f[0] = 0.0;
  return f;
}
}  // namespace detail

inline CoefficientTable theta_to_chi(const CoefficientTable& t) {
  detail::expect_kind(t, CoeffKind::theta, "theta_to_chi");
  CoefficientTable out(t.dim, CoeffKind::chi);
  out.values = detail::alternating_involution(t.values, t.dim);
  return out;
}

inline CoefficientTable chi_to_theta(const CoefficientTable& t) {
  detail::expect_kind(t, CoeffKind::chi, "chi_to_theta");
  CoefficientTable out(t.dim, CoeffKind::theta);
  out.values = detail::alternating_involution(t.values, t.dim);
  return out;
}

inline CoefficientTable tau_to_chi(const CoefficientTable& t) {
  detail::expect_kind(t, CoeffKind::tau, "tau_to_chi");
  CoefficientTable out(t.dim, CoeffKind::chi);
  out.values = t.values;
  zeta_supersets(out.values, t.dim);
  out.values[0] = 0.0;
  return out;
}

inline CoefficientTable chi_to_tau(const CoefficientTable& t) {
  detail::expect_kind(t, CoeffKind::chi, "chi_to_tau");
  CoefficientTable out(t.dim, CoeffKind::tau);
  out.values = t.values;
  moebius_supersets(out.values, t.dim);
  out.values[0] = 0.0;
  return out;
}

inline CoefficientTable tau_to_theta(const CoefficientTable& t) {
  detail::expect_kind(t, CoeffKind::tau, "tau_to_theta");
  // theta(A) = total mass - sum_{K subset complement(A)} tau(K)
  std::vector<double> sub = t.values;
  zeta_subsets(sub, t.dim);
  const mask_t full = full_mask(t.dim);
  const double total = sub[full];
  CoefficientTable out(t.dim, CoeffKind::theta);
  for (mask_t a = 1; a <= full; ++a) out.values[a] = total - sub[full ^ a];
  return out;
}

inline CoefficientTable theta_to_tau(const CoefficientTable& t) {
  detail::expect_kind(t, CoeffKind::theta, "theta_to_tau");
  CoefficientTable chi = theta_to_chi(t);
  return chi_to_tau(chi);
}

inline CoefficientTable convert(const CoefficientTable& t, CoeffKind to) {
  if (t.kind == to) return t;
  switch (t.kind) {
    case CoeffKind::tau: return to == CoeffKind::theta ? tau_to_theta(t) : tau_to_chi(t);
    case CoeffKind::theta: return to == CoeffKind::tau ? theta_to_tau(t) : theta_to_chi(t);
    case CoeffKind::chi: return to == CoeffKind::tau ? chi_to_tau(t) : chi_to_theta(t);
  }
  throw std::logic_error("convert: unreachable");
}

// Marginal sums sum_{K: i in K} tau(K) for i = 1..d.
inline std::vector<double> tau_marginal_sums(const CoefficientTable& tau) {
  detail::expect_kind(tau, CoeffKind::tau, "tau_marginal_sums");
  std::vector<double> s(tau.dim, 0.0);
  for (mask_t k = 1; k < tau.values.size(); ++k)
    for (int i = 1; i <= tau.dim; ++i)
      if (contains(k, i)) s[i - 1] += tau.values[k];
  return s;
}

// Checks that a table (any kind) describes a valid spectral mass: tau >= 0
// and unit marginal sums, both up to tol.  Throws with the offending subset
// or margin named; never repairs the input.
inline CoefficientTable validate_choquet_table(const CoefficientTable& t, double tol = 1e-12) {
  CoefficientTable tau = convert(t, CoeffKind::tau);
  for (mask_t a = 1; a < tau.values.size(); ++a) {
    const double v = tau.values[a];
    if (!std::isfinite(v)) throw std::invalid_argument("choquet: non-finite mass at " + mask_to_string(a));
    if (v < -tol)
      throw std::invalid_argument("choquet: negative mass tau(" + mask_to_string(a) +
                                  ") = " + std::to_string(v));
  }
  const std::vector<double> sums = tau_marginal_sums(tau);
  for (int i = 0; i < tau.dim; ++i)
    if (std::abs(sums[i] - 1.0) > tol)
      throw std::invalid_argument("choquet: marginal sum for index " + std::to_string(i + 1) +
                                  " is " + std::to_string(sums[i]) + ", expected 1");
  return tau;
}

// Stable tail dependence function of the spectral model, layer form:
// integral over t of theta({i : x_i >= t}).  Requires the theta table.
inline double choquet_ell_layer(const CoefficientTable& theta, std::span<const double> x) {
  detail::expect_kind(theta, CoeffKind::theta, "choquet_ell_layer");
  const int d = theta.dim;
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("choquet_ell_layer: dimension mismatch");
  std::vector<int> ord(d);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return x[a] > x[b]; });
  double ell = 0.0;
  mask_t s = 0;
  for (int k = 0; k < d; ++k) {
    s |= mask_t{1} << ord[k];
    const double next = (k + 1 < d) ? x[ord[k + 1]] : 0.0;
    ell += theta.values[s] * (x[ord[k]] - next);
  }
  return ell;
}

// Same function in spectral form: sum_A tau(A) max_{i in A} x_i.
inline double choquet_ell_spectral(const CoefficientTable& tau, std::span<const double> x) {
  detail::expect_kind(tau, CoeffKind::tau, "choquet_ell_spectral");
  const int d = tau.dim;
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("choquet_ell_spectral: dimension mismatch");
  std::vector<double> mx(tau.values.size(), 0.0);
  for (mask_t s = 1; s < mx.size(); ++s) {
    const int low = std::countr_zero(s);
    const mask_t rest = s & (s - 1);
    mx[s] = std::max(mx[rest], x[low]);
  }
  double ell = 0.0;
  for (mask_t s = 1; s < mx.size(); ++s) ell += tau.values[s] * mx[s];
  return ell;
}

// Halfspace description of the max-zonoid of a spectral model:
// K = {k >= 0 : sum_{i in A} k_i <= theta(A) for all nonempty A}.
struct Halfspace {
  mask_t subset;
  double offset;
};

inline std::vector<Halfspace> choquet_zonoid_halfspaces(const CoefficientTable& theta) {
  detail::expect_kind(theta, CoeffKind::theta, "choquet_zonoid_halfspaces");
  std::vector<Halfspace> hs;
  hs.reserve(theta.values.size() - 1);
  for (mask_t a = 1; a < theta.values.size(); ++a) hs.push_back({a, theta.values[a]});
  return hs;
}

}  // namespace maxstab
