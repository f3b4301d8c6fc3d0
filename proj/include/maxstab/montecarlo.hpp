#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxstab/coeffs.hpp"
#include "maxstab/models.hpp"

namespace maxstab {

struct McEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string estimand;
};

// Row-major n x d sample matrix.
struct SampleMatrix {
  std::uint64_t n = 0;
  int d = 0;
  std::vector<double> data;
  const double* row(std::uint64_t i) const { return data.data() + i * d; }
};

// Generator representations (E Z_i = 1 componentwise):
//  - gamma route:      Z_i = G_i / alpha_i, G_i ~ Gamma(alpha_i) independent
//  - dirichlet route:  Z_i = |alpha| D_i / alpha_i, D ~ Dirichlet(alpha)
//  - husler_reiss:     Z_i = exp(W_i - Var(W_i)/2), W Gaussian with
//                      variogram gamma and W_anchor = 0
SampleMatrix sample_gamma_generator(std::span<const double> alpha, std::uint64_t n, std::uint64_t seed);
SampleMatrix sample_dirichlet_generator(std::span<const double> alpha, std::uint64_t n, std::uint64_t seed);
SampleMatrix sample_hr_generator(const Eigen::MatrixXd& gamma, int anchor, std::uint64_t n,
                                 std::uint64_t seed);

// Exact sampler of the spectral max-stable vector itself (unit Frechet
// margins): X_j = max over atoms A containing j of tau(A) * F_A.
SampleMatrix sample_choquet_maxstable(const CoefficientTable& tau, std::uint64_t n, std::uint64_t seed);

// Deterministic identity of the generator sample block a model produces for
// given (n, seed); equal keys guarantee bit-identical blocks.
std::uint64_t generator_block_key(const ModelSpec& m, std::uint64_t n, std::uint64_t seed);

// Fills `out` (resized to n*d) with the model's canonical generator block.
// The block is produced in fixed-size chunks with per-chunk streams, so the
// result is independent of threading and identical to the sample_* routines.
void fill_generator_block(const ModelSpec& m, std::uint64_t n, std::uint64_t seed,
                          std::vector<double>& out);

// Couples two generator blocks on shared randomness when possible (gamma
// additivity for Dirichlet pairs, shared Gaussians for Husler-Reiss pairs of
// equal dimension).  Falls back to independent streams and returns false.
bool fill_coupled_blocks(const ModelSpec& m1, const ModelSpec& m2, std::uint64_t n,
                         std::uint64_t seed, std::vector<double>& z1, std::vector<double>& z2);

McEstimate estimate_ell(const ModelSpec& m, std::span<const double> x, std::uint64_t n,
                        std::uint64_t seed);
McEstimate estimate_directional_chi(const ModelSpec& m, std::span<const double> w, mask_t a,
                                    std::uint64_t n, std::uint64_t seed);

// Convex test functions for the gamma monotonicity check.
enum class ConvexFn { identity, square, max_one, neg_min_one, abs_dev_one };
double apply_convex_fn(ConvexFn f, double x);

struct GammaMonotonicityReport {
  std::vector<double> alphas;
  std::vector<McEstimate> values;       // E g(G/alpha), G ~ Gamma(alpha)
  std::vector<double> step_means;       // coupled mean of value[k+1]-value[k]
  std::vector<double> step_stderrs;
  bool nonincreasing = false;           // within 3 coupled standard errors
};

// Checks that E g(Gamma(alpha)/alpha) is nonincreasing along an ascending
// alpha ladder, using additivity-coupled gamma draws.
GammaMonotonicityReport gamma_monotonicity_check(std::span<const double> alphas, ConvexFn g,
                                                 std::uint64_t n, std::uint64_t seed);

struct TriangularArrayLevel {
  double n_level = 0;                // triangular-array row length
  double u = 0;                      // normalizing level u_n
  std::vector<double> empirical;     // P(u(M - u) <= probe) per probe
  std::vector<double> limit;         // limiting max-stable cdf per probe
  double max_abs_discrepancy = 0;
};

struct TriangularArrayReport {
  std::vector<TriangularArrayLevel> levels;
};

// Gaussian triangular array with correlations rho_ij = exp(-gamma_ij /
// (4 log n)): rescaled maxima approach the Husler-Reiss law.  Probes are on
// the Gumbel scale.
TriangularArrayReport triangular_array_hr_demo(const Eigen::MatrixXd& gamma,
                                               std::span<const double> levels, std::uint64_t reps,
                                               std::uint64_t seed,
                                               std::span<const std::vector<double>> probes);

}  // namespace maxstab
