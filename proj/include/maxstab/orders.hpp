#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxstab/coeffs.hpp"
#include "maxstab/models.hpp"

namespace maxstab {

enum class Relation { lo, uo, pqd };
enum class Outcome { holds, holds_reversed, incomparable, inconclusive };

// exact: coefficient-table comparison (spectral models);
// grid_closed_form: grid certificate from exact/quadrature evaluations;
// grid_monte_carlo: grid certificate with Monte Carlo confidence bands.
enum class Exactness { exact, grid_closed_form, grid_monte_carlo };

const char* relation_name(Relation r);
const char* outcome_name(Outcome o);
const char* exactness_name(Exactness e);

struct Witness {
  std::vector<double> point;  // grid direction (empty for table comparisons)
  mask_t subset = 0;          // nonzero for upper-orthant / table witnesses
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
};

struct OrderVerdict {
  Relation relation = Relation::lo;
  Outcome outcome = Outcome::inconclusive;
  Exactness exactness = Exactness::exact;
  std::string grid;
  std::size_t n_comparisons = 0;
  std::size_t n_indeterminate = 0;  // Monte Carlo points whose bands straddle zero
  double worst_forward = 0.0;       // most negative (rhs - lhs) seen
  double worst_backward = 0.0;      // most negative (lhs - rhs) seen
  std::vector<Witness> forward_violations;   // evidence against m1 <= m2 (capped)
  std::vector<Witness> backward_violations;  // evidence against m2 <= m1 (capped)
  std::vector<OrderVerdict> components;      // pqd: the uo and lo sub-verdicts
  std::string note;
};

struct OrderOptions {
  std::uint64_t mc_n = 1000000;
  std::uint64_t seed = 1;
  double tol = 1e-9;       // absolute tolerance for exact comparisons
  double quad_tol = 1e-10; // per-evaluation quadrature tolerance
  int grid_m = 0;          // 0 = default resolution for the dimension
};

// Lower-orthant order m1 <=_lo m2, i.e. F_1 >= F_2, i.e. ell_1 <= ell_2.
// Spectral pairs compare theta tables exactly; otherwise certified on a
// simplex grid.
OrderVerdict check_lo(const ModelSpec& m1, const ModelSpec& m2, const OrderOptions& opts = {});

// Upper-orthant order m1 <=_uo m2: E min_{i in A}(a_i Z^1_i) <=  the same
// for Z^2, for all nonempty A and positive a.  Spectral pairs compare chi
// tables exactly; otherwise certified on an interior direction grid over all
// nonempty subsets.
OrderVerdict check_uo(const ModelSpec& m1, const ModelSpec& m2, const OrderOptions& opts = {});

// PQD: m1 <=_uo m2 together with m2 <=_lo m1.  In dimension 2 the
// upper-orthant route alone is decisive; both routes are computed and must
// agree.
OrderVerdict check_pqd(const ModelSpec& m1, const ModelSpec& m2, const OrderOptions& opts = {});

// CLI contract: 0 holds, 1 incomparable or reversed, 4 inconclusive.
int cli_exit_code(const OrderVerdict& v);

// Bernstein functions used by the semigroup comparison oracle.
enum class BernsteinFn { one_minus_exp, identity, log1p_fn, sqrt1p_minus_one };
double apply_bernstein(BernsteinFn f, double x);

struct PropB7Result {
  double lhs_sum = 0.0;  // sum over nonempty I of (-1)^(|I|+1) g(theta1(I))
  double rhs_sum = 0.0;
  bool holds = false;    // lhs_sum <= rhs_sum + 1e-10
};

// For valid extremal coefficient tables with chi1 <= chi2 entrywise, the
// alternating g-sums must be ordered for every Bernstein g.  Throws if the
// chi precondition fails.
PropB7Result prop_b7_oracle(const CoefficientTable& theta1, const CoefficientTable& theta2,
                            BernsteinFn g);

}  // namespace maxstab
