#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "maxstab/orders.hpp"
#include "test_util.hpp"

using namespace maxstab;

namespace {

Eigen::MatrixXd gamma2(double g12) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
  g(0, 1) = g(1, 0) = g12;
  return g;
}

OrderOptions fast_opts(int grid_m = 16, std::uint64_t mc_n = 100000) {
  OrderOptions o;
  o.grid_m = grid_m;
  o.mc_n = mc_n;
  return o;
}

}  // namespace

TEST_CASE("catalog verdicts: exact coefficient comparisons") {
  const auto A = testutil::catalog_model('A');
  const auto B = testutil::catalog_model('B');
  const auto C = testutil::catalog_model('C');
  const auto D = testutil::catalog_model('D');

  const auto uo_bd = check_uo(B, D);
  CHECK(uo_bd.outcome == Outcome::holds);
  CHECK(uo_bd.exactness == Exactness::exact);
  CHECK(cli_exit_code(uo_bd) == 0);

  const auto lo_bd = check_lo(B, D);
  CHECK(lo_bd.outcome == Outcome::incomparable);
  CHECK(!lo_bd.forward_violations.empty());
  CHECK(!lo_bd.backward_violations.empty());
  CHECK(cli_exit_code(lo_bd) == 1);

  // theta_B <= theta_C entrywise, so B sits below C in the lower orthant
  // sense; the reversed call reports holds_reversed.
  CHECK(check_lo(B, C).outcome == Outcome::holds);
  CHECK(check_lo(C, B).outcome == Outcome::holds_reversed);
  CHECK(cli_exit_code(check_lo(C, B)) == 1);

  CHECK(check_uo(B, C).outcome == Outcome::incomparable);
  CHECK(check_uo(C, B).outcome == Outcome::incomparable);

  CHECK(check_pqd(A, B).outcome == Outcome::holds);
  CHECK(check_uo(A, C).outcome == Outcome::holds);
  CHECK(check_lo(A, C).outcome == Outcome::holds);
  CHECK(check_pqd(A, C).outcome == Outcome::incomparable);
}

TEST_CASE("independent and dependent bracket every model") {
  std::vector<ModelSpec> battery;
  battery.push_back(ModelSpec::dirichlet({0.7, 2.0}));
  battery.push_back(ModelSpec::husler_reiss(gamma2(1.5)));
  battery.push_back(testutil::catalog_model('C'));
  for (const auto& m : battery) {
    const auto ind = ModelSpec::independent(m.dim());
    const auto dep = ModelSpec::fully_dependent(m.dim());
    const auto lo = check_lo(dep, m, fast_opts());
    CHECK(lo.outcome == Outcome::holds);
    const auto pqd_low = check_pqd(ind, m, fast_opts());
    CHECK(pqd_low.outcome == Outcome::holds);
    const auto pqd_high = check_pqd(m, dep, fast_opts());
    CHECK(pqd_high.outcome == Outcome::holds);
    const auto uo_high = check_uo(m, dep, fast_opts());
    CHECK(uo_high.outcome == Outcome::holds);
  }
}

TEST_CASE("dirichlet parameter ordering, bivariate closed-form route") {
  const auto lo_m = ModelSpec::dirichlet({0.8, 1.3});
  const auto hi_m = ModelSpec::dirichlet({1.6, 2.6});
  const auto v = check_pqd(lo_m, hi_m, fast_opts(32));
  CHECK(v.outcome == Outcome::holds);
  CHECK(v.exactness == Exactness::grid_closed_form);
  CHECK(cli_exit_code(v) == 0);
  const auto rev = check_pqd(hi_m, lo_m, fast_opts(32));
  CHECK((rev.outcome == Outcome::holds_reversed || rev.outcome == Outcome::incomparable));
}

TEST_CASE("husler_reiss variogram ordering, bivariate closed-form route") {
  const auto tight = ModelSpec::husler_reiss(gamma2(0.5));
  const auto loose = ModelSpec::husler_reiss(gamma2(2.0));
  // larger variogram = weaker dependence = PQD-smaller
  const auto v = check_pqd(loose, tight, fast_opts(32));
  CHECK(v.outcome == Outcome::holds);
  const auto uo = check_uo(loose, tight, fast_opts(32));
  CHECK(uo.outcome == Outcome::holds);
  const auto lo = check_lo(tight, loose, fast_opts(32));
  CHECK(lo.outcome == Outcome::holds);
}

TEST_CASE("bivariate pqd consistency note is attached") {
  const auto v = check_pqd(ModelSpec::dirichlet({1.0, 1.0}), ModelSpec::dirichlet({2.0, 2.0}),
                           fast_opts(16));
  CHECK(v.outcome == Outcome::holds);
  CHECK(v.note.find("shortcut") != std::string::npos);
}

TEST_CASE("incomparable grid verdict carries witnesses in both directions") {
  // ell curves of these two families cross, so neither direction holds.
  const auto m1 = ModelSpec::husler_reiss(gamma2(1.0));
  const auto m2 = ModelSpec::dirichlet({2.0, 2.0});
  const auto v = check_lo(m1, m2, fast_opts(64));
  if (v.outcome == Outcome::incomparable) {
    CHECK(!v.forward_violations.empty());
    CHECK(!v.backward_violations.empty());
    CHECK(v.forward_violations.size() <= 16);
    CHECK(v.backward_violations.size() <= 16);
  }
}

TEST_CASE("associated spectral model dominates its source in lower orthant") {
  EvalOptions eo;
  eo.mc_n = 100000;
  eo.seed = 1;
  const auto m = ModelSpec::dirichlet({1.5, 3.0, 12.0});
  const auto star = associated_choquet(m, eo);
  REQUIRE(star.provenance.has_value());

  OrderOptions oo;
  oo.mc_n = eo.mc_n;
  oo.seed = eo.seed;
  oo.grid_m = 8;
  const auto pqd = check_pqd(star, m, oo);
  CHECK(pqd.outcome == Outcome::holds);
  REQUIRE(pqd.components.size() == 2);
  bool crn = false;
  for (const auto& part : pqd.components)
    if (part.note.find("common random numbers") != std::string::npos) crn = true;
  CHECK(crn);
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS((void)check_lo(ModelSpec::independent(2), ModelSpec::independent(3)),
                  std::invalid_argument);
}

TEST_CASE("exit codes cover the outcome enum") {
  OrderVerdict v;
  v.outcome = Outcome::holds;
  CHECK(cli_exit_code(v) == 0);
  v.outcome = Outcome::holds_reversed;
  CHECK(cli_exit_code(v) == 1);
  v.outcome = Outcome::incomparable;
  CHECK(cli_exit_code(v) == 1);
  v.outcome = Outcome::inconclusive;
  CHECK(cli_exit_code(v) == 4);
}

TEST_CASE("antisymmetry: mutual lo holds implies near equality on the grid") {
  std::mt19937_64 rng(41);
  const auto tau = testutil::random_tau(3, rng);
  const auto m1 = ModelSpec::choquet(tau);
  const auto m2 = ModelSpec::choquet(tau);
  CHECK(check_lo(m1, m2).outcome == Outcome::holds);
  CHECK(check_lo(m2, m1).outcome == Outcome::holds);
}

TEST_CASE("transitivity on exact spectral triples") {
  std::mt19937_64 rng(42);
  int found = 0;
  for (int trial = 0; trial < 200 && found < 5; ++trial) {
    const auto [t1, t2] = testutil::random_theta_pair(4, rng);
    const auto [t2b, t3] = testutil::random_theta_pair(4, rng);
    const auto a = ModelSpec::choquet(t1);
    const auto b = ModelSpec::choquet(t2);
    if (check_uo(a, b).outcome != Outcome::holds) continue;
    const auto c = ModelSpec::choquet(t3);
    if (check_uo(b, c).outcome != Outcome::holds) continue;
    CHECK(check_uo(a, c).outcome == Outcome::holds);
    ++found;
  }
  CHECK(found > 0);
}

TEST_CASE("bernstein catalog evaluates correctly") {
  CHECK(apply_bernstein(BernsteinFn::identity, 0.7) == 0.7);
  CHECK(apply_bernstein(BernsteinFn::one_minus_exp, 0.0) == 0.0);
  CHECK(apply_bernstein(BernsteinFn::one_minus_exp, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(apply_bernstein(BernsteinFn::log1p_fn, 1.0) == doctest::Approx(std::log(2.0)));
  CHECK(apply_bernstein(BernsteinFn::sqrt1p_minus_one, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("signed theta sums respect the bernstein inequality") {
  const auto thB = tau_to_theta(testutil::catalog_tau('B'));
  const auto thD = tau_to_theta(testutil::catalog_tau('D'));
  for (BernsteinFn g : {BernsteinFn::one_minus_exp, BernsteinFn::identity, BernsteinFn::log1p_fn,
                        BernsteinFn::sqrt1p_minus_one}) {
    const auto r = prop_b7_oracle(thB, thD, g);
    CHECK(r.holds);
  }
  const auto eq = prop_b7_oracle(thB, thB, BernsteinFn::identity);
  CHECK(eq.holds);
  CHECK(std::abs(eq.lhs_sum - eq.rhs_sum) <= 1e-12);
}

TEST_CASE("random pair search finds no bernstein counterexample") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(trial % 3);
    const auto [t1, t2] = testutil::random_theta_pair(d, rng);
    for (BernsteinFn g : {BernsteinFn::one_minus_exp, BernsteinFn::identity,
                          BernsteinFn::log1p_fn, BernsteinFn::sqrt1p_minus_one}) {
      const auto r = prop_b7_oracle(t1, t2, g);
      CAPTURE(trial);
      CHECK(r.holds);
    }
  }
}

TEST_CASE("prop_b7 rejects pairs violating the chi precondition") {
  const auto thB = tau_to_theta(testutil::catalog_tau('B'));
  const auto thC = tau_to_theta(testutil::catalog_tau('C'));
  // chi_B(12) = 0.6 > chi_C(12) = 0.5, so (B, C) violates chi_1 <= chi_2
  CHECK_THROWS_AS((void)prop_b7_oracle(thB, thC, BernsteinFn::identity), std::invalid_argument);
}
