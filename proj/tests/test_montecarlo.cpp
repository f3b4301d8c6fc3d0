#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "maxstab/model_json.hpp"
#include "maxstab/montecarlo.hpp"
#include "test_util.hpp"

using namespace maxstab;

namespace {

Eigen::MatrixXd gamma2(double g12) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
  g(0, 1) = g(1, 0) = g12;
  return g;
}

double col_mean(const SampleMatrix& s, int j) {
  double acc = 0.0;
  for (std::uint64_t i = 0; i < s.n; ++i) acc += s.row(i)[j];
  return acc / static_cast<double>(s.n);
}

}  // namespace

TEST_CASE("samplers are deterministic in the seed") {
  const std::vector<double> alpha{0.4, 2.0};
  const auto a = sample_gamma_generator(alpha, 500, 9);
  const auto b = sample_gamma_generator(alpha, 500, 9);
  const auto c = sample_gamma_generator(alpha, 500, 10);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
  const auto h1 = sample_hr_generator(gamma2(1.0), 1, 300, 4);
  const auto h2 = sample_hr_generator(gamma2(1.0), 1, 300, 4);
  CHECK(h1.data == h2.data);
}

TEST_CASE("generator margins are unit mean") {
  const std::uint64_t n = 400000;
  const auto g = sample_gamma_generator(std::vector<double>{0.3, 1.0, 5.0}, n, 11);
  for (int j = 0; j < 3; ++j) CHECK(col_mean(g, j) == doctest::Approx(1.0).epsilon(0.02));
  const auto d = sample_dirichlet_generator(std::vector<double>{0.5, 2.5}, n, 12);
  for (int j = 0; j < 2; ++j) CHECK(col_mean(d, j) == doctest::Approx(1.0).epsilon(0.02));
  const auto h = sample_hr_generator(gamma2(1.3), 1, n, 13);
  for (int j = 0; j < 2; ++j) CHECK(col_mean(h, j) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma and dirichlet generator routes agree on E max") {
  const std::vector<double> alpha{1.5, 3.0, 12.0};
  const std::vector<double> x{1.0, 0.7, 1.3};
  const std::uint64_t n = 400000;
  const auto g = sample_gamma_generator(alpha, n, 21);
  const auto d = sample_dirichlet_generator(alpha, n, 22);
  auto emax = [&](const SampleMatrix& s) {
    double acc = 0.0, acc2 = 0.0;
    for (std::uint64_t i = 0; i < s.n; ++i) {
      const double* z = s.row(i);
      const double v = std::max({x[0] * z[0], x[1] * z[1], x[2] * z[2]});
      acc += v;
      acc2 += v * v;
    }
    const double mean = acc / static_cast<double>(s.n);
    const double var = acc2 / static_cast<double>(s.n) - mean * mean;
    return std::pair<double, double>(mean, std::sqrt(var / static_cast<double>(s.n)));
  };
  const auto [mg, sg] = emax(g);
  const auto [md, sd] = emax(d);
  CHECK(std::abs(mg - md) <= 4.0 * std::hypot(sg, sd));
}

TEST_CASE("estimate_ell tracks closed forms") {
  const std::uint64_t n = 400000;
  struct Case {
    ModelSpec m;
    std::vector<double> x;
    double truth;
  };
  std::vector<Case> cases;
  cases.push_back({ModelSpec::independent(3), {0.5, 1.0, 0.25}, 1.75});
  cases.push_back({ModelSpec::husler_reiss(gamma2(1.0)),
                   {1.0, 1.0},
                   hr_bivariate_ell(1.0, 1.0, 1.0).value});
  cases.push_back({ModelSpec::dirichlet({2.0, 0.7}),
                   {0.8, 1.1},
                   dirichlet_bivariate_ell(2.0, 0.7, 0.8, 1.1).value});
  cases.push_back({testutil::catalog_model('B'),
                   {1.0, 2.0, 0.5},
                   ell(testutil::catalog_model('B'), std::vector<double>{1.0, 2.0, 0.5}).value});
  int k = 0;
  for (const auto& c : cases) {
    const auto est = estimate_ell(c.m, c.x, n, 100 + k++);
    CAPTURE(est.estimand);
    CHECK(est.n == n);
    CHECK(est.stderr_mean > 0.0);
    CHECK(std::abs(est.mean - c.truth) <= 4.0 * est.stderr_mean);
  }
}

TEST_CASE("estimate_directional_chi matches the spectral closed form") {
  const auto m = testutil::catalog_model('D');
  const std::vector<double> w{0.25, 0.5, 0.25};
  const auto est = estimate_directional_chi(m, w, 0b111, 200000, 31);
  CHECK(std::abs(est.mean - 0.25 * 0.7) <= 4.0 * est.stderr_mean);
}

TEST_CASE("block keys identify identical blocks") {
  const auto m1 = ModelSpec::dirichlet({1.0, 2.0});
  const auto m2 = ModelSpec::dirichlet({1.0, 2.0});
  const auto m3 = ModelSpec::dirichlet({1.0, 2.1});
  CHECK(generator_block_key(m1, 1000, 5) == generator_block_key(m2, 1000, 5));
  CHECK(generator_block_key(m1, 1000, 5) != generator_block_key(m3, 1000, 5));
  CHECK(generator_block_key(m1, 1000, 5) != generator_block_key(m1, 1000, 6));
  CHECK(generator_block_key(m1, 1000, 5) != generator_block_key(m1, 1001, 5));

  std::vector<double> block;
  fill_generator_block(m1, 2000, 5, block);
  const auto direct = sample_gamma_generator(std::vector<double>{1.0, 2.0}, 2000, 5);
  CHECK(block == direct.data);
}

TEST_CASE("coupled blocks share randomness for nearby dirichlet models") {
  const auto m1 = ModelSpec::dirichlet({1.0, 1.0});
  const auto m2 = ModelSpec::dirichlet({1.0 + 1e-9, 1.0 + 1e-9});
  std::vector<double> z1, z2;
  const bool coupled = fill_coupled_blocks(m1, m2, 5000, 7, z1, z2);
  CHECK(coupled);
  REQUIRE(z1.size() == z2.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < z1.size(); ++i) worst = std::max(worst, std::abs(z1[i] - z2[i]));
  CHECK(worst < 1e-5);
}

TEST_CASE("coupled blocks share gaussians for husler-reiss pairs") {
  const auto m1 = ModelSpec::husler_reiss(gamma2(1.0));
  const auto m2 = ModelSpec::husler_reiss(gamma2(1.0 + 1e-10));
  std::vector<double> z1, z2;
  const bool coupled = fill_coupled_blocks(m1, m2, 5000, 7, z1, z2);
  CHECK(coupled);
  double worst = 0.0;
  for (std::size_t i = 0; i < z1.size(); ++i) worst = std::max(worst, std::abs(z1[i] - z2[i]));
  CHECK(worst < 1e-4);
}

TEST_CASE("choquet max-stable sampler hits the exact cdf") {
  const auto tau = testutil::catalog_tau('B');
  const auto m = ModelSpec::choquet(tau);
  const std::uint64_t n = 200000;
  const auto s = sample_choquet_maxstable(tau, n, 77);
  REQUIRE(s.d == 3);
  const std::vector<std::vector<double>> probes{
      {1.0, 1.0, 1.0}, {0.5, 1.5, 2.0}, {2.0, 2.0, 0.7}, {3.0, 0.9, 1.2}};
  for (const auto& x : probes) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double* r = s.row(i);
      if (r[0] <= x[0] && r[1] <= x[1] && r[2] <= x[2]) ++count;
    }
    const double emp = static_cast<double>(count) / static_cast<double>(n);
    const double truth = cdf(m, x).value;
    const double se = std::sqrt(truth * (1.0 - truth) / static_cast<double>(n));
    CHECK(std::abs(emp - truth) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("choquet sampler margins are unit frechet") {
  const auto s = sample_choquet_maxstable(testutil::catalog_tau('A'), 200000, 5);
  for (int j = 0; j < 3; ++j) {
    std::uint64_t le1 = 0;
    for (std::uint64_t i = 0; i < s.n; ++i)
      if (s.row(i)[j] <= 1.0) ++le1;
    const double emp = static_cast<double>(le1) / static_cast<double>(s.n);
    CHECK(emp == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
  }
}

TEST_CASE("convex function catalog") {
  CHECK(apply_convex_fn(ConvexFn::identity, 2.5) == 2.5);
  CHECK(apply_convex_fn(ConvexFn::square, 3.0) == 9.0);
  CHECK(apply_convex_fn(ConvexFn::max_one, 0.2) == 1.0);
  CHECK(apply_convex_fn(ConvexFn::max_one, 1.7) == 1.7);
  CHECK(apply_convex_fn(ConvexFn::neg_min_one, 0.2) == -0.2);
  CHECK(apply_convex_fn(ConvexFn::abs_dev_one, 0.25) == 0.75);
}

TEST_CASE("gamma dispersion shrinks along the alpha ladder") {
  const std::vector<double> alphas{0.5, 1.0, 2.0, 4.0};
  const auto rep = gamma_monotonicity_check(alphas, ConvexFn::square, 300000, 3);
  REQUIRE(rep.values.size() == 4);
  CHECK(rep.nonincreasing);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double truth = 1.0 + 1.0 / alphas[k];
    CHECK(std::abs(rep.values[k].mean - truth) <= 4.0 * rep.values[k].stderr_mean);
  }
  for (std::size_t k = 0; k + 1 < alphas.size(); ++k)
    CHECK(rep.step_means[k] <= 3.0 * rep.step_stderrs[k]);
}

TEST_CASE("identity convex function is flat in alpha") {
  const std::vector<double> alphas{0.5, 2.0};
  const auto rep = gamma_monotonicity_check(alphas, ConvexFn::identity, 200000, 4);
  CHECK(rep.nonincreasing);
  for (const auto& v : rep.values) CHECK(std::abs(v.mean - 1.0) <= 4.0 * v.stderr_mean);
}

TEST_CASE("triangular array report shape") {
  const std::vector<double> levels{100.0, 1000.0};
  const std::vector<std::vector<double>> probes{{0.0, 0.0}, {1.0, 0.5}};
  const auto rep = triangular_array_hr_demo(gamma2(1.0), levels, 4000, 17, probes);
  REQUIRE(rep.levels.size() == 2);
  for (const auto& lv : rep.levels) {
    REQUIRE(lv.empirical.size() == probes.size());
    REQUIRE(lv.limit.size() == probes.size());
    for (double p : lv.empirical) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    for (double p : lv.limit) {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
    CHECK(lv.max_abs_discrepancy >= 0.0);
    CHECK(lv.max_abs_discrepancy <= 1.0);
    CHECK(lv.u > 0.0);
  }
}
