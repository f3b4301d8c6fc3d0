#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "maxstab/coeffs.hpp"
#include "test_util.hpp"

using namespace maxstab;

namespace {

void check_tables_close(const CoefficientTable& a, const CoefficientTable& b, double tol) {
  REQUIRE(a.dim == b.dim);
  REQUIRE(a.kind == b.kind);
  for (std::size_t i = 1; i < a.values.size(); ++i) {
    CAPTURE(i);
    if (tol == 0.0)
      CHECK(a.values[i] == b.values[i]);
    else
      CHECK(std::abs(a.values[i] - b.values[i]) <= tol);
  }
}

}  // namespace

TEST_CASE("catalog coefficient values") {
  struct Row {
    char id;
    double chi12, chi123, theta12, theta123;
  };
  const Row rows[] = {{'A', 0.5, 0.3, 1.5, 1.8},
                      {'B', 0.6, 0.3, 1.4, 1.5},
                      {'C', 0.5, 0.4, 1.5, 1.9},
                      {'D', 0.7, 0.7, 1.3, 1.6}};
  for (const Row& r : rows) {
    CAPTURE(r.id);
    const auto tau = testutil::catalog_tau(r.id);
    const auto chi = tau_to_chi(tau);
    const auto theta = tau_to_theta(tau);
    for (mask_t pair : {mask_t{0b011}, mask_t{0b101}, mask_t{0b110}}) {
      CHECK(chi.values[pair] == doctest::Approx(r.chi12).epsilon(1e-12).scale(1.0));
      CHECK(theta.values[pair] == doctest::Approx(r.theta12).epsilon(1e-12).scale(1.0));
    }
    CHECK(chi.values[0b111] == doctest::Approx(r.chi123).epsilon(1e-12).scale(1.0));
    CHECK(theta.values[0b111] == doctest::Approx(r.theta123).epsilon(1e-12).scale(1.0));
    for (mask_t s : {mask_t{0b001}, mask_t{0b010}, mask_t{0b100}}) {
      CHECK(chi.values[s] == doctest::Approx(1.0));
      CHECK(theta.values[s] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("conversion paths commute on random tables") {
  std::mt19937_64 rng(2024);
  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto tau = testutil::random_tau(d, rng);
      const auto theta = tau_to_theta(tau);
      const auto chi = tau_to_chi(tau);
      check_tables_close(theta_to_chi(theta), chi, 1e-12);
      check_tables_close(chi_to_theta(chi), theta, 1e-12);
      check_tables_close(theta_to_tau(theta), tau, 1e-12);
      check_tables_close(chi_to_tau(chi), tau, 1e-12);
      check_tables_close(tau_to_theta(chi_to_tau(chi)), theta, 1e-12);
      check_tables_close(tau_to_chi(theta_to_tau(theta)), chi, 1e-12);
    }
  }
}

TEST_CASE("convert dispatch and identity") {
  std::mt19937_64 rng(5);
  const auto tau = testutil::random_tau(3, rng);
  check_tables_close(convert(tau, CoeffKind::tau), tau, 0.0);
  check_tables_close(convert(convert(tau, CoeffKind::theta), CoeffKind::tau), tau, 1e-13);
}

TEST_CASE("tau margins sum to one") {
  std::mt19937_64 rng(6);
  for (int d = 2; d <= 5; ++d) {
    const auto tau = testutil::random_tau(d, rng);
    const auto sums = tau_marginal_sums(tau);
    for (double s : sums) CHECK(s == doctest::Approx(1.0).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("validate_choquet_table accepts valid and rejects invalid") {
  CHECK_NOTHROW((void)validate_choquet_table(testutil::catalog_tau('A')));

  CoefficientTable neg(2, CoeffKind::tau);
  neg.values[0b01] = 1.2;
  neg.values[0b10] = 1.2;
  neg.values[0b11] = -0.2;
  CHECK_THROWS_AS((void)validate_choquet_table(neg), std::invalid_argument);

  CoefficientTable off(2, CoeffKind::tau);
  off.values[0b01] = 0.5;
  off.values[0b10] = 1.0;
  off.values[0b11] = 0.0;
  CHECK_THROWS_AS((void)validate_choquet_table(off), std::invalid_argument);

  // theta route: an extremal coefficient table that is not union-completely
  // alternating produces a negative mass and must be rejected.
  CoefficientTable th(2, CoeffKind::theta);
  th.values[0b01] = th.values[0b10] = 1.0;
  th.values[0b11] = 2.2;
  CHECK_THROWS_AS((void)validate_choquet_table(th), std::invalid_argument);
}

TEST_CASE("layer and spectral forms of the spectral ell agree") {
  std::mt19937_64 rng(7);
  for (int d = 2; d <= 5; ++d) {
    const auto tau = testutil::random_tau(d, rng);
    const auto theta = tau_to_theta(tau);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = testutil::random_direction(d, rng, 0.0, 2.0);
      const double a = choquet_ell_layer(theta, x);
      const double b = choquet_ell_spectral(tau, x);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("spectral ell hits the unit vectors and known bounds") {
  const auto tau = testutil::catalog_tau('B');
  const auto theta = tau_to_theta(tau);
  const std::vector<double> e1{1.0, 0.0, 0.0};
  CHECK(choquet_ell_spectral(tau, e1) == doctest::Approx(1.0));
  CHECK(choquet_ell_layer(theta, e1) == doctest::Approx(1.0));
  const std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(choquet_ell_spectral(tau, ones) == doctest::Approx(1.5));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = testutil::random_direction(3, rng, 0.0, 4.0);
    const double v = choquet_ell_spectral(tau, x);
    const double mx = std::max({x[0], x[1], x[2]});
    CHECK(v >= mx - 1e-12);
    CHECK(v <= x[0] + x[1] + x[2] + 1e-12);
  }
}

TEST_CASE("kind mismatch is rejected") {
  const auto tau = testutil::catalog_tau('A');
  CHECK_THROWS_AS((void)theta_to_chi(tau), std::invalid_argument);
  CHECK_THROWS_AS((void)choquet_ell_layer(tau, std::vector<double>{1, 1, 1}),
                  std::invalid_argument);
}
