#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "maxstab/grids.hpp"
#include "maxstab/rng.hpp"
#include "maxstab/special.hpp"
#include "maxstab/variogram.hpp"

using namespace maxstab;

static std::size_t binom(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
  return static_cast<std::size_t>(c + 0.5);
}

TEST_CASE("rng streams are deterministic and key-separated") {
  RngStream a(42), b(42), c(43);
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  RngStream u(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.next_open01();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("derive_stream_key separates indices and tags") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t tag = 0; tag < 4; ++tag)
    for (std::uint64_t i = 0; i < 64; ++i) keys.insert(derive_stream_key(1, tag, i));
  CHECK(keys.size() == 256);
  CHECK(derive_stream_key(1, 0, 5) == derive_stream_key(1, 0, 5));
  CHECK(derive_stream_key(1, 0, 5) != derive_stream_key(2, 0, 5));
}

TEST_CASE("fnv1a hashing is stable") {
  CHECK(fnv1a("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a("a") != fnv1a("b"));
  const char buf[3] = {'a', 'b', 'c'};
  CHECK(fnv1a_bytes(buf, 3) == fnv1a("abc"));
}

TEST_CASE("simplex grid size matches the lattice count") {
  for (int d = 2; d <= 4; ++d)
    for (int m : {1, 2, 4, 8, 100}) {
      SimplexGrid g(d, m);
      CHECK(g.size() == binom(m + d - 1, d - 1));
      CHECK(g.dim() == d);
    }
}

TEST_CASE("simplex grid points lie on the simplex and are distinct") {
  SimplexGrid g(3, 7);
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.point(i);
    REQUIRE(p.size() == 3);
    double s = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    seen.insert(std::vector<double>(p.begin(), p.end()));
  }
  CHECK(seen.size() == g.size());
}

TEST_CASE("simplex grid contains vertices, barycenter only when divisible") {
  SimplexGrid g6(3, 6);
  bool has_bary = false, has_e1 = false;
  for (std::size_t i = 0; i < g6.size(); ++i) {
    const auto p = g6.point(i);
    if (p[0] == 1.0 && p[1] == 0.0 && p[2] == 0.0) has_e1 = true;
    if (std::abs(p[0] - 1.0 / 3) < 1e-15 && std::abs(p[1] - 1.0 / 3) < 1e-15) has_bary = true;
  }
  CHECK(has_e1);
  CHECK(has_bary);
  SimplexGrid g4(3, 4);
  bool bary4 = false;
  for (std::size_t i = 0; i < g4.size(); ++i) {
    const auto p = g4.point(i);
    if (std::abs(p[0] - 1.0 / 3) < 1e-6 && std::abs(p[1] - 1.0 / 3) < 1e-6) bary4 = true;
  }
  CHECK(!bary4);
}

TEST_CASE("interior_point clips zeros to 1/(4m)") {
  SimplexGrid g(2, 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.interior_point(i);
    for (double v : p) CHECK(v >= 1.0 / 32 - 1e-15);
  }
  CHECK(g.describe() == "simplex(d=2,m=8)");
}

TEST_CASE("simplex grid rejects bad parameters") {
  CHECK_THROWS_AS(SimplexGrid(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(SimplexGrid(4, 2000), std::invalid_argument);
  CHECK(SimplexGrid::default_resolution(2) == 64);
  CHECK(SimplexGrid::default_resolution(3) == 16);
  CHECK(SimplexGrid::default_resolution(5) == 8);
}

TEST_CASE("check_direction guards") {
  CHECK_NOTHROW(check_direction(std::vector<double>{0.5, 0.5}, false));
  CHECK_NOTHROW(check_direction(std::vector<double>{0.0, 1.0}, false));
  CHECK_THROWS_AS(check_direction(std::vector<double>{0.0, 1.0}, true), std::invalid_argument);
  CHECK_THROWS_AS(check_direction(std::vector<double>{-0.1, 1.0}, false), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(check_direction(std::vector<double>{nan, 1.0}, false), std::invalid_argument);
}

TEST_CASE("variogram validation accepts Brownian distances") {
  const int d = 4;
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = std::abs(i - j);
  CHECK_NOTHROW(validate_variogram(g));
}

TEST_CASE("variogram validation rejects malformed matrices") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
  g(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(validate_variogram(g), std::invalid_argument);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
  h(0, 0) = 0.5;  // nonzero diagonal
  CHECK_THROWS_AS(validate_variogram(h), std::invalid_argument);

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(3, 3);
  q(0, 1) = q(1, 0) = 0.01;
  q(1, 2) = q(2, 1) = 0.01;
  q(0, 2) = q(2, 0) = 4.0;  // far exceeds any Gaussian increment geometry
  CHECK_THROWS_AS(validate_variogram(q), std::invalid_argument);
}

TEST_CASE("normal cdf and pdf basics") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
  CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
}

TEST_CASE("gamma sampler matches moments") {
  for (double shape : {0.3, 1.0, 2.5}) {
    RngStream r(fnv1a("gamma-moments") + static_cast<std::uint64_t>(shape * 100));
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_gamma(r, shape);
      CHECK(x > 0.0);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("frechet sampler has the right cdf at probe points") {
  RngStream r(fnv1a("frechet-cdf"));
  const int n = 200000;
  int le1 = 0, le2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_frechet(r);
    if (x <= 1.0) ++le1;
    if (x <= 2.0) ++le2;
  }
  CHECK(static_cast<double>(le1) / n == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
  CHECK(static_cast<double>(le2) / n == doctest::Approx(std::exp(-0.5)).epsilon(0.01));
}
