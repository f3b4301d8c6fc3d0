#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "maxstab/subsets.hpp"

using namespace maxstab;

TEST_CASE("mask primitives") {
  CHECK(subset_size(0b1011u) == 3);
  CHECK(full_mask(3) == 0b111u);
  CHECK(singleton(1) == 0b001u);
  CHECK(singleton(3) == 0b100u);
  CHECK(contains(0b101u, 1));
  CHECK(!contains(0b101u, 2));
  CHECK(contains(0b101u, 3));
  CHECK(mask_to_string(0b101u) == "{1,3}");
  CHECK(mask_to_string(singleton(2)) == "{2}");
}

TEST_CASE("mask index round trip") {
  const std::vector<int> idx{1, 3, 4};
  const mask_t m = mask_from_indices(idx, 5);
  CHECK(m == 0b1101u);
  CHECK(mask_indices(m) == idx);
  CHECK_THROWS_AS((void)mask_from_indices(std::vector<int>{0}, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)mask_from_indices(std::vector<int>{4}, 3), std::invalid_argument);
}

TEST_CASE("check_dim bounds") {
  CHECK_NOTHROW(check_dim(1));
  CHECK_NOTHROW(check_dim(kMaxDim));
  CHECK_THROWS_AS(check_dim(0), std::invalid_argument);
  CHECK_THROWS_AS(check_dim(kMaxDim + 1), std::invalid_argument);
}

TEST_CASE("enumerate_subsets counts and order") {
  const auto all = enumerate_subsets(4, false);
  const auto ne = enumerate_subsets(4, true);
  CHECK(all.size() == 16);
  CHECK(ne.size() == 15);
  CHECK(all.front() == 0u);
  CHECK(ne.front() == 1u);
  CHECK(ne.back() == full_mask(4));
}

TEST_CASE("zeta and moebius invert each other over subsets") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int d = 1; d <= 6; ++d) {
    std::vector<double> f(std::size_t{1} << d);
    for (double& v : f) v = unif(rng);
    auto g = f;
    zeta_subsets(g, d);
    moebius_subsets(g, d);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == doctest::Approx(f[i]).epsilon(1e-12));
  }
}

TEST_CASE("zeta and moebius invert each other over supersets") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int d = 1; d <= 6; ++d) {
    std::vector<double> f(std::size_t{1} << d);
    for (double& v : f) v = unif(rng);
    auto g = f;
    zeta_supersets(g, d);
    moebius_supersets(g, d);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == doctest::Approx(f[i]).epsilon(1e-12));
  }
}

TEST_CASE("zeta_subsets computes cumulative subset sums") {
  std::vector<double> f{0.0, 1.0, 2.0, 4.0};
  zeta_subsets(f, 2);
  CHECK(f[0b01] == 1.0);
  CHECK(f[0b10] == 2.0);
  CHECK(f[0b11] == 7.0);
}

TEST_CASE("signed_subset_sum inclusion-exclusion rule") {
  // f(I) = |I| makes sum over nonempty I of (-1)^(|I|+1) |I| easy to check:
  // for |A| = n the value is sum_k C(n,k) (-1)^(k+1) k = 0 for n >= 2, 1 at n=1.
  std::vector<double> f(16);
  for (mask_t m = 1; m < 16; ++m) f[m] = subset_size(m);
  CHECK(signed_subset_sum(f, 0b0001u, SignRule::incl_excl) == doctest::Approx(1.0));
  CHECK(signed_subset_sum(f, 0b0011u, SignRule::incl_excl) == doctest::Approx(0.0));
  CHECK(signed_subset_sum(f, 0b1111u, SignRule::incl_excl) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)signed_subset_sum(f, 0u, SignRule::incl_excl), std::invalid_argument);
}

TEST_CASE("signed_subset_sum moebius rule matches transform") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = 4;
  std::vector<double> f(std::size_t{1} << d);
  f[0] = 0.0;
  for (mask_t m = 1; m < f.size(); ++m) f[m] = unif(rng);
  auto g = f;
  moebius_subsets(g, d);
  for (mask_t a = 1; a < f.size(); ++a)
    CHECK(signed_subset_sum(f, a, SignRule::moebius) == doctest::Approx(g[a]).epsilon(1e-12));
}

TEST_CASE("signed_subset_sum rejects NaN entries") {
  std::vector<double> f(4, 1.0);
  f[0b10] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)signed_subset_sum(f, 0b11u, SignRule::incl_excl), std::invalid_argument);
}
