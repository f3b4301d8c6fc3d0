#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxstab {

// Subsets of {1,...,d} are bitmasks: index i corresponds to bit i-1.
// Dense tables over subsets are vectors of length 2^d indexed by mask,
// with entry 0 (the empty set) fixed to 0 unless stated otherwise.
using mask_t = std::uint32_t;

constexpr int kMaxDim = 20;       // mask-addressable dimension cap
constexpr int kMaxExactDim = 12;  // cap for dense 2^d coefficient algebra

inline int subset_size(mask_t m) { return std::popcount(m); }

inline mask_t full_mask(int d) { return (mask_t{1} << d) - 1; }

inline bool contains(mask_t m, int i) { return (m >> (i - 1)) & 1u; }

inline mask_t singleton(int i) { return mask_t{1} << (i - 1); }

inline void check_dim(int d, int cap = kMaxDim) {
  if (d < 1 || d > cap)
    throw std::invalid_argument("dimension d=" + std::to_string(d) +
                                " outside supported range [1," + std::to_string(cap) + "]");
}

// 1-based indices of a mask, ascending.
inline std::vector<int> mask_indices(mask_t m) {
  std::vector<int> out;
  for (int i = 1; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline mask_t mask_from_indices(std::span<const int> idx, int d) {
  mask_t m = 0;
  for (int i : idx) {
    if (i < 1 || i > d)
      throw std::invalid_argument("subset index " + std::to_string(i) +
                                  " outside 1.." + std::to_string(d));
    m |= singleton(i);
  }
  return m;
}

inline std::string mask_to_string(mask_t m) {
  std::string s = "{";
  bool first = true;
  for (int i : mask_indices(m)) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

// All subset masks of {1..d} in increasing numeric (increasing-bits) order.
inline std::vector<mask_t> enumerate_subsets(int d, bool nonempty_only = true) {
  check_dim(d);
  std::vector<mask_t> out;
  out.reserve((std::size_t{1} << d) - (nonempty_only ? 1 : 0));
  for (mask_t m = nonempty_only ? 1 : 0; m <= full_mask(d); ++m) out.push_back(m);
  return out;
}

enum class SignRule {
  incl_excl,  // sum over nonempty I subset A of (-1)^(|I|+1) f(I)
  moebius,    // sum over I subset A of (-1)^(|A\I|) f(I), f(empty)=0
};

// Direct signed subset sum over a dense table f (indexed by mask, f[0]
// ignored).  Runs in O(2^|A|); the coefficient conversions use the O(d 2^d)
// transforms below instead.
inline double signed_subset_sum(std::span<const double> f, mask_t a, SignRule rule) {
  if (a == 0) throw std::invalid_argument("signed_subset_sum: empty subset");
  if (f.size() < (std::size_t{1} << std::bit_width(a)))
    throw std::invalid_argument("signed_subset_sum: table too small for subset");
  const int na = subset_size(a);
  double s = 0.0;
  for (mask_t i = a;; i = (i - 1) & a) {
    if (i != 0) {
      const double v = f[i];
      if (std::isnan(v))
        throw std::invalid_argument("signed_subset_sum: missing table entry for " + mask_to_string(i));
      const int ni = subset_size(i);
      const int sgn = (rule == SignRule::incl_excl) ? ((ni & 1) ? 1 : -1)
                                                    : (((na - ni) & 1) ? -1 : 1);
      s += sgn * v;
    }
    if (i == 0) break;
  }
  return s;
}

// In-place subset-sum (zeta) transform: f[A] <- sum_{I subset A} f[I].
inline void zeta_subsets(std::vector<double>& f, int d) {
  for (int j = 0; j < d; ++j)
    for (mask_t s = 0; s < f.size(); ++s)
      if (s & (mask_t{1} << j)) f[s] += f[s ^ (mask_t{1} << j)];
}

// Inverse of zeta_subsets.
inline void moebius_subsets(std::vector<double>& f, int d) {
  for (int j = 0; j < d; ++j)
    for (mask_t s = 0; s < f.size(); ++s)
      if (s & (mask_t{1} << j)) f[s] -= f[s ^ (mask_t{1} << j)];
}

// In-place superset-sum transform: f[A] <- sum_{K superset A} f[K].
inline void zeta_supersets(std::vector<double>& f, int d) {
  for (int j = 0; j < d; ++j)
    for (mask_t s = 0; s < f.size(); ++s)
      if (!(s & (mask_t{1} << j))) f[s] += f[s | (mask_t{1} << j)];
}

// Inverse of zeta_supersets: f[A] <- sum_{K superset A} (-1)^(|K\A|) f[K].
inline void moebius_supersets(std::vector<double>& f, int d) {
  for (int j = 0; j < d; ++j)
    for (mask_t s = 0; s < f.size(); ++s)
      if (!(s & (mask_t{1} << j))) f[s] -= f[s | (mask_t{1} << j)];
}

}  // namespace maxstab
