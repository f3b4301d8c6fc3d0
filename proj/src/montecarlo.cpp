#include "maxstab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "maxstab/rng.hpp"
#include "maxstab/special.hpp"
#include "maxstab/variogram.hpp"

namespace maxstab {

namespace {

constexpr std::uint64_t kChunk = 16384;
const std::uint64_t kGenTag = fnv1a("generator-block");
const std::uint64_t kPairTag = fnv1a("coupled-block");

int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MAXSTAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v < static_cast<long>(hw)) hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(hw);
}

// Runs fn(chunk_index, first_row, row_count) for every chunk of [0, n).
// Chunks own independent RNG streams, so any schedule yields identical data;
// callers that accumulate must merge per-chunk results in chunk order.
void for_each_chunk(std::uint64_t n, const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  const int threads = std::min<int>(thread_budget(), static_cast<int>(chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      fn(c, c * kChunk, std::min<std::uint64_t>(kChunk, n - c * kChunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      fn(c, c * kChunk, std::min<std::uint64_t>(kChunk, n - c * kChunk));
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

struct HrFactor {
  Eigen::MatrixXd a;              // Sigma = a a'
  std::vector<double> half_var;   // Sigma_jj / 2
};

HrFactor hr_factor(const Eigen::MatrixXd& gamma, int anchor) {
  const int d = static_cast<int>(gamma.rows());
  if (anchor < 1 || anchor > d) throw std::invalid_argument("hr generator: anchor outside 1..d");
  const int k = anchor - 1;
  Eigen::MatrixXd sigma(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      sigma(i, j) = 0.5 * (gamma(i, k) + gamma(j, k) - gamma(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const Eigen::VectorXd lam = es.eigenvalues();
  const double clip = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() < -clip)
    throw std::runtime_error("hr generator: covariance factorization failure beyond clip tolerance");
  Eigen::VectorXd root = lam.cwiseMax(0.0).cwiseSqrt();
  HrFactor f;
  f.a = es.eigenvectors() * root.asDiagonal();
  f.half_var.resize(d);
  for (int j = 0; j < d; ++j) f.half_var[j] = 0.5 * sigma(j, j);
  return f;
}

struct SpectralAtom {
  mask_t set;
  double mass;
  double cum;  // cumulative probability
};

// Generator context: everything needed to emit rows of E Z = 1 samples.
struct GenCtx {
  Family fam;
  int d = 0;
  std::vector<double> alpha;
  HrFactor hr;
  std::vector<SpectralAtom> atoms;
  double total_mass = 0.0;
};

GenCtx make_ctx(const ModelSpec& m) {
  GenCtx c;
  c.fam = m.family();
  c.d = m.dim();
  switch (m.family()) {
    case Family::dirichlet:
      c.alpha = m.alpha();
      break;
    case Family::husler_reiss:
      c.hr = hr_factor(m.gamma(), 1);
      break;
    case Family::choquet: {
      const auto& tau = m.tau().values;
      for (mask_t s = 1; s < tau.size(); ++s)
        if (tau[s] > 0.0) c.total_mass += tau[s];
      double cum = 0.0;
      for (mask_t s = 1; s < tau.size(); ++s)
        if (tau[s] > 0.0) {
          cum += tau[s] / c.total_mass;
          c.atoms.push_back({s, tau[s], cum});
        }
      if (!c.atoms.empty()) c.atoms.back().cum = 1.0;
      break;
    }
    case Family::independent: {
      // Spectral form of independence: Z = d e_i with equal probability.
      for (int i = 0; i < c.d; ++i)
        c.atoms.push_back({mask_t{1} << i, 1.0, static_cast<double>(i + 1) / c.d});
      c.total_mass = static_cast<double>(c.d);
      break;
    }
    case Family::fully_dependent:
      break;
  }
  return c;
}

void gen_rows(const GenCtx& c, RngStream& rng, double* out, std::uint64_t rows) {
  const int d = c.d;
  switch (c.fam) {
    case Family::fully_dependent:
      std::fill(out, out + rows * d, 1.0);
      return;
    case Family::independent:
    case Family::choquet: {
      for (std::uint64_t r = 0; r < rows; ++r, out += d) {
        const double u = rng.next_open01();
        std::size_t lo = 0, hi = c.atoms.size() - 1;
        while (lo < hi) {
          const std::size_t mid = (lo + hi) / 2;
          (c.atoms[mid].cum < u) ? lo = mid + 1 : hi = mid;
        }
        const SpectralAtom& a = c.atoms[lo];
        for (int i = 0; i < d; ++i) out[i] = 0.0;
        for (int i = 0; i < d; ++i)
          if (a.set & (mask_t{1} << i)) out[i] = c.total_mass;
      }
      return;
    }
    case Family::dirichlet: {
      for (std::uint64_t r = 0; r < rows; ++r, out += d)
        for (int i = 0; i < d; ++i) out[i] = sample_gamma(rng, c.alpha[i]) / c.alpha[i];
      return;
    }
    case Family::husler_reiss: {
      std::vector<double> xi(d);
      for (std::uint64_t r = 0; r < rows; ++r, out += d) {
        NormalSource normals(rng);
        for (int i = 0; i < d; ++i) xi[i] = normals();
        for (int j = 0; j < d; ++j) {
          double w = 0.0;
          for (int i = 0; i < d; ++i) w += c.hr.a(j, i) * xi[i];
          out[j] = std::exp(w - c.hr.half_var[j]);
        }
      }
      return;
    }
  }
}

std::uint64_t block_key_raw(std::uint64_t params_hash, std::uint64_t n, std::uint64_t seed) {
  std::uint64_t h = mix64(kGenTag ^ params_hash);
  h = mix64(h ^ (n * kGolden));
  h = mix64(h ^ (seed + kGolden));
  return h;
}

struct MeanAcc {
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
  }
  void merge(const MeanAcc& o) {
    sum += o.sum;
    sumsq += o.sumsq;
  }
};

McEstimate finish(const MeanAcc& acc, std::uint64_t n, std::uint64_t seed, std::string name) {
  McEstimate e;
  e.n = n;
  e.seed = seed;
  e.estimand = std::move(name);
  e.mean = acc.sum / static_cast<double>(n);
  const double var = std::max(0.0, (acc.sumsq - static_cast<double>(n) * e.mean * e.mean) /
                                       (static_cast<double>(n) - 1.0));
  e.stderr_mean = std::sqrt(var / static_cast<double>(n));
  return e;
}

// Streams the model's canonical block through a row functional.
McEstimate estimate_functional(const ModelSpec& m, std::uint64_t n, std::uint64_t seed,
                               const std::function<double(const double*)>& f, std::string name) {
  if (n < 2) throw std::invalid_argument("monte carlo: need n >= 2");
  const GenCtx ctx = make_ctx(m);
  const std::uint64_t key = block_key_raw(m.params_hash(), n, seed);
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<MeanAcc> part(chunks);
  for_each_chunk(n, [&](std::size_t c, std::uint64_t, std::uint64_t rows) {
    RngStream rng(derive_stream_key(seed, key, c));
    std::vector<double> buf(rows * ctx.d);
    gen_rows(ctx, rng, buf.data(), rows);
    for (std::uint64_t r = 0; r < rows; ++r) part[c].add(f(buf.data() + r * ctx.d));
  });
  MeanAcc total;
  for (const MeanAcc& p : part) total.merge(p);
  return finish(total, n, seed, std::move(name));
}

}  // namespace

std::uint64_t generator_block_key(const ModelSpec& m, std::uint64_t n, std::uint64_t seed) {
  return block_key_raw(m.params_hash(), n, seed);
}

void fill_generator_block(const ModelSpec& m, std::uint64_t n, std::uint64_t seed,
                          std::vector<double>& out) {
  const GenCtx ctx = make_ctx(m);
  out.assign(static_cast<std::size_t>(n) * ctx.d, 0.0);
  const std::uint64_t key = block_key_raw(m.params_hash(), n, seed);
  for_each_chunk(n, [&](std::size_t c, std::uint64_t first, std::uint64_t rows) {
    RngStream rng(derive_stream_key(seed, key, c));
    gen_rows(ctx, rng, out.data() + first * ctx.d, rows);
  });
}

SampleMatrix sample_gamma_generator(std::span<const double> alpha, std::uint64_t n,
                                    std::uint64_t seed) {
  ModelSpec m = ModelSpec::dirichlet({alpha.begin(), alpha.end()});
  SampleMatrix s{n, m.dim(), {}};
  fill_generator_block(m, n, seed, s.data);
  return s;
}

SampleMatrix sample_dirichlet_generator(std::span<const double> alpha, std::uint64_t n,
                                        std::uint64_t seed) {
  const int d = static_cast<int>(alpha.size());
  ModelSpec m = ModelSpec::dirichlet({alpha.begin(), alpha.end()});  // validates alpha
  double abar = 0.0;
  for (double a : alpha) abar += a;
  SampleMatrix s{n, d, {}};
  s.data.resize(static_cast<std::size_t>(n) * d);
  const std::uint64_t key = mix64(block_key_raw(m.params_hash(), n, seed) ^ fnv1a("dirichlet-route"));
  for_each_chunk(n, [&](std::size_t c, std::uint64_t first, std::uint64_t rows) {
    RngStream rng(derive_stream_key(seed, key, c));
    double* out = s.data.data() + first * d;
    for (std::uint64_t r = 0; r < rows; ++r, out += d) {
      double tot = 0.0;
      for (int i = 0; i < d; ++i) {
        out[i] = sample_gamma(rng, alpha[i]);
        tot += out[i];
      }
      for (int i = 0; i < d; ++i) out[i] = abar * out[i] / (tot * alpha[i]);
    }
  });
  return s;
}

SampleMatrix sample_hr_generator(const Eigen::MatrixXd& gamma, int anchor, std::uint64_t n,
                                 std::uint64_t seed) {
  validate_variogram(gamma);
  const int d = static_cast<int>(gamma.rows());
  const HrFactor f = hr_factor(gamma, anchor);
  SampleMatrix s{n, d, {}};
  s.data.resize(static_cast<std::size_t>(n) * d);
  std::uint64_t ph = fnv1a("husler_reiss");
  ph = fnv1a_bytes(gamma.data(), static_cast<std::size_t>(gamma.size()) * sizeof(double), ph);
  ph = fnv1a_bytes(&anchor, sizeof(anchor), ph);
  const std::uint64_t key = block_key_raw(ph, n, seed);
  for_each_chunk(n, [&](std::size_t c, std::uint64_t first, std::uint64_t rows) {
    RngStream rng(derive_stream_key(seed, key, c));
    std::vector<double> xi(d);
    double* out = s.data.data() + first * d;
    for (std::uint64_t r = 0; r < rows; ++r, out += d) {
      NormalSource normals(rng);
      for (int i = 0; i < d; ++i) xi[i] = normals();
      for (int j = 0; j < d; ++j) {
        double w = 0.0;
        for (int i = 0; i < d; ++i) w += f.a(j, i) * xi[i];
        out[j] = std::exp(w - f.half_var[j]);
      }
    }
  });
  return s;
}

SampleMatrix sample_choquet_maxstable(const CoefficientTable& tau, std::uint64_t n,
                                      std::uint64_t seed) {
  ModelSpec m = ModelSpec::choquet(tau, 1e-9);
  const int d = m.dim();
  std::vector<SpectralAtom> atoms;
  for (mask_t s = 1; s < m.tau().values.size(); ++s)
    if (m.tau().values[s] > 0.0) atoms.push_back({s, m.tau().values[s], 0.0});
  SampleMatrix out{n, d, {}};
  out.data.resize(static_cast<std::size_t>(n) * d);
  const std::uint64_t key = mix64(block_key_raw(m.params_hash(), n, seed) ^ fnv1a("maxstable"));
  for_each_chunk(n, [&](std::size_t c, std::uint64_t first, std::uint64_t rows) {
    RngStream rng(derive_stream_key(seed, key, c));
    double* row = out.data.data() + first * d;
    for (std::uint64_t r = 0; r < rows; ++r, row += d) {
      for (int i = 0; i < d; ++i) row[i] = 0.0;
      for (const SpectralAtom& a : atoms) {
        const double v = a.mass * sample_frechet(rng);
        for (int i = 0; i < d; ++i)
          if (a.set & (mask_t{1} << i))
            if (v > row[i]) row[i] = v;
      }
    }
  });
  return out;
}

McEstimate estimate_ell(const ModelSpec& m, std::span<const double> x, std::uint64_t n,
                        std::uint64_t seed) {
  if (static_cast<int>(x.size()) != m.dim())
    throw std::invalid_argument("estimate_ell: dimension mismatch");
  std::vector<double> w(x.begin(), x.end());
  const int d = m.dim();
  return estimate_functional(
      m, n, seed,
      [w, d](const double* z) {
        double mx = 0.0;
        for (int i = 0; i < d; ++i) mx = std::max(mx, w[i] * z[i]);
        return mx;
      },
      "ell");
}

McEstimate estimate_directional_chi(const ModelSpec& m, std::span<const double> w, mask_t a,
                                    std::uint64_t n, std::uint64_t seed) {
  if (static_cast<int>(w.size()) != m.dim())
    throw std::invalid_argument("estimate_directional_chi: dimension mismatch");
  if (a == 0 || a > full_mask(m.dim()))
    throw std::invalid_argument("estimate_directional_chi: bad subset");
  std::vector<std::pair<int, double>> sel;
  for (int i = 1; i <= m.dim(); ++i)
    if (contains(a, i)) sel.emplace_back(i - 1, w[i - 1]);
  return estimate_functional(
      m, n, seed,
      [sel](const double* z) {
        double mn = std::numeric_limits<double>::infinity();
        for (const auto& [i, wi] : sel) mn = std::min(mn, wi * z[i]);
        return mn;
      },
      "directional_chi");
}

bool fill_coupled_blocks(const ModelSpec& m1, const ModelSpec& m2, std::uint64_t n,
                         std::uint64_t seed, std::vector<double>& z1, std::vector<double>& z2) {
  const int d = m1.dim();
  z1.assign(static_cast<std::size_t>(n) * d, 0.0);
  z2.assign(static_cast<std::size_t>(n) * m2.dim(), 0.0);
  const std::uint64_t key =
      mix64(kPairTag ^ mix64(m1.params_hash() + 3 * mix64(m2.params_hash()))) ^
      mix64(n * kGolden + seed);

  if (m1.family() == Family::dirichlet && m2.family() == Family::dirichlet && m2.dim() == d) {
    // Gamma additivity: Gamma(hi) = Gamma(lo) + Gamma(hi - lo), a monotone
    // coupling along each coordinate.
    const std::vector<double>& a = m1.alpha();
    const std::vector<double>& b = m2.alpha();
    for_each_chunk(n, [&](std::size_t c, std::uint64_t first, std::uint64_t rows) {
      RngStream rng(derive_stream_key(seed, key, c));
      double* o1 = z1.data() + first * d;
      double* o2 = z2.data() + first * d;
      for (std::uint64_t r = 0; r < rows; ++r, o1 += d, o2 += d)
        for (int i = 0; i < d; ++i) {
          const double lo = std::min(a[i], b[i]), hi = std::max(a[i], b[i]);
          const double glo = sample_gamma(rng, lo);
          const double ghi = hi > lo ? glo + sample_gamma(rng, hi - lo) : glo;
          o1[i] = (a[i] <= b[i] ? glo : ghi) / a[i];
          o2[i] = (a[i] <= b[i] ? ghi : glo) / b[i];
        }
    });
    return true;
  }
  if (m1.family() == Family::husler_reiss && m2.family() == Family::husler_reiss &&
      m2.dim() == d) {
    const HrFactor f1 = hr_factor(m1.gamma(), 1);
    const HrFactor f2 = hr_factor(m2.gamma(), 1);
    for_each_chunk(n, [&](std::size_t c, std::uint64_t first, std::uint64_t rows) {
      RngStream rng(derive_stream_key(seed, key, c));
      std::vector<double> xi(d);
      double* o1 = z1.data() + first * d;
      double* o2 = z2.data() + first * d;
      for (std::uint64_t r = 0; r < rows; ++r, o1 += d, o2 += d) {
        NormalSource normals(rng);
        for (int i = 0; i < d; ++i) xi[i] = normals();
        for (int j = 0; j < d; ++j) {
          double w1 = 0.0, w2 = 0.0;
          for (int i = 0; i < d; ++i) {
            w1 += f1.a(j, i) * xi[i];
            w2 += f2.a(j, i) * xi[i];
          }
          o1[j] = std::exp(w1 - f1.half_var[j]);
          o2[j] = std::exp(w2 - f2.half_var[j]);
        }
      }
    });
    return true;
  }
  fill_generator_block(m1, n, seed, z1);
  fill_generator_block(m2, n, mix64(seed + kGolden), z2);
  return false;
}

double apply_convex_fn(ConvexFn f, double x) {
  switch (f) {
    case ConvexFn::identity: return x;
    case ConvexFn::square: return x * x;
    case ConvexFn::max_one: return std::max(x, 1.0);
    case ConvexFn::neg_min_one: return -std::min(x, 1.0);
    case ConvexFn::abs_dev_one: return std::abs(x - 1.0);
  }
  throw std::logic_error("apply_convex_fn: unreachable");
}

GammaMonotonicityReport gamma_monotonicity_check(std::span<const double> alphas, ConvexFn g,
                                                 std::uint64_t n, std::uint64_t seed) {
  const std::size_t k = alphas.size();
  if (k < 2) throw std::invalid_argument("gamma_monotonicity_check: need at least two alphas");
  for (std::size_t i = 0; i < k; ++i)
    if (!(alphas[i] > 0.0) || (i + 1 < k && alphas[i] > alphas[i + 1]))
      throw std::invalid_argument("gamma_monotonicity_check: alphas must be positive ascending");
  const std::uint64_t key = mix64(fnv1a("gamma-ladder") ^ (n * kGolden) ^ mix64(seed));
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<std::vector<MeanAcc>> val_part(chunks, std::vector<MeanAcc>(k));
  std::vector<std::vector<MeanAcc>> diff_part(chunks, std::vector<MeanAcc>(k - 1));
  std::vector<double> av(alphas.begin(), alphas.end());
  for_each_chunk(n, [&](std::size_t c, std::uint64_t, std::uint64_t rows) {
    RngStream rng(derive_stream_key(seed, key, c));
    for (std::uint64_t r = 0; r < rows; ++r) {
      double gcur = sample_gamma(rng, av[0]);
      double prev = apply_convex_fn(g, gcur / av[0]);
      val_part[c][0].add(prev);
      for (std::size_t j = 1; j < k; ++j) {
        if (av[j] > av[j - 1]) gcur += sample_gamma(rng, av[j] - av[j - 1]);
        const double cur = apply_convex_fn(g, gcur / av[j]);
        val_part[c][j].add(cur);
        diff_part[c][j - 1].add(cur - prev);
        prev = cur;
      }
    }
  });
  GammaMonotonicityReport rep;
  rep.alphas = av;
  for (std::size_t j = 0; j < k; ++j) {
    MeanAcc acc;
    for (std::size_t c = 0; c < chunks; ++c) acc.merge(val_part[c][j]);
    rep.values.push_back(finish(acc, n, seed, "E g(G/alpha), alpha=" + std::to_string(av[j])));
  }
  rep.nonincreasing = true;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    MeanAcc acc;
    for (std::size_t c = 0; c < chunks; ++c) acc.merge(diff_part[c][j]);
    const McEstimate e = finish(acc, n, seed, "step");
    rep.step_means.push_back(e.mean);
    rep.step_stderrs.push_back(e.stderr_mean);
    if (e.mean > 3.0 * e.stderr_mean) rep.nonincreasing = false;
  }
  return rep;
}

TriangularArrayReport triangular_array_hr_demo(const Eigen::MatrixXd& gamma,
                                               std::span<const double> levels, std::uint64_t reps,
                                               std::uint64_t seed,
                                               std::span<const std::vector<double>> probes) {
  validate_variogram(gamma);
  if (probes.empty()) throw std::invalid_argument("triangular_array_hr_demo: no probes");
  if (reps < 2) throw std::invalid_argument("triangular_array_hr_demo: reps must be >= 2");
  const int d = static_cast<int>(gamma.rows());
  for (const auto& p : probes)
    if (static_cast<int>(p.size()) != d)
      throw std::invalid_argument("triangular_array_hr_demo: probe dimension mismatch");
  const ModelSpec limit_model =
      d == 1 ? ModelSpec::fully_dependent(1) : ModelSpec::husler_reiss(gamma);

  TriangularArrayReport rep;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double nl = levels[li];
    const auto rows = static_cast<std::uint64_t>(std::llround(nl));
    if (rows < 2) throw std::invalid_argument("triangular_array_hr_demo: level must be >= 2");
    Eigen::MatrixXd corr(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        corr(i, j) = i == j ? 1.0 : std::exp(-gamma(i, j) / (4.0 * std::log(nl)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr);
    const double clip = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -clip)
      throw std::runtime_error(
          "triangular_array_hr_demo: correlation matrix not positive semidefinite at level " +
          std::to_string(nl));
    const Eigen::MatrixXd a = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    TriangularArrayLevel lev;
    lev.n_level = nl;
    lev.u = gaussian_max_level(nl);
    const double u = lev.u;

    const std::uint64_t key = mix64(fnv1a("triangular-array") ^ mix64(seed) ^ (li * kGolden));
    const std::size_t chunks = static_cast<std::size_t>((reps + kChunk - 1) / kChunk);
    std::vector<std::vector<std::uint64_t>> counts(chunks,
                                                   std::vector<std::uint64_t>(probes.size(), 0));
    for_each_chunk(reps, [&](std::size_t c, std::uint64_t, std::uint64_t nrep) {
      RngStream rng(derive_stream_key(seed, key, c));
      std::vector<double> xi(d), y(d), mx(d);
      for (std::uint64_t r = 0; r < nrep; ++r) {
        NormalSource normals(rng);
        std::fill(mx.begin(), mx.end(), -std::numeric_limits<double>::infinity());
        for (std::uint64_t t = 0; t < rows; ++t) {
          for (int i = 0; i < d; ++i) xi[i] = normals();
          for (int j = 0; j < d; ++j) {
            double w = 0.0;
            for (int i = 0; i < d; ++i) w += a(j, i) * xi[i];
            if (w > mx[j]) mx[j] = w;
          }
        }
        for (std::size_t p = 0; p < probes.size(); ++p) {
          bool below = true;
          for (int j = 0; j < d && below; ++j) below = u * (mx[j] - u) <= probes[p][j];
          if (below) ++counts[c][p];
        }
      }
    });

    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::uint64_t total = 0;
      for (std::size_t c = 0; c < chunks; ++c) total += counts[c][p];
      lev.empirical.push_back(static_cast<double>(total) / static_cast<double>(reps));
      std::vector<double> x(d);
      for (int j = 0; j < d; ++j) x[j] = std::exp(probes[p][j]);
      lev.limit.push_back(cdf(limit_model, x).value);
      lev.max_abs_discrepancy =
          std::max(lev.max_abs_discrepancy, std::abs(lev.empirical[p] - lev.limit[p]));
    }
    rep.levels.push_back(std::move(lev));
  }
  return rep;
}

}  // namespace maxstab
