#include "maxstab/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "maxstab/grids.hpp"
#include "maxstab/montecarlo.hpp"

namespace maxstab {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::lo: return "lo";
    case Relation::uo: return "uo";
    case Relation::pqd: return "pqd";
  }
  return "?";
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::holds_reversed: return "holds_reversed";
    case Outcome::incomparable: return "incomparable";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* exactness_name(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::grid_closed_form: return "grid_certificate";
    case Exactness::grid_monte_carlo: return "monte_carlo";
  }
  return "?";
}

int cli_exit_code(const OrderVerdict& v) {
  switch (v.outcome) {
    case Outcome::holds: return 0;
    case Outcome::holds_reversed:
    case Outcome::incomparable: return 1;
    case Outcome::inconclusive: return 4;
  }
  return 4;
}

double apply_bernstein(BernsteinFn f, double x) {
  switch (f) {
    case BernsteinFn::one_minus_exp: return -std::expm1(-x);
    case BernsteinFn::identity: return x;
    case BernsteinFn::log1p_fn: return std::log1p(x);
    case BernsteinFn::sqrt1p_minus_one: return x / (std::sqrt(1.0 + x) + 1.0);
  }
  throw std::logic_error("apply_bernstein: unreachable");
}

namespace {

constexpr double kCertTol = 1e-12;
constexpr std::size_t kWitnessCap = 16;

// One grid comparison: lhs <= rhs is the claim, diff = rhs - lhs.
struct Comparison {
  std::vector<double> point;
  mask_t subset = 0;
  double lhs = 0.0, rhs = 0.0, diff = 0.0;
  double tol = 0.0;   // exact-comparison tolerance (base + quadrature)
  double band = 0.0;  // 3 * stderr of the Monte Carlo difference, 0 if exact
  bool mc = false;
  // Per-sample extremes of the paired difference; a nonnegative minimum
  // certifies rhs >= lhs under the coupling regardless of the band.
  double min_d = std::numeric_limits<double>::infinity();
  double max_d = -std::numeric_limits<double>::infinity();
};

struct PointClass {
  bool ok_f, ok_b, viol_f, viol_b, indeterminate;
};

PointClass classify(const Comparison& c) {
  PointClass p{};
  const bool exact_like = !c.mc || c.band <= c.tol;
  if (exact_like) {
    p.ok_f = c.diff >= -c.tol;
    p.ok_b = c.diff <= c.tol;
    p.viol_f = !p.ok_f;
    p.viol_b = !p.ok_b;
    p.indeterminate = false;
    return p;
  }
  const bool cert_f = c.min_d >= -kCertTol;
  const bool cert_b = c.max_d <= kCertTol;
  p.ok_f = cert_f || c.diff >= c.band;
  p.ok_b = cert_b || c.diff <= -c.band;
  p.viol_f = !cert_f && c.diff < -c.band;
  p.viol_b = !cert_b && c.diff > c.band;
  p.indeterminate = !p.ok_f && !p.ok_b && !p.viol_f && !p.viol_b;
  return p;
}

OrderVerdict assemble(Relation rel, Exactness ex, std::string grid,
                      const std::vector<Comparison>& comps, std::string note = {}) {
  OrderVerdict v;
  v.relation = rel;
  v.exactness = ex;
  v.grid = std::move(grid);
  v.note = std::move(note);
  v.n_comparisons = comps.size();
  bool all_f = true, all_b = true, any_viol_f = false, any_viol_b = false;
  for (const Comparison& c : comps) {
    const PointClass p = classify(c);
    all_f = all_f && p.ok_f;
    all_b = all_b && p.ok_b;
    if (p.indeterminate) ++v.n_indeterminate;
    v.worst_forward = std::min(v.worst_forward, c.diff);
    v.worst_backward = std::min(v.worst_backward, -c.diff);
    const double wtol = c.mc ? std::max(c.band, c.tol) : c.tol;
    if (p.viol_f) {
      any_viol_f = true;
      if (v.forward_violations.size() < kWitnessCap)
        v.forward_violations.push_back({c.point, c.subset, c.lhs, c.rhs, wtol});
    }
    if (p.viol_b) {
      any_viol_b = true;
      if (v.backward_violations.size() < kWitnessCap)
        v.backward_violations.push_back({c.point, c.subset, c.lhs, c.rhs, wtol});
    }
  }
  if (all_f)
    v.outcome = Outcome::holds;
  else if (all_b)
    v.outcome = Outcome::holds_reversed;
  else if (any_viol_f && any_viol_b)
    v.outcome = Outcome::incomparable;
  else
    v.outcome = Outcome::inconclusive;
  return v;
}

// --- coefficient-table path (both models spectral) -------------------------

OrderVerdict table_compare(Relation rel, const ModelSpec& m1, const ModelSpec& m2,
                           CoeffKind kind, const OrderOptions& opts) {
  const CoefficientTable& t1 = kind == CoeffKind::theta ? m1.theta() : m1.chi();
  const CoefficientTable& t2 = kind == CoeffKind::theta ? m2.theta() : m2.chi();
  double band = 0.0;
  if (m1.provenance) band += 3.0 * m1.provenance->max_stderr;
  if (m2.provenance) band += 3.0 * m2.provenance->max_stderr;
  std::vector<Comparison> comps;
  for (mask_t a = 1; a <= full_mask(m1.dim()); ++a) {
    Comparison c;
    c.subset = a;
    c.lhs = t1.values[a];
    c.rhs = t2.values[a];
    // lo compares theta directly; uo compares chi.  Both orders hold iff the
    // respective tables are ordered pointwise.
    c.diff = c.rhs - c.lhs;
    c.tol = opts.tol;
    if (band > 0.0) {
      c.mc = true;
      c.band = band;
    }
    comps.push_back(std::move(c));
  }
  std::string note;
  if (band > 0.0) note = "coefficient tables carry sampling uncertainty";
  return assemble(rel, Exactness::exact,
                  std::string("coefficient-table(") + coeff_kind_name(kind) + ")", comps,
                  std::move(note));
}

// --- grid paths -------------------------------------------------------------

bool is_mc_family(const ModelSpec& m) { return !m.exact_capable(); }

struct MarginCache {
  const ModelSpec* m;
  std::map<mask_t, ModelSpec> cache;
  const ModelSpec& at(mask_t s) {
    if (s == full_mask(m->dim())) return *m;
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, marginalize(*m, s)).first;
    return it->second;
  }
};

mask_t support_of(std::span<const double> w) {
  mask_t s = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s |= mask_t{1} << i;
  return s;
}

// Per-sample functional side of a Monte Carlo comparison.
struct Side {
  enum Kind { constant, max_w, min_a, layer, atom_min } kind = constant;
  double c = 0.0;
  int block = 0;  // which sample block the row comes from
  std::vector<double> coef;
  std::vector<int> idx;      // min kinds: coordinate indices of the subset
  double amin = 0.0;         // atom_min: min of the weights over the subset
  std::vector<int> order;    // layer: coordinates sorted by descending weight
  std::vector<double> delta; // layer: weight decrements
};

double eval_side(const Side& s, const double* z0, const double* z1) {
  const double* z = s.block == 0 ? z0 : z1;
  switch (s.kind) {
    case Side::constant:
      return s.c;
    case Side::max_w: {
      double mx = 0.0;
      for (std::size_t i = 0; i < s.coef.size(); ++i) {
        const double v = s.coef[i] * z[i];
        if (v > mx) mx = v;
      }
      return mx;
    }
    case Side::min_a: {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < s.idx.size(); ++k) {
        const double v = s.coef[k] * z[s.idx[k]];
        if (v < mn) mn = v;
      }
      return mn;
    }
    case Side::layer: {
      double acc = 0.0, run = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < s.order.size(); ++k) {
        const double v = z[s.order[k]];
        if (v > run) run = v;
        acc += s.delta[k] * run;
      }
      return acc;
    }
    case Side::atom_min: {
      double mn = std::numeric_limits<double>::infinity();
      for (int i : s.idx)
        if (z[i] < mn) mn = z[i];
      return s.amin * mn;
    }
  }
  return 0.0;
}

struct McJob {
  std::size_t comp_index;
  Side lhs, rhs;
};

// Layer side for the spectral model associated with the block's model: the
// block mean of this functional equals the spectral ell at w exactly.
Side make_layer_side(std::span<const double> w, int block) {
  Side s;
  s.kind = Side::layer;
  s.block = block;
  const int d = static_cast<int>(w.size());
  std::vector<int> ord(d);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return w[a] > w[b]; });
  s.order.assign(ord.begin(), ord.end());
  s.delta.resize(d);
  for (int k = 0; k < d; ++k)
    s.delta[k] = w[ord[k]] - (k + 1 < d ? w[ord[k + 1]] : 0.0);
  return s;
}

Side make_max_side(std::span<const double> w, int block) {
  Side s;
  s.kind = Side::max_w;
  s.block = block;
  s.coef.assign(w.begin(), w.end());
  return s;
}

Side make_min_side(std::span<const double> a, mask_t sub, int block) {
  Side s;
  s.kind = Side::min_a;
  s.block = block;
  for (int i = 1; i <= static_cast<int>(a.size()); ++i)
    if (contains(sub, i)) {
      s.idx.push_back(i - 1);
      s.coef.push_back(a[i - 1]);
    }
  return s;
}

Side make_atom_min_side(std::span<const double> a, mask_t sub, int block) {
  Side s;
  s.kind = Side::atom_min;
  s.block = block;
  s.amin = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= static_cast<int>(a.size()); ++i)
    if (contains(sub, i)) {
      s.idx.push_back(i - 1);
      s.amin = std::min(s.amin, a[i - 1]);
    }
  return s;
}

Side make_const_side(double v) {
  Side s;
  s.kind = Side::constant;
  s.c = v;
  return s;
}

void run_mc_jobs(const std::vector<McJob>& jobs, std::vector<Comparison>& comps,
                 const std::vector<double>& z0, const std::vector<double>& z1, int d,
                 std::uint64_t n) {
  struct Acc {
    double sl = 0, sr = 0, sd = 0, sd2 = 0;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
  };
  std::vector<Acc> acc(jobs.size());
  constexpr std::uint64_t kTile = 4096;
  for (std::uint64_t t0 = 0; t0 < n; t0 += kTile) {
    const std::uint64_t t1 = std::min(n, t0 + kTile);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const McJob& job = jobs[j];
      Acc& a = acc[j];
      for (std::uint64_t r = t0; r < t1; ++r) {
        const double* r0 = z0.data() + r * d;
        const double* r1 = z1.empty() ? r0 : z1.data() + r * d;
        const double l = eval_side(job.lhs, r0, r1);
        const double rv = eval_side(job.rhs, r0, r1);
        const double diff = rv - l;
        a.sl += l;
        a.sr += rv;
        a.sd += diff;
        a.sd2 += diff * diff;
        if (diff < a.mn) a.mn = diff;
        if (diff > a.mx) a.mx = diff;
      }
    }
  }
  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    Comparison& c = comps[jobs[j].comp_index];
    const Acc& a = acc[j];
    c.mc = true;
    c.lhs = a.sl / dn;
    c.rhs = a.sr / dn;
    c.diff = a.sd / dn;
    const double var = std::max(0.0, (a.sd2 - dn * c.diff * c.diff) / (dn - 1.0));
    c.band = 3.0 * std::sqrt(var / dn);
    c.min_d = a.mn;
    c.max_d = a.mx;
  }
}

struct GridCheckContext {
  const ModelSpec* m1;
  const ModelSpec* m2;
  const OrderOptions* opts;
  MarginCache marg1, marg2;
  // provenance coupling: spectral side evaluated per sample on source block
  bool prov_mode = false;
  int prov_side = 0;  // 1: m1 is the spectral table, 2: m2 is
  const ModelSpec* mc_model = nullptr;  // block owner in prov/single-block mode
};

// Decides whether a comparison restricted to subset s can be done in closed
// form for both models.
bool exact_at(GridCheckContext& ctx, mask_t s) {
  if (ctx.prov_mode) return false;
  return ctx.marg1.at(s).exact_capable() && ctx.marg2.at(s).exact_capable();
}

EvalOptions eval_opts(const OrderOptions& o) {
  EvalOptions e;
  e.mc_n = o.mc_n;
  e.seed = o.seed;
  e.quad_tol = o.quad_tol;
  return e;
}

OrderVerdict grid_check(Relation rel, const ModelSpec& m1, const ModelSpec& m2,
                        const OrderOptions& opts) {
  const int d = m1.dim();
  const int m = opts.grid_m > 0 ? opts.grid_m : SimplexGrid::default_resolution(d);
  SimplexGrid grid(d, m);
  const EvalOptions eopts = eval_opts(opts);

  GridCheckContext ctx{&m1, &m2, &opts, {&m1}, {&m2}};
  const bool mc1 = is_mc_family(m1), mc2 = is_mc_family(m2);
  if (m1.family() == Family::choquet && m1.provenance && mc2 &&
      m1.provenance->block_key == generator_block_key(m2, opts.mc_n, opts.seed)) {
    ctx.prov_mode = true;
    ctx.prov_side = 1;
    ctx.mc_model = &m2;
  } else if (m2.family() == Family::choquet && m2.provenance && mc1 &&
             m2.provenance->block_key == generator_block_key(m1, opts.mc_n, opts.seed)) {
    ctx.prov_mode = true;
    ctx.prov_side = 2;
    ctx.mc_model = &m1;
  }

  std::vector<Comparison> comps;
  std::vector<McJob> jobs;

  auto add_exact_lo = [&](std::span<const double> w) {
    const EllValue e1 = ell(m1, w, eopts);
    const EllValue e2 = ell(m2, w, eopts);
    Comparison c;
    c.point.assign(w.begin(), w.end());
    c.lhs = e1.value;
    c.rhs = e2.value;
    c.diff = c.rhs - c.lhs;
    c.tol = opts.tol + e1.comparison_tol() + e2.comparison_tol();
    comps.push_back(std::move(c));
  };
  auto add_exact_uo = [&](std::span<const double> a, mask_t sub) {
    const EllValue e1 = directional_chi(m1, a, sub, eopts);
    const EllValue e2 = directional_chi(m2, a, sub, eopts);
    Comparison c;
    c.point.assign(a.begin(), a.end());
    c.subset = sub;
    c.lhs = e1.value;
    c.rhs = e2.value;
    c.diff = c.rhs - c.lhs;
    c.tol = opts.tol + e1.comparison_tol() + e2.comparison_tol();
    comps.push_back(std::move(c));
  };

  auto lo_side = [&](const ModelSpec& mm, std::span<const double> w, int block,
                     bool spectral_on_block) -> Side {
    if (spectral_on_block) return make_layer_side(w, block);
    if (is_mc_family(mm)) return make_max_side(w, block);
    return make_const_side(ell(mm, w, eopts).value);
  };
  auto uo_side = [&](const ModelSpec& mm, std::span<const double> a, mask_t sub, int block,
                     bool spectral_on_block) -> Side {
    if (spectral_on_block) return make_atom_min_side(a, sub, block);
    if (is_mc_family(mm)) return make_min_side(a, sub, block);
    const EllValue e = directional_chi(mm, a, sub, eopts);
    return make_const_side(e.value);
  };

  if (rel == Relation::lo) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto w = grid.point(i);
      const mask_t s = support_of(w);
      if (s == 0) continue;
      if (exact_at(ctx, s)) {
        add_exact_lo(w);
        continue;
      }
      Comparison c;
      c.point.assign(w.begin(), w.end());
      c.tol = opts.tol;
      comps.push_back(std::move(c));
      McJob job;
      job.comp_index = comps.size() - 1;
      job.lhs = lo_side(m1, w, 0, ctx.prov_mode && ctx.prov_side == 1);
      job.rhs = lo_side(m2, w, ctx.prov_mode ? 0 : 1, ctx.prov_mode && ctx.prov_side == 2);
      jobs.push_back(std::move(job));
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::vector<double> a = grid.interior_point(i);
      for (mask_t sub = 1; sub <= full_mask(d); ++sub) {
        if (subset_size(sub) < 2) continue;  // singletons equal exactly
        if (exact_at(ctx, sub)) {
          add_exact_uo(a, sub);
          continue;
        }
        Comparison c;
        c.point = a;
        c.subset = sub;
        c.tol = opts.tol;
        comps.push_back(std::move(c));
        McJob job;
        job.comp_index = comps.size() - 1;
        job.lhs = uo_side(m1, a, sub, 0, ctx.prov_mode && ctx.prov_side == 1);
        job.rhs = uo_side(m2, a, sub, ctx.prov_mode ? 0 : 1, ctx.prov_mode && ctx.prov_side == 2);
        jobs.push_back(std::move(job));
      }
    }
  }

  Exactness ex = Exactness::grid_closed_form;
  std::string note;
  if (!jobs.empty()) {
    ex = Exactness::grid_monte_carlo;
    std::vector<double> z0, z1;
    if (ctx.prov_mode) {
      fill_generator_block(*ctx.mc_model, opts.mc_n, opts.seed, z0);
      note = "common random numbers: spectral table evaluated per sample on the source block";
    } else if (mc1 && mc2) {
      const bool coupled = fill_coupled_blocks(m1, m2, opts.mc_n, opts.seed, z0, z1);
      note = coupled ? "coupled sample blocks" : "independent sample blocks";
    } else if (mc1) {
      fill_generator_block(m1, opts.mc_n, opts.seed, z0);
    } else {
      // m2 sampled; jobs referenced block 1, so swap into slot 0
      fill_generator_block(m2, opts.mc_n, opts.seed, z0);
      for (McJob& j : jobs) {
        j.lhs.block = 0;
        j.rhs.block = 0;
      }
    }
    run_mc_jobs(jobs, comps, z0, z1, d, opts.mc_n);
  }

  std::string gdesc = grid.describe();
  if (rel == Relation::uo) gdesc += "+interior-clip(1/(4m))+subsets";
  OrderVerdict v = assemble(rel, ex, gdesc, comps, note);
  return v;
}

Outcome combine_pqd(Outcome uo, Outcome lo) {
  if (uo == Outcome::incomparable || lo == Outcome::incomparable) return Outcome::incomparable;
  if (uo == Outcome::holds && lo == Outcome::holds) return Outcome::holds;
  if (uo == Outcome::holds_reversed && lo == Outcome::holds_reversed)
    return Outcome::holds_reversed;
  if ((uo == Outcome::holds && lo == Outcome::holds_reversed) ||
      (uo == Outcome::holds_reversed && lo == Outcome::holds))
    return Outcome::incomparable;
  return Outcome::inconclusive;
}

void check_same_dim(const ModelSpec& m1, const ModelSpec& m2) {
  if (m1.dim() != m2.dim())
    throw std::invalid_argument("order check: models must share the dimension");
}

}  // namespace

OrderVerdict check_lo(const ModelSpec& m1, const ModelSpec& m2, const OrderOptions& opts) {
  check_same_dim(m1, m2);
  if (m1.family() == Family::choquet && m2.family() == Family::choquet)
    return table_compare(Relation::lo, m1, m2, CoeffKind::theta, opts);
  return grid_check(Relation::lo, m1, m2, opts);
}

OrderVerdict check_uo(const ModelSpec& m1, const ModelSpec& m2, const OrderOptions& opts) {
  check_same_dim(m1, m2);
  if (m1.family() == Family::choquet && m2.family() == Family::choquet)
    return table_compare(Relation::uo, m1, m2, CoeffKind::chi, opts);
  return grid_check(Relation::uo, m1, m2, opts);
}

OrderVerdict check_pqd(const ModelSpec& m1, const ModelSpec& m2, const OrderOptions& opts) {
  check_same_dim(m1, m2);
  OrderVerdict uo = check_uo(m1, m2, opts);
  OrderVerdict lo = check_lo(m2, m1, opts);
  OrderVerdict v;
  v.relation = Relation::pqd;
  v.outcome = combine_pqd(uo.outcome, lo.outcome);
  v.exactness = uo.exactness == Exactness::exact && lo.exactness == Exactness::exact
                    ? Exactness::exact
                    : (uo.exactness == Exactness::grid_monte_carlo ||
                               lo.exactness == Exactness::grid_monte_carlo
                           ? Exactness::grid_monte_carlo
                           : Exactness::grid_closed_form);
  v.grid = "uo:" + uo.grid + " lo:" + lo.grid;
  v.n_comparisons = uo.n_comparisons + lo.n_comparisons;
  v.n_indeterminate = uo.n_indeterminate + lo.n_indeterminate;
  v.worst_forward = std::min(uo.worst_forward, lo.worst_forward);
  v.worst_backward = std::min(uo.worst_backward, lo.worst_backward);
  v.forward_violations = uo.forward_violations;
  v.forward_violations.insert(v.forward_violations.end(), lo.forward_violations.begin(),
                              lo.forward_violations.end());
  v.backward_violations = uo.backward_violations;
  v.backward_violations.insert(v.backward_violations.end(), lo.backward_violations.begin(),
                               lo.backward_violations.end());
  if (v.forward_violations.size() > kWitnessCap) v.forward_violations.resize(kWitnessCap);
  if (v.backward_violations.size() > kWitnessCap) v.backward_violations.resize(kWitnessCap);
  if (m1.dim() == 2) {
    // Bivariate shortcut: the upper-orthant comparison alone is decisive;
    // both routes are computed and must agree.
    if (uo.outcome != v.outcome) {
      v.outcome = Outcome::inconclusive;
      v.note = "bivariate shortcut (uo) and composite route disagree";
    } else {
      v.note = "bivariate shortcut verified against composite route";
    }
  }
  v.components.push_back(std::move(uo));
  v.components.push_back(std::move(lo));
  return v;
}

PropB7Result prop_b7_oracle(const CoefficientTable& theta1, const CoefficientTable& theta2,
                            BernsteinFn g) {
  if (theta1.dim != theta2.dim)
    throw std::invalid_argument("prop_b7_oracle: dimension mismatch");
  if (theta1.kind != CoeffKind::theta || theta2.kind != CoeffKind::theta)
    throw std::invalid_argument("prop_b7_oracle: expects theta tables");
  const CoefficientTable chi1 = theta_to_chi(theta1);
  const CoefficientTable chi2 = theta_to_chi(theta2);
  for (mask_t a = 1; a <= full_mask(theta1.dim); ++a)
    if (chi1.values[a] > chi2.values[a] + 1e-12)
      throw std::invalid_argument("prop_b7_oracle: precondition chi1 <= chi2 fails at " +
                                  mask_to_string(a));
  PropB7Result r;
  for (mask_t i = 1; i <= full_mask(theta1.dim); ++i) {
    const double sgn = (subset_size(i) & 1) ? 1.0 : -1.0;
    r.lhs_sum += sgn * apply_bernstein(g, theta1.values[i]);
    r.rhs_sum += sgn * apply_bernstein(g, theta2.values[i]);
  }
  r.holds = r.lhs_sum <= r.rhs_sum + 1e-10;
  return r;
}

}  // namespace maxstab
