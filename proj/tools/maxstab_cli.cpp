#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxstab/grids.hpp"
#include "maxstab/model_json.hpp"
#include "maxstab/models.hpp"
#include "maxstab/montecarlo.hpp"
#include "maxstab/orders.hpp"
#include "maxstab/projections.hpp"
#include "maxstab/rng.hpp"
#include "maxstab/zonoid.hpp"

namespace {

using nlohmann::json;
using namespace maxstab;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success/holds, 1 incomparable or reversed (order), 2 invalid
// model, 3 parse failure, 4 inconclusive (order), 5 internal error.
constexpr int kExitInvalid = 2;
constexpr int kExitParse = 3;
constexpr int kExitInternal = 5;

std::string fmt_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  const std::uint64_t h = fnv1a_bytes(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, hash
  std::uint64_t seed = 0;
  std::uint64_t mc_n = 0;
  std::string grid;
  double tol = 0.0;
  std::string format;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void add_input(const std::string& path) { inputs.emplace_back(path, file_hash(path)); }

  json to_json(bool with_wall) const {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    json in = json::object();
    for (const auto& [p, h] : inputs) in[p] = h;
    j["inputs"] = std::move(in);
    j["seed"] = seed;
    j["mc_n"] = mc_n;
    j["grid"] = grid;
    j["tol"] = tol;
    j["format"] = format;
    if (with_wall)
      j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return j;
  }
};

// JSON result files embed their manifest (without wall time, so reruns are
// byte-identical); CSV/SVG files get a sidecar <out>.manifest.json carrying
// the wall time as well.
void write_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + out + "'");
  f << text;
}

void write_json_result(const std::string& out, json j, const Manifest& m) {
  j["manifest"] = m.to_json(false);
  write_text(out, j.dump(2) + "\n");
}

void write_csv_result(const std::string& out, const std::string& csv, const Manifest& m) {
  write_text(out, csv);
  if (!out.empty()) write_text(out + ".manifest.json", m.to_json(true).dump(2) + "\n");
}

std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = std::min(s.find(',', pos), s.size());
    const std::string tok = s.substr(pos, next - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("bad numeric list entry '" + tok + "'");
    }
    pos = next + 1;
  }
  return v;
}

// "lo:hi:count" range descriptor.
struct Range {
  double lo = 0, hi = 0;
  int count = 0;
  double at(int i, bool log_spaced) const {
    if (count == 1) return lo;
    const double f = double(i) / (count - 1);
    if (log_spaced) return lo * std::pow(hi / lo, f);
    return lo + (hi - lo) * f;
  }
};

Range parse_range(const std::string& s) {
  const auto p1 = s.find(':'), p2 = s.find(':', p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw ParseError("range must be lo:hi:count, got '" + s + "'");
  Range r;
  try {
    r.lo = std::stod(s.substr(0, p1));
    r.hi = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
    r.count = std::stoi(s.substr(p2 + 1));
  } catch (const std::exception&) {
    throw ParseError("bad range '" + s + "'");
  }
  if (!(r.lo > 0) || !(r.hi >= r.lo) || r.count < 1)
    throw ParseError("range needs 0 < lo <= hi and count >= 1");
  return r;
}

const char* kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::exact: return "exact";
    case ValueKind::quadrature: return "quadrature";
    case ValueKind::monte_carlo: return "monte_carlo";
  }
  return "?";
}

json ellvalue_to_json(const EllValue& v) {
  json j;
  j["value"] = v.value;
  j["kind"] = kind_name(v.kind);
  if (v.kind == ValueKind::quadrature) j["tol"] = v.tol;
  if (v.kind == ValueKind::monte_carlo) {
    j["stderr"] = v.stderr_mean;
    j["n"] = v.n;
  }
  return j;
}

json witness_to_json(const Witness& w) {
  json j;
  j["point"] = w.point;
  if (w.subset) j["subset"] = subset_key(w.subset);
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["tol"] = w.tol;
  return j;
}

json verdict_to_json(const OrderVerdict& v) {
  json j;
  j["relation"] = relation_name(v.relation);
  j["outcome"] = outcome_name(v.outcome);
  j["exit_code"] = cli_exit_code(v);
  j["exactness"] = exactness_name(v.exactness);
  j["grid"] = v.grid;
  j["n_comparisons"] = v.n_comparisons;
  j["n_indeterminate"] = v.n_indeterminate;
  j["worst_forward"] = v.worst_forward;
  j["worst_backward"] = v.worst_backward;
  json fw = json::array(), bw = json::array();
  for (const auto& w : v.forward_violations) fw.push_back(witness_to_json(w));
  for (const auto& w : v.backward_violations) bw.push_back(witness_to_json(w));
  j["forward_violations"] = std::move(fw);
  j["backward_violations"] = std::move(bw);
  if (!v.note.empty()) j["note"] = v.note;
  if (!v.components.empty()) {
    json comps = json::array();
    for (const auto& c : v.components) comps.push_back(verdict_to_json(c));
    j["components"] = std::move(comps);
  }
  return j;
}

std::string svg_of_polylines(const std::vector<ZonoidPolyline>& polys) {
  // 480x480 view of [0, 1.05]^2 with y flipped; axis box plus one path per
  // polyline, closed through the origin.
  const double sc = 480.0 / 1.05;
  auto X = [&](double x) { return fmt_double(x * sc); };
  auto Y = [&](double y) { return fmt_double(480.0 - y * sc); };
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
       "viewBox=\"0 0 480 480\">\n";
  s += "<rect x=\"" + X(0) + "\" y=\"" + Y(1) + "\" width=\"" + X(1) + "\" height=\"" +
       fmt_double(480.0 - std::stod(Y(1))) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& poly : polys) {
    std::string d = "M " + X(0) + " " + Y(0);
    for (const auto& p : poly.points) d += " L " + X(p[0]) + " " + Y(p[1]);
    d += " Z";
    s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"black\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string polyline_csv(const ZonoidPolyline& poly) {
  std::string csv = "alpha,x1,x2\n";
  for (std::size_t i = 0; i < poly.points.size(); ++i) {
    if (i < poly.angles.size()) csv += fmt_double(poly.angles[i]);
    csv += "," + fmt_double(poly.points[i][0]) + "," + fmt_double(poly.points[i][1]) + "\n";
  }
  return csv;
}

ZonoidPolyline zonoid_polyline_of(const ModelSpec& m, int n_angles, double quad_tol) {
  if (m.family() == Family::dirichlet || m.family() == Family::husler_reiss)
    return envelope_bivariate(m, n_angles, quad_tol);
  return choquet_zonoid_polyline(m);
}

// ---------------------------------------------------------------------------

struct Cli {
  std::uint64_t seed = 1;
  std::uint64_t mc_n = 0;  // 0: per-command default
  int grid = 0;
  double tol = 1e-9;
  double quad_tol = 1e-10;
  std::string out;
  std::string format;

  EvalOptions eval_opts(std::uint64_t default_n = 100000) const {
    EvalOptions o;
    o.mc_n = mc_n ? mc_n : default_n;
    o.seed = seed;
    o.quad_tol = quad_tol;
    return o;
  }
};

int cmd_validate(const Cli& g, Manifest& man, const std::string& path) {
  json j;
  try {
    const ModelSpec m = model_from_json_file(path);
    man.add_input(path);
    j["valid"] = true;
    j["family"] = family_name(m.family());
    j["d"] = m.dim();
    write_json_result(g.out, std::move(j), man);
    return 0;
  } catch (const ValidationError& e) {
    j["valid"] = false;
    j["error"] = e.what();
    write_json_result(g.out, std::move(j), man);
    std::cerr << "invalid model: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ParseError& e) {
    j["valid"] = false;
    j["error"] = e.what();
    write_json_result(g.out, std::move(j), man);
    std::cerr << "parse failure: " << e.what() << "\n";
    return kExitParse;
  }
}

int cmd_eval(const Cli& g, Manifest& man, const std::string& path, const std::string& fn,
             const std::vector<std::string>& at, const std::string& subset_str) {
  const ModelSpec m = model_from_json_file(path);
  man.add_input(path);
  const EvalOptions opts = g.eval_opts();
  mask_t sub = 0;
  if (!subset_str.empty()) sub = parse_subset_key(subset_str, m.dim());

  const bool needs_subset = fn == "theta" || fn == "chi" || fn == "dchi";
  const bool needs_at = !(fn == "theta" || fn == "chi");
  if (needs_subset && sub == 0) throw ParseError("--fn " + fn + " needs --subset");
  if (needs_at && at.empty()) throw ParseError("--fn " + fn + " needs at least one --at");

  struct Row {
    std::vector<double> x;
    EllValue v;
  };
  std::vector<Row> rows;
  if (!needs_at) {
    Row r;
    r.v = fn == "theta" ? extremal_coefficient(m, sub, opts)
                        : tail_dependence_coefficient(m, sub, opts);
    rows.push_back(std::move(r));
  } else {
    for (const std::string& s : at) {
      Row r;
      r.x = parse_vector(s);
      if (static_cast<int>(r.x.size()) != m.dim())
        throw ParseError("--at needs " + std::to_string(m.dim()) + " components");
      if (fn == "ell")
        r.v = ell(m, r.x, opts);
      else if (fn == "exponent")
        r.v = exponent(m, r.x, opts);
      else if (fn == "cdf")
        r.v = cdf(m, r.x, opts);
      else if (fn == "pickands")
        r.v = pickands(m, r.x, opts);
      else if (fn == "dchi")
        r.v = directional_chi(m, r.x, sub, opts);
      else if (fn == "angular") {
        if (m.family() != Family::dirichlet)
          throw ValidationError("--fn angular needs a dirichlet model");
        r.v.value = dirichlet_angular_density(m.alpha(), r.x);
        r.v.kind = ValueKind::exact;
      } else {
        throw ParseError("unknown --fn '" + fn + "'");
      }
      rows.push_back(std::move(r));
    }
  }

  if (g.format == "csv") {
    std::string csv;
    for (int i = 1; i <= m.dim(); ++i) csv += "x" + std::to_string(i) + ",";
    csv += "subset,value,kind,tol,stderr,n\n";
    for (const Row& r : rows) {
      for (int i = 0; i < m.dim(); ++i)
        csv += (i < static_cast<int>(r.x.size()) ? fmt_double(r.x[i]) : "") + ",";
      csv += (sub ? subset_key(sub) : "") + "," + fmt_double(r.v.value) + "," +
             kind_name(r.v.kind) + "," + fmt_double(r.v.tol) + "," +
             fmt_double(r.v.stderr_mean) + "," + std::to_string(r.v.n) + "\n";
    }
    write_csv_result(g.out, csv, man);
  } else {
    json out;
    out["family"] = family_name(m.family());
    out["fn"] = fn;
    json results = json::array();
    for (const Row& r : rows) {
      json e = ellvalue_to_json(r.v);
      if (!r.x.empty()) e["x"] = r.x;
      if (sub) e["subset"] = subset_key(sub);
      results.push_back(std::move(e));
    }
    out["results"] = std::move(results);
    write_json_result(g.out, std::move(out), man);
  }
  return 0;
}

int cmd_convert(const Cli& g, Manifest& man, const std::string& path, const std::string& to) {
  const ModelSpec m = model_from_json_file(path);
  man.add_input(path);
  if (m.family() != Family::choquet)
    throw ValidationError("convert needs a spectral (choquet) model");
  CoeffKind kind;
  if (to == "tau")
    kind = CoeffKind::tau;
  else if (to == "theta")
    kind = CoeffKind::theta;
  else if (to == "chi")
    kind = CoeffKind::chi;
  else
    throw ParseError("--to must be tau, theta or chi");
  const CoefficientTable& t =
      kind == CoeffKind::tau ? m.tau() : (kind == CoeffKind::theta ? m.theta() : m.chi());
  json out;
  out["family"] = "choquet";
  out["d"] = m.dim();
  json table = json::object();
  for (mask_t a = 1; a <= full_mask(m.dim()); ++a) {
    if (kind == CoeffKind::tau && t.values[a] == 0.0) continue;
    table[subset_key(a)] = t.values[a];
  }
  out[coeff_kind_name(kind)] = std::move(table);
  write_json_result(g.out, std::move(out), man);
  return 0;
}

int cmd_order(const Cli& g, Manifest& man, const std::string& relation, const std::string& lhs,
              const std::string& rhs) {
  const ModelSpec m1 = model_from_json_file(lhs);
  const ModelSpec m2 = model_from_json_file(rhs);
  man.add_input(lhs);
  man.add_input(rhs);
  OrderOptions opts;
  opts.mc_n = g.mc_n ? g.mc_n : 1000000;
  opts.seed = g.seed;
  opts.tol = g.tol;
  opts.quad_tol = g.quad_tol;
  opts.grid_m = g.grid;
  OrderVerdict v;
  if (relation == "lo")
    v = check_lo(m1, m2, opts);
  else if (relation == "uo")
    v = check_uo(m1, m2, opts);
  else if (relation == "pqd")
    v = check_pqd(m1, m2, opts);
  else
    throw ParseError("--relation must be lo, uo or pqd");
  man.grid = v.grid;
  write_json_result(g.out, verdict_to_json(v), man);
  return cli_exit_code(v);
}

int cmd_project(const Cli& g, Manifest& man, const std::string& path, const std::string& weights,
                const std::string& mode, const std::string& t_range,
                const std::string& period_range, const std::string& kind,
                const std::string& scale) {
  const ModelSpec m = model_from_json_file(path);
  man.add_input(path);
  const std::vector<double> a = parse_vector(weights);
  const EvalOptions opts = g.eval_opts();
  const LevelScale lscale = scale == "frechet" ? LevelScale::frechet : LevelScale::gumbel;

  if (mode == "cdf") {
    const Range r = parse_range(t_range);
    man.grid = "t=" + t_range + "(log)";
    const MinProjection minp(m, a, opts);
    const EllValue la = ell(m, a, opts);
    std::string csv = "t,F_min,F_max\n";
    for (int i = 0; i < r.count; ++i) {
      const double t = r.at(i, true);
      const double fmin = 1.0 - minp.survival(t);
      const double fmax = std::exp(-la.value / t);
      csv += fmt_double(t) + "," + fmt_double(fmin) + "," + fmt_double(fmax) + "\n";
    }
    write_csv_result(g.out, csv, man);
    return 0;
  }
  if (mode == "levels") {
    const Range r = parse_range(period_range);
    man.grid = "periods=" + period_range + "(log)";
    const ProjectionKind pk = kind == "max" ? ProjectionKind::max : ProjectionKind::min;
    std::string csv = "return_period,level\n";
    for (int i = 0; i < r.count; ++i) {
      const double period = r.at(i, true);
      csv += fmt_double(period) + "," + fmt_double(return_level(m, a, pk, period, lscale, opts)) +
             "\n";
    }
    write_csv_result(g.out, csv, man);
    return 0;
  }
  throw ParseError("--mode must be cdf or levels");
}

int cmd_zonoid(const Cli& g, Manifest& man, const std::string& path, int angles,
               const std::string& svg_out) {
  const ModelSpec m = model_from_json_file(path);
  man.add_input(path);
  const ZonoidPolyline poly = zonoid_polyline_of(m, angles, g.quad_tol);
  man.grid = "angles=" + std::to_string(angles);
  write_csv_result(g.out, polyline_csv(poly), man);
  if (!svg_out.empty()) write_text(svg_out, svg_of_polylines({poly}));
  return 0;
}

int cmd_sample(const Cli& g, Manifest& man, const std::string& path, std::uint64_t n,
               const std::string& kind) {
  const ModelSpec m = model_from_json_file(path);
  man.add_input(path);
  man.mc_n = n;
  SampleMatrix s;
  std::string prefix;
  if (kind == "generator") {
    prefix = "Z";
    std::vector<double> block;
    fill_generator_block(m, n, g.seed, block);
    s.n = n;
    s.d = m.dim();
    s.data = std::move(block);
  } else if (kind == "maxstable") {
    prefix = "X";
    CoefficientTable tau;
    if (m.family() == Family::choquet) {
      tau = m.tau();
    } else if (m.family() == Family::independent || m.family() == Family::fully_dependent) {
      tau.dim = m.dim();
      tau.kind = CoeffKind::tau;
      tau.values.assign(std::size_t{1} << m.dim(), 0.0);
      if (m.family() == Family::independent)
        for (int i = 1; i <= m.dim(); ++i) tau.values[singleton(i)] = 1.0;
      else
        tau.values[full_mask(m.dim())] = 1.0;
    } else {
      throw ValidationError("maxstable sampling needs a spectral model");
    }
    s = sample_choquet_maxstable(tau, n, g.seed);
  } else {
    throw ParseError("--kind must be generator or maxstable");
  }
  std::string csv;
  for (int i = 1; i <= s.d; ++i) csv += (i > 1 ? "," : "") + prefix + std::to_string(i);
  csv += "\n";
  for (std::uint64_t r = 0; r < s.n; ++r) {
    const double* row = s.row(r);
    for (int i = 0; i < s.d; ++i) csv += (i ? "," : "") + fmt_double(row[i]);
    csv += "\n";
  }
  write_csv_result(g.out, csv, man);
  return 0;
}

int cmd_estimate(const Cli& g, Manifest& man, const std::string& path, const std::string& fn,
                 const std::string& at, const std::string& subset_str) {
  const ModelSpec m = model_from_json_file(path);
  man.add_input(path);
  const std::uint64_t n = g.mc_n ? g.mc_n : 100000;
  man.mc_n = n;
  if (fn == "associated") {
    EvalOptions opts = g.eval_opts();
    const ModelSpec assoc = associated_choquet(m, opts);
    write_text(g.out, model_to_json_text(assoc));
    if (!g.out.empty())
      write_text(g.out + ".manifest.json", man.to_json(true).dump(2) + "\n");
    return 0;
  }
  McEstimate est;
  if (fn == "ell") {
    if (at.empty()) throw ParseError("--fn ell needs --at");
    const std::vector<double> x = parse_vector(at);
    est = estimate_ell(m, x, n, g.seed);
  } else if (fn == "chi" || fn == "theta") {
    if (subset_str.empty()) throw ParseError("--fn " + fn + " needs --subset");
    const mask_t sub = parse_subset_key(subset_str, m.dim());
    if (fn == "chi") {
      std::vector<double> w(m.dim(), 1.0);
      if (!at.empty()) w = parse_vector(at);
      est = estimate_directional_chi(m, w, sub, n, g.seed);
    } else {
      std::vector<double> x(m.dim(), 0.0);
      for (int i : mask_indices(sub)) x[i - 1] = 1.0;
      est = estimate_ell(m, x, n, g.seed);
    }
  } else {
    throw ParseError("--fn must be ell, theta, chi or associated");
  }
  json out;
  out["estimand"] = est.estimand;
  out["mean"] = est.mean;
  out["stderr"] = est.stderr_mean;
  out["n"] = est.n;
  out["seed"] = est.seed;
  write_json_result(g.out, std::move(out), man);
  return 0;
}

// --- figures ----------------------------------------------------------------

void write_figure_file(const std::filesystem::path& dir, const std::string& name,
                       const std::string& content) {
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
  f << content;
}

std::string angular_density_csv(const std::vector<double>& alpha, int m_grid) {
  std::string csv = "w1,w2,w3,density\n";
  for (int i = 1; i < m_grid; ++i)
    for (int j = 1; j < m_grid - i; ++j) {
      const double w1 = double(i) / m_grid, w2 = double(j) / m_grid;
      const std::vector<double> w = {w1, w2, 1.0 - w1 - w2};
      csv += fmt_double(w[0]) + "," + fmt_double(w[1]) + "," + fmt_double(w[2]) + "," +
             fmt_double(dirichlet_angular_density(alpha, w)) + "\n";
    }
  return csv;
}

std::string pickands_csv(const ModelSpec& m, int n_points, double quad_tol) {
  EvalOptions opts;
  opts.quad_tol = quad_tol;
  std::string csv = "t,A\n";
  for (int i = 0; i <= n_points; ++i) {
    const double t = double(i) / n_points;
    const std::vector<double> w = {1.0 - t, t};
    csv += fmt_double(t) + "," + fmt_double(ell(m, w, opts).value) + "\n";
  }
  return csv;
}

std::string projection_curves_csv(const std::vector<std::pair<std::string, ModelSpec>>& models,
                                  ProjectionKind kind, const Range& trange,
                                  const EvalOptions& opts) {
  // one block of columns per model: F at common Gumbel-scale levels
  std::string csv = "t,log_t";
  for (const auto& [name, m] : models) csv += ",F_" + name;
  csv += "\n";
  std::vector<MinProjection> minps;
  std::vector<double> ells;
  const std::vector<double> a(models.front().second.dim(), 1.0);
  for (const auto& [name, m] : models) {
    if (kind == ProjectionKind::min)
      minps.emplace_back(m, a, opts);
    else
      ells.push_back(ell(m, a, opts).value);
  }
  for (int i = 0; i < trange.count; ++i) {
    const double t = trange.at(i, true);
    csv += fmt_double(t) + "," + fmt_double(std::log(t));
    for (std::size_t k = 0; k < models.size(); ++k) {
      const double F = kind == ProjectionKind::min ? 1.0 - minps[k].survival(t)
                                                   : std::exp(-ells[k] / t);
      csv += "," + fmt_double(F);
    }
    csv += "\n";
  }
  return csv;
}

std::string return_level_curves_csv(const std::vector<std::pair<std::string, ModelSpec>>& models,
                                    ProjectionKind kind, const Range& periods,
                                    const EvalOptions& opts) {
  std::string csv = "return_period";
  for (const auto& [name, m] : models) csv += ",level_" + name;
  csv += "\n";
  const std::vector<double> a(models.front().second.dim(), 1.0);
  for (int i = 0; i < periods.count; ++i) {
    const double period = periods.at(i, true);
    csv += fmt_double(period);
    for (const auto& [name, m] : models)
      csv += "," + fmt_double(return_level(m, a, kind, period, LevelScale::gumbel, opts));
    csv += "\n";
  }
  return csv;
}

std::vector<std::pair<std::string, ModelSpec>> figure1_dirichlet_sets() {
  const std::vector<std::pair<std::string, std::vector<double>>> sets = {
      {"sym_1.5", {1.5, 1.5, 1.5}}, {"sym_3", {3, 3, 3}},       {"sym_12", {12, 12, 12}},
      {"asym_base", {1.5, 1.5, 1.5}}, {"asym_mid", {1.5, 3, 12}}, {"asym_high", {1.5, 12, 96}}};
  std::vector<std::pair<std::string, ModelSpec>> out;
  for (const auto& [name, alpha] : sets) out.emplace_back(name, ModelSpec::dirichlet(alpha));
  return out;
}

int cmd_figures(const Cli& g, Manifest& man, int id, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  EvalOptions opts = g.eval_opts();
  const int angles = g.grid > 0 ? g.grid : 720;

  auto zon = [&](const ModelSpec& m) { return zonoid_polyline_of(m, angles, g.quad_tol); };
  auto name_of = [](double v) {
    std::string s = fmt_double(v);
    for (char& c : s)
      if (c == '.') c = 'p';
    return s;
  };

  switch (id) {
    case 1: {
      for (const auto& [name, m] : figure1_dirichlet_sets())
        write_figure_file(dir, "figure1_" + name + ".csv", angular_density_csv(m.alpha(), 96));
      break;
    }
    case 2: {
      const ModelSpec dir30 = ModelSpec::dirichlet({30.0, 0.2});
      const ModelSpec assoc = associated_choquet(dir30, opts);
      write_figure_file(dir, "figure2_dependent.csv",
                        polyline_csv(zon(ModelSpec::fully_dependent(2))));
      write_figure_file(dir, "figure2_dirichlet.csv", polyline_csv(zon(dir30)));
      write_figure_file(dir, "figure2_associated.csv", polyline_csv(zon(assoc)));
      write_figure_file(dir, "figure2_square.csv",
                        polyline_csv(zon(ModelSpec::independent(2))));
      break;
    }
    case 3: {
      for (double a : {0.0625, 0.25, 1.0, 4.0})
        write_figure_file(dir, "figure3_sym_" + name_of(a) + ".csv",
                          polyline_csv(zon(ModelSpec::dirichlet({a, a}))));
      write_figure_file(dir, "figure3_pair_a.csv",
                        polyline_csv(zon(ModelSpec::dirichlet({0.15, 12.0}))));
      write_figure_file(dir, "figure3_pair_b.csv",
                        polyline_csv(zon(ModelSpec::dirichlet({4.0, 0.2}))));
      break;
    }
    case 4: {
      const std::vector<std::vector<double>> pairs = {
          {0.25, 0.25}, {1.0, 0.25}, {1.0, 1.0}, {1.0, 4.0}, {4.0, 4.0}};
      for (const auto& alpha : pairs) {
        const std::string tag = name_of(alpha[0]) + "_" + name_of(alpha[1]);
        const ModelSpec m = ModelSpec::dirichlet(alpha);
        write_figure_file(dir, "figure4_zonoid_" + tag + ".csv", polyline_csv(zon(m)));
        write_figure_file(dir, "figure4_pickands_" + tag + ".csv",
                          pickands_csv(m, 200, g.quad_tol));
      }
      break;
    }
    case 5:
    case 6: {
      auto models = figure1_dirichlet_sets();
      models.emplace_back("dependent", ModelSpec::fully_dependent(3));
      models.emplace_back("independent", ModelSpec::independent(3));
      const ProjectionKind kind = id == 5 ? ProjectionKind::min : ProjectionKind::max;
      const Range trange{0.05, 200.0, 200};
      const Range periods{10.0, 100.0, 91};
      const std::string base = "figure" + std::to_string(id);
      write_figure_file(dir, base + "_cdf.csv",
                        projection_curves_csv(models, kind, trange, opts));
      write_figure_file(dir, base + "_levels.csv",
                        return_level_curves_csv(models, kind, periods, opts));
      break;
    }
    case 7: {
      for (double sq : {0.5, 1.0, 2.0, 4.0}) {
        Eigen::MatrixXd gamma(2, 2);
        gamma << 0.0, sq * sq, sq * sq, 0.0;
        const ModelSpec m = ModelSpec::husler_reiss(gamma);
        const std::string tag = name_of(sq);
        write_figure_file(dir, "figure7_zonoid_sqrt" + tag + ".csv", polyline_csv(zon(m)));
        write_figure_file(dir, "figure7_pickands_sqrt" + tag + ".csv",
                          pickands_csv(m, 200, g.quad_tol));
      }
      break;
    }
    default:
      throw ParseError("figure id must be 1..7");
  }
  man.grid = "angles=" + std::to_string(angles);
  write_figure_file(dir, "figure" + std::to_string(id) + ".manifest.json",
                    man.to_json(true).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-stable dependence models: evaluation, stochastic orders, projections, "
               "max-zonoids"};
  app.require_subcommand(1);

  Cli g;
  Manifest man;
  {
    std::string cmd;
    for (int i = 1; i < argc; ++i) {
      if (i > 1) cmd += ' ';
      cmd += argv[i];
    }
    man.command = cmd;
  }

  auto add_global = [&](CLI::App* sub) {
    sub->add_option("--seed", g.seed, "root seed for Monte Carlo streams");
    sub->add_option("--mc-n", g.mc_n, "Monte Carlo sample count");
    sub->add_option("--grid", g.grid, "grid resolution (simplex m / angle count)");
    sub->add_option("--tol", g.tol, "comparison tolerance");
    sub->add_option("--quad-tol", g.quad_tol, "quadrature tolerance");
    sub->add_option("--out", g.out, "output file (default stdout)");
    sub->add_option("--format", g.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  std::string model_path, lhs, rhs, relation = "pqd", fn = "ell", subset, weights;
  std::string mode = "cdf", t_range = "0.1:100:200", period_range = "10:100:91";
  std::string kind = "min", scale = "gumbel", svg_out, out_dir = ".", to = "theta";
  std::string sample_kind = "generator", at_single;
  std::vector<std::string> at;
  std::uint64_t n_samples = 1000;
  int angles = 720, figure_id = 0;

  CLI::App* c_validate = app.add_subcommand("validate", "parse and validate a model file");
  c_validate->add_option("model", model_path)->required();
  add_global(c_validate);

  CLI::App* c_eval = app.add_subcommand("eval", "evaluate model functionals");
  c_eval->add_option("model", model_path)->required();
  c_eval->add_option("--fn", fn, "ell|exponent|cdf|pickands|theta|chi|dchi|angular");
  c_eval->add_option("--at", at, "evaluation point, comma separated (repeatable)");
  c_eval->add_option("--subset", subset, "subset key like 1,2");
  add_global(c_eval);

  CLI::App* c_convert = app.add_subcommand("convert", "convert spectral coefficient tables");
  c_convert->add_option("model", model_path)->required();
  c_convert->add_option("--to", to, "tau|theta|chi")->required();
  add_global(c_convert);

  CLI::App* c_order = app.add_subcommand("order", "decide a stochastic order between models");
  c_order->add_option("--relation", relation, "lo|uo|pqd")->required();
  c_order->add_option("--lhs", lhs)->required();
  c_order->add_option("--rhs", rhs)->required();
  add_global(c_order);

  CLI::App* c_project = app.add_subcommand("project", "min/max projection curves");
  c_project->add_option("model", model_path)->required();
  c_project->add_option("--weights", weights)->required();
  c_project->add_option("--mode", mode, "cdf|levels");
  c_project->add_option("--t", t_range, "lo:hi:count log-spaced thresholds");
  c_project->add_option("--periods", period_range, "lo:hi:count log-spaced return periods");
  c_project->add_option("--kind", kind, "min|max (levels mode)");
  c_project->add_option("--scale", scale, "frechet|gumbel (levels mode)");
  add_global(c_project);

  CLI::App* c_zonoid = app.add_subcommand("zonoid", "bivariate max-zonoid boundary");
  c_zonoid->add_option("model", model_path)->required();
  c_zonoid->add_option("--angles", angles, "envelope angle count");
  c_zonoid->add_option("--svg", svg_out, "also write an SVG rendering");
  add_global(c_zonoid);

  CLI::App* c_sample = app.add_subcommand("sample", "draw generator or max-stable samples");
  c_sample->add_option("model", model_path)->required();
  c_sample->add_option("--n", n_samples, "sample count");
  c_sample->add_option("--kind", sample_kind, "generator|maxstable");
  add_global(c_sample);

  CLI::App* c_estimate = app.add_subcommand("estimate", "Monte Carlo estimates");
  c_estimate->add_option("model", model_path)->required();
  c_estimate->add_option("--fn", fn, "ell|theta|chi|associated");
  c_estimate->add_option("--at", at_single, "evaluation point, comma separated");
  c_estimate->add_option("--subset", subset, "subset key like 1,2");
  add_global(c_estimate);

  CLI::App* c_figures = app.add_subcommand("figures", "emit figure data bundles");
  c_figures->add_option("--id", figure_id, "figure id 1..7")->required();
  c_figures->add_option("--out-dir", out_dir, "output directory");
  add_global(c_figures);

  CLI11_PARSE(app, argc, argv);

  man.seed = g.seed;
  man.tol = g.tol;

  try {
    if (c_validate->parsed()) {
      g.format = "json";
      man.format = g.format;
      return cmd_validate(g, man, model_path);
    }
    if (c_eval->parsed()) {
      if (g.format.empty()) g.format = "json";
      man.format = g.format;
      man.mc_n = g.mc_n ? g.mc_n : 100000;
      return cmd_eval(g, man, model_path, fn, at, subset);
    }
    if (c_convert->parsed()) {
      g.format = "json";
      man.format = g.format;
      return cmd_convert(g, man, model_path, to);
    }
    if (c_order->parsed()) {
      g.format = "json";
      man.format = g.format;
      man.mc_n = g.mc_n ? g.mc_n : 1000000;
      return cmd_order(g, man, relation, lhs, rhs);
    }
    if (c_project->parsed()) {
      g.format = g.format.empty() ? "csv" : g.format;
      man.format = g.format;
      man.mc_n = g.mc_n ? g.mc_n : 100000;
      return cmd_project(g, man, model_path, weights, mode, t_range, period_range, kind, scale);
    }
    if (c_zonoid->parsed()) {
      g.format = "csv";
      man.format = g.format;
      return cmd_zonoid(g, man, model_path, angles, svg_out);
    }
    if (c_sample->parsed()) {
      g.format = "csv";
      man.format = g.format;
      return cmd_sample(g, man, model_path, n_samples, sample_kind);
    }
    if (c_estimate->parsed()) {
      g.format = "json";
      man.format = g.format;
      man.mc_n = g.mc_n ? g.mc_n : 100000;
      return cmd_estimate(g, man, model_path, fn, at_single, subset);
    }
    if (c_figures->parsed()) {
      g.format = "csv";
      man.format = g.format;
      man.mc_n = g.mc_n ? g.mc_n : 100000;
      return cmd_figures(g, man, figure_id, out_dir);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse failure: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
