#include "maxstab/model_json.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace maxstab {

using nlohmann::json;

std::string subset_key(mask_t m) {
  std::string s;
  for (int i : mask_indices(m)) {
    if (!s.empty()) s += ',';
    s += std::to_string(i);
  }
  return s;
}

mask_t parse_subset_key(const std::string& s, int d) {
  mask_t m = 0;
  int prev = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t used = 0;
    int idx;
    try {
      idx = std::stoi(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw ParseError("bad subset key '" + s + "'");
    }
    if (used == 0 || idx <= prev || idx > d)
      throw ParseError("bad subset key '" + s + "' for dimension " + std::to_string(d));
    m |= singleton(idx);
    prev = idx;
    pos += used;
    if (pos < s.size()) {
      if (s[pos] != ',') throw ParseError("bad subset key '" + s + "'");
      ++pos;
    }
  }
  if (m == 0) throw ParseError("empty subset key");
  return m;
}

namespace {

double require_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + " must be an integer");
  return j.get<int>();
}

CoefficientTable parse_table(const json& j, CoeffKind kind, int d, bool sparse) {
  if (!j.is_object()) throw ParseError("coefficient table must be an object");
  CoefficientTable t;
  t.dim = d;
  t.kind = kind;
  const double fill = sparse ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  t.values.assign(std::size_t{1} << d, fill);
  t.values[0] = 0.0;
  for (const auto& [key, val] : j.items()) {
    const mask_t m = parse_subset_key(key, d);
    t.values[m] = require_number(val, "table entry '" + key + "'");
  }
  if (!sparse)
    for (mask_t a = 1; a <= full_mask(d); ++a)
      if (std::isnan(t.values[a]))
        throw ParseError(std::string(coeff_kind_name(kind)) + " table is missing entry '" +
                         subset_key(a) + "'");
  return t;
}

ModelSpec from_json(const json& j) {
  if (!j.is_object()) throw ParseError("model document must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw ParseError("model document needs a string 'family'");
  const std::string fam = j.at("family").get<std::string>();

  auto get_dim = [&](int inferred) {
    if (!j.contains("d")) {
      if (inferred > 0) return inferred;
      throw ParseError("family '" + fam + "' needs a dimension 'd'");
    }
    const int d = require_int(j.at("d"), "'d'");
    if (inferred > 0 && d != inferred)
      throw ParseError("'d'=" + std::to_string(d) + " contradicts parameter shape " +
                       std::to_string(inferred));
    return d;
  };
  auto wrap_validation = [](auto&& fn) -> ModelSpec {
    try {
      return fn();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  };

  ModelSpec m = [&]() -> ModelSpec {
    if (fam == "independent") {
      const int d = get_dim(0);
      return wrap_validation([&] { return ModelSpec::independent(d); });
    }
    if (fam == "dependent" || fam == "fully_dependent") {
      const int d = get_dim(0);
      return wrap_validation([&] { return ModelSpec::fully_dependent(d); });
    }
    if (fam == "dirichlet") {
      if (!j.contains("alpha") || !j.at("alpha").is_array())
        throw ParseError("dirichlet model needs an array 'alpha'");
      std::vector<double> alpha;
      for (const auto& v : j.at("alpha")) alpha.push_back(require_number(v, "'alpha' entry"));
      get_dim(static_cast<int>(alpha.size()));
      return wrap_validation([&] { return ModelSpec::dirichlet(std::move(alpha)); });
    }
    if (fam == "husler_reiss") {
      if (!j.contains("gamma") || !j.at("gamma").is_array())
        throw ParseError("husler_reiss model needs a matrix 'gamma'");
      const auto& rows = j.at("gamma");
      const int d = static_cast<int>(rows.size());
      Eigen::MatrixXd g(d, d);
      for (int r = 0; r < d; ++r) {
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d)
          throw ParseError("'gamma' must be a square matrix");
        for (int c = 0; c < d; ++c)
          g(r, c) = require_number(rows[r][c], "'gamma' entry");
      }
      get_dim(d);
      return wrap_validation([&] { return ModelSpec::husler_reiss(std::move(g)); });
    }
    if (fam == "choquet") {
      const int n_tables = int(j.contains("tau")) + int(j.contains("theta")) + int(j.contains("chi"));
      if (n_tables != 1)
        throw ParseError("choquet model needs exactly one of 'tau', 'theta', 'chi'");
      if (!j.contains("d")) throw ParseError("choquet model needs a dimension 'd'");
      const int d = require_int(j.at("d"), "'d'");
      try {
        check_dim(d, kMaxExactDim);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
      }
      CoefficientTable t;
      if (j.contains("tau"))
        t = parse_table(j.at("tau"), CoeffKind::tau, d, true);
      else if (j.contains("theta"))
        t = parse_table(j.at("theta"), CoeffKind::theta, d, false);
      else
        t = parse_table(j.at("chi"), CoeffKind::chi, d, false);
      return wrap_validation([&] { return ModelSpec::choquet(t); });
    }
    throw ParseError("unknown family '" + fam + "'");
  }();

  if (j.contains("mc")) {
    const json& p = j.at("mc");
    if (!p.is_object()) throw ParseError("'mc' must be an object");
    McProvenance prov;
    prov.block_key = p.value("block_key", std::uint64_t{0});
    prov.n = p.value("n", std::uint64_t{0});
    prov.seed = p.value("seed", std::uint64_t{0});
    prov.max_stderr = p.value("max_stderr", 0.0);
    m.provenance = prov;
  }
  return m;
}

}  // namespace

ModelSpec model_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

ModelSpec model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json_text(ss.str());
}

std::string model_to_json_text(const ModelSpec& m, int indent) {
  json j;
  j["family"] = family_name(m.family());
  j["d"] = m.dim();
  switch (m.family()) {
    case Family::independent:
    case Family::fully_dependent:
      break;
    case Family::dirichlet:
      j["alpha"] = m.alpha();
      break;
    case Family::husler_reiss: {
      const Eigen::MatrixXd& g = m.gamma();
      json rows = json::array();
      for (int r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.dim(); ++c) row.push_back(g(r, c));
        rows.push_back(std::move(row));
      }
      j["gamma"] = std::move(rows);
      break;
    }
    case Family::choquet: {
      json t = json::object();
      const CoefficientTable& tau = m.tau();
      for (mask_t a = 1; a <= full_mask(m.dim()); ++a)
        if (tau.values[a] != 0.0) t[subset_key(a)] = tau.values[a];
      j["tau"] = std::move(t);
      break;
    }
  }
  if (m.provenance) {
    j["mc"] = {{"block_key", m.provenance->block_key},
               {"n", m.provenance->n},
               {"seed", m.provenance->seed},
               {"max_stderr", m.provenance->max_stderr}};
  }
  return j.dump(indent) + "\n";
}

}  // namespace maxstab
