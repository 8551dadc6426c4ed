#include "rse/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rse/parallel.hpp"
#include "rse/report.hpp"

namespace rse {

namespace {

using nlohmann::json;

Cx cx_from_json(const json& j) {
  if (j.is_number()) return Cx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return Cx(j[0].get<double>(), j[1].get<double>());
  throw ConfigError("expected a complex number as [re, im]");
}

double real_from_json(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string("expected a real number for ") + what);
  return j.get<double>();
}

}  // namespace

Vec vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a vector of [re, im] pairs");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = cx_from_json(j[i]);
  return v;
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a matrix");
  if (j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
    // Nested rows: [[[re,im], ...], ...].
    const auto rows = j.size();
    const auto cols = j[0].size();
    Mat M(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array() || j[r].size() != cols) throw ConfigError("ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) M(r, c) = cx_from_json(j[r][c]);
    }
    return M;
  }
  // Flat row-major list of [re, im] pairs; square dimension inferred.
  const auto total = j.size();
  auto n = static_cast<std::size_t>(std::lround(std::sqrt(double(total))));
  if (n * n != total) throw ConfigError("flat matrix length is not a perfect square");
  Mat M(n, n);
  for (std::size_t i = 0; i < total; ++i) M(i / n, i % n) = cx_from_json(j[i]);
  return M;
}

HoloMap base_map_from_json(const json& j) {
  std::string id;
  json params = json::object();
  if (j.is_string()) {
    id = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("id")) throw ConfigError("base map needs an \"id\"");
    id = j["id"].get<std::string>();
    params = j;
  } else {
    throw ConfigError("base map must be a string id or an object");
  }
  if (id == "identity") return identity_map(params.value("dim", 1));
  if (id == "koebe") return koebe();
  if (id == "one-minus-z") return one_minus_z();
  if (id == "cayley") return cayley();
  if (id == "half-map") return half_map();
  if (id == "log-map") return log_map();
  if (id == "disk-automorphism") {
    return disk_automorphism(cx_from_json(params.at("a")));
  }
  if (id == "hyperbolic-automorphism") {
    return hyperbolic_automorphism(real_from_json(params.at("c"), "c"));
  }
  if (id == "mobius") {
    return mobius(cx_from_json(params.at("a")), cx_from_json(params.at("b")),
                  cx_from_json(params.at("c")), cx_from_json(params.at("d")));
  }
  if (id == "affine1") {
    return affine1(cx_from_json(params.at("a")), cx_from_json(params.at("b")));
  }
  if (id == "linear-ball") return linear_ball_map(matrix_from_json(params.at("M")));
  throw ConfigError("unknown base map id: " + id);
}

GammaSpec gamma_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("gamma needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "jacobian-power") return GammaSpec::jacobian_power(cx_from_json(j.at("alpha")));
  if (kind == "ratio-power") return GammaSpec::ratio_power(cx_from_json(j.at("beta")));
  if (kind == "boundary-ratio-self" || kind == "boundary-ratio-biholo") {
    double r = real_from_json(j.at("r"), "r");
    Vec tau = j.contains("tau") ? vector_from_json(j["tau"]) : vec1(Cx(1.0, 0.0));
    return kind == "boundary-ratio-self" ? GammaSpec::boundary_ratio_self(tau, r)
                                         : GammaSpec::boundary_ratio_biholo(tau, r);
  }
  if (kind == "product") {
    std::vector<GammaSpec> factors;
    for (const auto& f : j.at("factors")) factors.push_back(gamma_from_json(f));
    return GammaSpec::product(std::move(factors));
  }
  // Classical presets with their published parameter ranges.
  if (kind == "rs") return GammaSpec::jacobian_power(Cx(0.5, 0.0));
  if (kind == "gkk") {
    double alpha = real_from_json(j.at("alpha"), "alpha");
    if (!(alpha >= 0.0 && alpha <= 0.5)) {
      throw ConfigError("gkk alpha must lie in [0, 1/2]");
    }
    return GammaSpec::jacobian_power(Cx(alpha, 0.0));
  }
  if (kind == "ps") {
    int n = j.value("n", 1);
    if (n < 1) throw ConfigError("ps needs n >= 1");
    return GammaSpec::jacobian_power(Cx(1.0 / (n + 1), 0.0));
  }
  if (kind == "gk") {
    double beta = real_from_json(j.at("beta"), "beta");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("gk beta must lie in [0, 1]");
    return GammaSpec::ratio_power(Cx(beta, 0.0));
  }
  throw ConfigError("unknown gamma kind: " + kind);
}

const HoloMap& Experiment::base_map() const {
  if (!base) throw ConfigError("this check needs a \"base_map\" section");
  return *base;
}

const GammaSpec& Experiment::gamma_spec() const {
  if (!gamma) throw ConfigError("this check needs a \"gamma\" section");
  return *gamma;
}

namespace {

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "spirallike",          "extended-spirallike",
      "derive-c",            "convex-in-direction",
      "convex-in-direction-extended", "affine-invariance",
      "manifold-export",     "bloch-bounds",
      "appropriate-selfmap", "composition-laws",
      "stationary-sets",     "profile-ratio-monotone"};
  return names;
}

NormSpec norm_from_json(const json& j) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "euclidean")) {
    return NormSpec::euclidean();
  }
  if (j.is_object() && j.contains("lp")) return NormSpec::lp(j["lp"].get<double>());
  throw ConfigError("norm must be \"euclidean\" or {\"lp\": s}");
}

}  // namespace

Experiment parse_experiment(const json& config) {
  if (!config.is_object()) throw ConfigError("configuration must be a JSON object");
  Experiment exp;
  exp.raw = config;
  try {
    if (config.contains("space")) {
      const json& s = config["space"];
      int n = s.value("n", 1);
      int m = s.value("m", 1);
      double q = s.value("q", 2.0);
      double r = s.value("r", 2.0);
      exp.space = SpacePair(n, m, Profile(q, r), norm_from_json(s.value("norm_x", json())),
                            norm_from_json(s.value("norm_y", json())));
    }
    if (config.contains("base_map")) exp.base = base_map_from_json(config["base_map"]);
    if (config.contains("gamma")) exp.gamma = gamma_from_json(config["gamma"]);

    if (config.contains("motion")) {
      const json& mo = config["motion"];
      exp.motion_kind = mo.value("kind", "linear");
      if (exp.motion_kind == "linear" || exp.motion_kind == "affine") {
        exp.motion_A = LinearOperatorSpec(matrix_from_json(mo.at("A")));
      }
      if (mo.contains("tau")) exp.motion_tau = vector_from_json(mo["tau"]);
      if (exp.motion_kind == "shift" && exp.motion_tau.size() == 0) {
        throw ConfigError("shift motion needs \"tau\"");
      }
      if (exp.motion_kind == "affine") {
        exp.lambda = real_from_json(mo.at("lambda"), "lambda");
        if (exp.motion_tau.size() == 0) throw ConfigError("affine motion needs \"tau\"");
      }
      if (exp.motion_kind != "linear" && exp.motion_kind != "shift" &&
          exp.motion_kind != "affine") {
        throw ConfigError("unknown motion kind: " + exp.motion_kind);
      }
    }

    if (config.contains("g")) {
      const json& g = config["g"];
      std::string kind = g.value("kind", "identity");
      if (kind == "identity") {
        exp.fiber_flow = Semigroup::catalog("identity");
      } else if (kind == "linear") {
        exp.fiber_B = LinearOperatorSpec(matrix_from_json(g.at("B")));
        exp.fiber_flow = Semigroup::linear(*exp.fiber_B);
      } else if (kind == "contraction") {
        exp.fiber_B = LinearOperatorSpec(matrix_from_json(g.at("B")));
        exp.fiber_flow = Semigroup::contraction(*exp.fiber_B);
      } else if (kind == "catalog") {
        exp.fiber_flow = Semigroup::catalog(g.at("name").get<std::string>());
      } else {
        throw ConfigError("unknown fiber flow kind: " + kind);
      }
    }

    if (config.contains("checks")) {
      for (const auto& c : config["checks"]) exp.checks.push_back(c.get<std::string>());
    }
    for (const auto& c : exp.checks) {
      const auto& names = known_checks();
      if (std::find(names.begin(), names.end(), c) == names.end()) {
        throw ConfigError("unknown check: " + c);
      }
    }

    if (config.contains("sampler")) {
      const json& s = config["sampler"];
      exp.sampler.samples = s.value("samples", exp.sampler.samples);
      exp.sampler.seed = s.value("seed", exp.sampler.seed);
      if (s.contains("radii")) {
        exp.sampler.radii = s["radii"].get<std::vector<double>>();
      }
      exp.sampler.t_min = s.value("t_min", exp.sampler.t_min);
      exp.sampler.t_max = s.value("t_max", exp.sampler.t_max);
      exp.sampler.t_points = s.value("t_points", exp.sampler.t_points);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration parse error: ") + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("configuration invalid: ") + e.what());
  }
  return exp;
}

// ---------------------------------------------------------------------------
// Dispatch

namespace {

struct CheckOutcome {
  CheckReport report;
  std::vector<std::pair<std::string, std::string>> artifacts;  // path suffix, content
};

LinearOperatorSpec zero_operator(int m) { return LinearOperatorSpec(Mat::Zero(m, m)); }

MotionSpec motion_spec_of(const Experiment& exp) {
  if (exp.motion_kind == "shift") return MotionSpec::shift(exp.motion_tau);
  if (!exp.motion_A) throw ConfigError("this check needs a linear or affine \"motion\"");
  return MotionSpec::linear(*exp.motion_A);
}

CheckOutcome run_one_check(const Experiment& exp, const std::string& name) {
  CheckOutcome out;
  Sampler sampler(exp.sampler);
  std::vector<double> t_grid = sampler.t_grid();
  const SpacePair& sp = exp.space;

  if (name == "spirallike") {
    if (!exp.motion_A) throw ConfigError("spirallike needs a linear motion");
    out.report =
        check_spirallike(SpirallikeClaim{exp.base_map(), *exp.motion_A, t_grid}, sampler);
  } else if (name == "extended-spirallike") {
    if (!exp.motion_A) throw ConfigError("extended-spirallike needs a linear motion");
    LinearOperatorSpec B = exp.fiber_B ? *exp.fiber_B : zero_operator(sp.m);
    out.report = check_extended_spirallike(exp.base_map(), exp.gamma_spec(), *exp.motion_A,
                                           B, sp, t_grid, sampler);
  } else if (name == "derive-c") {
    out.report =
        derive_c_report(exp.gamma_spec(), motion_spec_of(exp), exp.base_map(), sp, sampler);
  } else if (name == "convex-in-direction") {
    if (exp.motion_tau.size() == 0) throw ConfigError("convex-in-direction needs \"tau\"");
    out.report = check_convex_in_direction(exp.base_map(), exp.motion_tau, t_grid, sampler);
  } else if (name == "convex-in-direction-extended") {
    if (exp.motion_tau.size() == 0) throw ConfigError("convex-in-direction needs \"tau\"");
    ExtendedMap em = extend(exp.gamma_spec(), exp.base_map(), sp);
    Cx C = derive_c(exp.gamma_spec(), MotionSpec::shift(exp.motion_tau));
    Mat bpc = (exp.fiber_B ? exp.fiber_B->matrix() : Mat::Zero(sp.m, sp.m)) +
              C * Mat::Identity(sp.m, sp.m);
    out.report = check_convex_in_direction(em, exp.motion_tau, bpc, t_grid, sampler);
  } else if (name == "affine-invariance") {
    LinearOperatorSpec A = exp.motion_A ? *exp.motion_A : zero_operator(sp.n);
    double lambda = exp.motion_kind == "shift" ? 1.0 : exp.lambda;
    Vec tau = exp.motion_tau;
    if (tau.size() == 0) {
      tau = Vec::Zero(sp.n);
      tau(0) = Cx(1.0, 0.0);
    }
    Semigroup g = exp.fiber_flow ? *exp.fiber_flow : Semigroup::catalog("identity");
    out.report = check_affine_invariance(exp.base_map(), exp.gamma_spec(), A, lambda, tau, g,
                                         sp, t_grid, sampler);
  } else if (name == "manifold-export") {
    ExtendedMap em = extend(exp.gamma_spec(), exp.base_map(), sp);
    json mf = exp.raw.value("manifold", json::object());
    ProductPoint base;
    if (mf.contains("base_point")) {
      Vec joint = vector_from_json(mf["base_point"]);
      if (joint.size() != sp.n + sp.m) throw ConfigError("base_point has wrong dimension");
      base.x = joint.head(sp.n);
      base.y = joint.tail(sp.m);
    } else {
      base.x = Vec::Constant(sp.n, Cx(0.3, 0.0));
      base.y = Vec::Constant(sp.m, Cx(0.1, 0.0));
      base = em(base);
    }
    std::vector<double> fan = mf.value("fan", std::vector<double>{0.2, 0.4, 0.6, 0.8, 1.0});
    std::vector<double> grid{0.0};
    for (double t : t_grid) grid.push_back(t);
    CurveTable table = export_invariance_manifold(em, motion_spec_of(exp), base, grid, fan);
    out.report.check = "manifold-export";
    out.report.decided = static_cast<long>(table.rows.size());
    out.report.worst_margin = table.worst_margin;
    out.report.verdict =
        table.worst_margin > -1e-9 ? Verdict::pass : Verdict::violation;
    out.report.notes.push_back("rows: " + std::to_string(table.rows.size()));
    out.artifacts.emplace_back("manifold-" + exp.motion_kind + ".csv",
                               csv_from_table(table));
  } else if (name == "bloch-bounds") {
    BlochBounds b = bloch_bounds(exp.base_map(), exp.gamma_spec(), sp, exp.sampler.samples);
    out.report = b.report;
  } else if (name == "appropriate-selfmap") {
    out.report =
        check_appropriate_selfmap(exp.gamma_spec(), selfmaps_fixing_zero(sp.n), sp, sampler);
  } else if (name == "composition-laws") {
    json comp = exp.raw.value("composition", json::object());
    HoloMap f = comp.contains("f") ? base_map_from_json(comp["f"]) : half_map();
    HoloMap g = comp.contains("g") ? base_map_from_json(comp["g"]) : half_map();
    out.report = check_composition_laws(exp.gamma_spec(), f, g, exp.base_map(), sp, sampler);
  } else if (name == "stationary-sets") {
    if (!exp.motion_A) throw ConfigError("stationary-sets needs a linear motion");
    ExtendedSemigroup ext{Semigroup::linear(*exp.motion_A), exp.gamma_spec().hat(),
                          exp.fiber_flow ? *exp.fiber_flow : Semigroup::catalog("identity"),
                          sp};
    std::vector<Vec> candidates;
    if (exp.raw.contains("candidates")) {
      for (const auto& c : exp.raw["candidates"]) candidates.push_back(vector_from_json(c));
    } else {
      candidates.push_back(Vec::Zero(sp.n));
    }
    out.report = check_stationary_sets(ext, candidates, t_grid, sampler);
  } else if (name == "profile-ratio-monotone") {
    if (!sp.profile.is_power()) {
      throw ConfigError("profile-ratio-monotone needs a power profile");
    }
    double alpha = exp.gamma_spec().exponent().real();
    out.report = check_profile_ratio_monotone(sp.profile.q(), sp.profile.r(), alpha, sp.n);
  } else {
    throw ConfigError("unknown check: " + name);
  }
  return out;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json RunReport::to_json() const {
  json j;
  j["envelope"] = envelope;
  j["payload"] = payload;
  j["exit_status"] = exit_status;
  return j;
}

RunReport run_experiment(const Experiment& exp, const std::string& out_dir) {
  if (exp.checks.empty()) throw ConfigError("no checks requested");

  std::vector<CheckOutcome> outcomes(exp.checks.size());
  std::vector<std::string> failures(exp.checks.size());
  parallel_for(exp.checks.size(), [&](std::size_t i) {
    try {
      outcomes[i] = run_one_check(exp, exp.checks[i]);
    } catch (const ConfigError&) {
      throw;  // surfaces as a config error for the whole run
    } catch (const std::exception& e) {
      outcomes[i].report.check = exp.checks[i];
      outcomes[i].report.verdict = Verdict::inconclusive;
      outcomes[i].report.notes.push_back(std::string("check aborted: ") + e.what());
    }
  });

  RunReport run;
  run.envelope["timestamp"] = iso_timestamp();
  run.envelope["tool"] = "rs_extend";
  run.payload["config"] = exp.raw;
  run.payload["seed"] = exp.sampler.seed;
  json reports = json::array();
  bool any_violation = false;
  bool any_inconclusive = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const CheckReport& rep = outcomes[i].report;
    reports.push_back(rep.to_json());
    any_violation = any_violation || rep.verdict == Verdict::violation;
    any_inconclusive = any_inconclusive || rep.verdict == Verdict::inconclusive;
    if (!out_dir.empty()) {
      for (const auto& [suffix, content] : outcomes[i].artifacts) {
        write_atomic(out_dir + "/" + suffix, content);
      }
    }
  }
  run.payload["reports"] = std::move(reports);
  run.exit_status = any_violation ? 1 : (any_inconclusive ? 2 : 0);
  run.payload["status"] = run.exit_status;
  return run;
}

json list_catalog() {
  json j;
  j["base_maps"] = json::array({
      json{{"id", "identity"}, {"params", {{"dim", "int >= 1"}}}},
      json{{"id", "koebe"}},
      json{{"id", "one-minus-z"}},
      json{{"id", "cayley"}},
      json{{"id", "half-map"}},
      json{{"id", "log-map"}},
      json{{"id", "disk-automorphism"}, {"params", {{"a", "complex, |a| < 1"}}}},
      json{{"id", "hyperbolic-automorphism"}, {"params", {{"c", "real in (0, 1)"}}}},
      json{{"id", "mobius"}, {"params", {{"a", "complex"}, {"b", "complex"},
                                         {"c", "complex"}, {"d", "complex"}}}},
      json{{"id", "affine1"}, {"params", {{"a", "complex"}, {"b", "complex"}}}},
      json{{"id", "linear-ball"}, {"params", {{"M", "matrix"}}}},
  });
  j["gamma_variants"] = json::array({
      json{{"id", "jacobian-power"}, {"params", {{"alpha", "complex"}}}},
      json{{"id", "ratio-power"}, {"params", {{"beta", "complex"}}}},
      json{{"id", "boundary-ratio-self"}, {"params", {{"r", "real >= 1"}, {"tau", "vector"}}}},
      json{{"id", "boundary-ratio-biholo"},
           {"params", {{"r", "real >= 1"}, {"tau", "vector"}}}},
      json{{"id", "product"}, {"params", {{"factors", "list of gamma"}}}},
      json{{"id", "rs"}},
      json{{"id", "gkk"}, {"params", {{"alpha", "real in [0, 1/2]"}}}},
      json{{"id", "ps"}, {"params", {{"n", "int >= 1"}}}},
      json{{"id", "gk"}, {"params", {{"beta", "real in [0, 1]"}}}},
  });
  j["motions"] = json::array({
      json{{"id", "linear"}, {"params", {{"A", "matrix"}}}},
      json{{"id", "shift"}, {"params", {{"tau", "vector"}}}},
      json{{"id", "affine"},
           {"params", {{"A", "matrix"}, {"lambda", "real >= 0"}, {"tau", "unit vector"}}}},
  });
  j["fiber_flows"] = json::array({
      json{{"id", "identity"}},
      json{{"id", "linear"}, {"params", {{"B", "matrix"}}}},
      json{{"id", "contraction"}, {"params", {{"B", "accretive matrix"}}}},
      json{{"id", "catalog"},
           {"params", {{"name", "exp-contraction | koenigs | boundary-affine | identity"}}}},
  });
  j["checks"] = known_checks();
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f << content;
    if (!f.good()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string csv_from_table(const CurveTable& table) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace rse
