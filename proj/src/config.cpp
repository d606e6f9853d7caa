#include "dgmv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dgmv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(Errc::ConfigError, path + ": " + what);
}

void check_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required key");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

Eigen::VectorXd as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = as_number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Eigen::MatrixXd out;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) fail(row_path, "expected an array row");
    if (i == 0) {
      cols = v[i].size();
      out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    }
    if (v[i].size() != cols) fail(row_path, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          as_number(v[i][j], row_path + "[" + std::to_string(j) + "]");
  }
  return out;
}

GreekBundle parse_csv_greeks(const std::filesystem::path& csv_path, Eigen::Index n,
                             const std::string& path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open greeks csv: " + csv_path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(path, "bad numeric cell '" + cell + "' in " + csv_path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  // first row delta, then n rows of gamma
  if (rows.size() != static_cast<std::size_t>(n) + 1)
    fail(path, "greeks csv must have 1 delta row + n gamma rows");
  GreekBundle g;
  g.delta.resize(n);
  g.gamma.resize(n, n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != static_cast<std::size_t>(n))
      fail(path, "greeks csv row " + std::to_string(r) + " must have n values");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (r == 0)
        g.delta(j) = rows[r][static_cast<std::size_t>(j)];
      else
        g.gamma(static_cast<Eigen::Index>(r) - 1, j) = rows[r][static_cast<std::size_t>(j)];
    }
  }
  return g;
}

InstrumentDef parse_instrument(const json& obj, Eigen::Index n, const std::string& path,
                               const std::filesystem::path& base_dir) {
  if (!obj.is_object()) fail(path, "expected an instrument object");
  const json& kind_j = require(obj, path, "kind");
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  InstrumentDef def;
  if (kind == "linear") {
    check_keys(obj, path, {"kind", "factor"});
    def.kind = InstrumentKind::Linear;
    def.factor_index = as_int(require(obj, path, "factor"), path + ".factor");
  } else if (kind == "cash") {
    check_keys(obj, path, {"kind"});
    def.kind = InstrumentKind::Cash;
  } else if (kind == "european_call" || kind == "european_put") {
    check_keys(obj, path, {"kind", "factor", "strike", "vol", "rate", "expiry"});
    def.kind = kind == "european_call" ? InstrumentKind::EuropeanCall : InstrumentKind::EuropeanPut;
    def.factor_index = as_int(require(obj, path, "factor"), path + ".factor");
    def.strike = as_number(require(obj, path, "strike"), path + ".strike");
    def.vol = as_number(require(obj, path, "vol"), path + ".vol");
    def.rate = as_number(require(obj, path, "rate"), path + ".rate");
    def.expiry = as_number(require(obj, path, "expiry"), path + ".expiry");
  } else if (kind == "custom") {
    check_keys(obj, path, {"kind", "greeks"});
    def.kind = InstrumentKind::Custom;
    const json& gk = require(obj, path, "greeks");
    const std::string gpath = path + ".greeks";
    if (!gk.is_object()) fail(gpath, "expected an object");
    check_keys(gk, gpath, {"value", "theta", "delta", "gamma", "csv"});
    GreekBundle g;
    g.value = as_number(require(gk, gpath, "value"), gpath + ".value");
    g.theta = as_number(require(gk, gpath, "theta"), gpath + ".theta");
    const bool has_csv = gk.contains("csv");
    const bool has_inline = gk.contains("delta") || gk.contains("gamma");
    if (has_csv == has_inline)
      fail(gpath, "give either a csv path or inline delta+gamma, not both");
    if (has_csv) {
      if (!gk["csv"].is_string()) fail(gpath + ".csv", "expected a string path");
      std::filesystem::path csv = gk["csv"].get<std::string>();
      if (csv.is_relative()) csv = base_dir / csv;
      GreekBundle loaded = parse_csv_greeks(csv, n, gpath + ".csv");
      g.delta = std::move(loaded.delta);
      g.gamma = std::move(loaded.gamma);
    } else {
      g.delta = as_vector(require(gk, gpath, "delta"), gpath + ".delta");
      g.gamma = as_matrix(require(gk, gpath, "gamma"), gpath + ".gamma");
    }
    def.custom_greeks = std::move(g);
  } else {
    fail(path + ".kind", "unknown instrument kind '" + kind + "'");
  }
  return def;
}

json echo_instrument(const InstrumentDef& def) {
  json j;
  j["kind"] = instrument_kind_name(def.kind);
  switch (def.kind) {
    case InstrumentKind::Linear:
      j["factor"] = def.factor_index;
      break;
    case InstrumentKind::Cash:
      break;
    case InstrumentKind::EuropeanCall:
    case InstrumentKind::EuropeanPut:
      j["factor"] = def.factor_index;
      j["strike"] = def.strike;
      j["vol"] = def.vol;
      j["rate"] = def.rate;
      j["expiry"] = def.expiry;
      break;
    case InstrumentKind::Custom: {
      json gk;
      gk["value"] = def.custom_greeks->value;
      gk["theta"] = def.custom_greeks->theta;
      gk["delta"] = std::vector<double>(def.custom_greeks->delta.begin(),
                                        def.custom_greeks->delta.end());
      json gamma = json::array();
      for (Eigen::Index i = 0; i < def.custom_greeks->gamma.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j2 = 0; j2 < def.custom_greeks->gamma.cols(); ++j2)
          row.push_back(def.custom_greeks->gamma(i, j2));
        gamma.push_back(std::move(row));
      }
      gk["gamma"] = std::move(gamma);
      j["greeks"] = std::move(gk);
      break;
    }
  }
  return j;
}

}  // namespace

const char* problem_mode_name(ProblemMode mode) {
  switch (mode) {
    case ProblemMode::P5: return "p5";
    case ProblemMode::P6: return "p6";
    case ProblemMode::Hedge: return "hedge";
    case ProblemMode::Validate: return "validate";
  }
  return "unknown";
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("$", "config root must be an object");
  check_keys(doc, "$", {"factors", "instruments", "problem", "mc"});

  ScenarioConfig cfg;

  // factors
  const json& factors = require(doc, "$", "factors");
  if (!factors.is_object()) fail("$.factors", "expected an object");
  check_keys(factors, "$.factors", {"covariance", "levels", "dt", "drift"});
  FactorModel model;
  model.sigma = as_matrix(require(factors, "$.factors", "covariance"), "$.factors.covariance");
  model.levels = as_vector(require(factors, "$.factors", "levels"), "$.factors.levels");
  model.dt = as_number(require(factors, "$.factors", "dt"), "$.factors.dt");
  if (factors.contains("drift")) model.drift = as_vector(factors["drift"], "$.factors.drift");
  cfg.model = validate_factor_model(std::move(model));
  const Eigen::Index n = cfg.model.n();

  // instruments
  const json& instruments = require(doc, "$", "instruments");
  if (!instruments.is_array() || instruments.empty())
    fail("$.instruments", "expected a non-empty array");
  for (std::size_t k = 0; k < instruments.size(); ++k)
    cfg.instruments.push_back(parse_instrument(
        instruments[k], n, "$.instruments[" + std::to_string(k) + "]", base_dir));
  const auto m = static_cast<Eigen::Index>(cfg.instruments.size());

  // problem
  const json& problem = require(doc, "$", "problem");
  if (!problem.is_object()) fail("$.problem", "expected an object");
  check_keys(problem, "$.problem",
             {"mode", "target", "targets", "hedge_target_index", "positions"});
  const json& mode = require(problem, "$.problem", "mode");
  if (!mode.is_string()) fail("$.problem.mode", "expected a string");
  const std::string mode_str = mode.get<std::string>();
  if (mode_str == "p5")
    cfg.mode = ProblemMode::P5;
  else if (mode_str == "p6")
    cfg.mode = ProblemMode::P6;
  else if (mode_str == "hedge")
    cfg.mode = ProblemMode::Hedge;
  else if (mode_str == "validate")
    cfg.mode = ProblemMode::Validate;
  else
    fail("$.problem.mode", "must be one of p5, p6, hedge, validate");

  if (problem.contains("target"))
    cfg.target = as_number(problem["target"], "$.problem.target");
  if (problem.contains("targets")) {
    const Eigen::VectorXd t = as_vector(problem["targets"], "$.problem.targets");
    cfg.targets.assign(t.begin(), t.end());
  }
  if (problem.contains("hedge_target_index")) {
    cfg.hedge_target_index = as_int(problem["hedge_target_index"], "$.problem.hedge_target_index");
    if (*cfg.hedge_target_index < 0 || *cfg.hedge_target_index >= m)
      fail("$.problem.hedge_target_index", "out of range");
  }
  if (problem.contains("positions")) {
    Eigen::VectorXd pos = as_vector(problem["positions"], "$.problem.positions");
    if (pos.size() != m) fail("$.problem.positions", "length must match instrument count");
    cfg.positions = std::move(pos);
  }

  if (cfg.mode == ProblemMode::P5 && !cfg.target && cfg.targets.empty())
    fail("$.problem.target", "mode p5 requires a target (or targets, for frontier sweeps)");
  if (cfg.mode == ProblemMode::Hedge && !cfg.hedge_target_index)
    fail("$.problem.hedge_target_index", "mode hedge requires a target instrument");

  // mc
  if (doc.contains("mc")) {
    const json& mc = doc["mc"];
    if (!mc.is_object()) fail("$.mc", "expected an object");
    check_keys(mc, "$.mc", {"samples", "seed", "streams"});
    if (mc.contains("samples")) {
      if (!mc["samples"].is_number_integer()) fail("$.mc.samples", "expected an integer");
      cfg.mc.samples = mc["samples"].get<std::int64_t>();
      if (cfg.mc.samples < 1) fail("$.mc.samples", "must be >= 1");
    }
    if (mc.contains("seed")) {
      if (!mc["seed"].is_number_integer()) fail("$.mc.seed", "expected an integer");
      cfg.mc.seed = mc["seed"].get<std::uint64_t>();
    }
    if (mc.contains("streams")) {
      cfg.mc.streams = as_int(mc["streams"], "$.mc.streams");
      if (cfg.mc.streams < 1) fail("$.mc.streams", "must be >= 1");
    }
  }

  // resolved echo, defaults included
  json resolved;
  json jf;
  json cov = json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(cfg.model.sigma(i, j));
    cov.push_back(std::move(row));
  }
  jf["covariance"] = std::move(cov);
  jf["levels"] = std::vector<double>(cfg.model.levels.begin(), cfg.model.levels.end());
  jf["dt"] = cfg.model.dt;
  resolved["factors"] = std::move(jf);

  json ji = json::array();
  for (const InstrumentDef& def : cfg.instruments) ji.push_back(echo_instrument(def));
  resolved["instruments"] = std::move(ji);

  json jp;
  jp["mode"] = problem_mode_name(cfg.mode);
  if (cfg.target) jp["target"] = *cfg.target;
  if (!cfg.targets.empty()) jp["targets"] = cfg.targets;
  if (cfg.hedge_target_index) jp["hedge_target_index"] = *cfg.hedge_target_index;
  if (cfg.positions)
    jp["positions"] = std::vector<double>(cfg.positions->begin(), cfg.positions->end());
  resolved["problem"] = std::move(jp);

  json jm;
  jm["samples"] = cfg.mc.samples;
  jm["seed"] = cfg.mc.seed;
  jm["streams"] = cfg.mc.streams;
  resolved["mc"] = std::move(jm);

  cfg.resolved = std::move(resolved);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config file: " + config_path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);  // allow comments
  } catch (const json::parse_error& e) {
    throw ValidationError(Errc::ConfigError,
                          "malformed JSON in " + config_path.string() + ": " + e.what());
  }
  return parse_scenario(doc, config_path.parent_path());
}

}  // namespace dgmv
