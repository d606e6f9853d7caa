#include "dgmv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgmv/config.hpp"
#include "dgmv/hedging.hpp"
#include "dgmv/moments.hpp"
#include "dgmv/optimizer.hpp"
#include "dgmv/oracle.hpp"

namespace dgmv::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string config_path;
  std::string output_path;  // empty = stdout
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

json to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

std::vector<GreekBundle> build_bundles(const ScenarioConfig& cfg) {
  std::vector<GreekBundle> bundles;
  bundles.reserve(cfg.instruments.size());
  for (const InstrumentDef& def : cfg.instruments) bundles.push_back(greeks(def, cfg.model));
  return bundles;
}

json solution_to_json(const MVSolution& s) {
  json j;
  j["positions"] = to_json(s.positions);
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["multipliers"] = to_json(s.multipliers);
  j["kkt_residual"] = s.kkt_residual;
  j["budget_residual"] = s.budget_residual;
  j["mean_residual"] = s.mean_residual;
  j["min_norm_multipliers"] = s.min_norm_multipliers;
  return j;
}

json run_solve(const ScenarioConfig& cfg) {
  if (cfg.mode != ProblemMode::P5 && cfg.mode != ProblemMode::P6)
    throw ValidationError(Errc::ConfigError, "solve subcommand requires problem.mode p5 or p6");
  if (cfg.mode == ProblemMode::P5 && !cfg.target)
    throw ValidationError(Errc::ConfigError, "solve with mode p5 requires problem.target");
  const std::vector<GreekBundle> bundles = build_bundles(cfg);
  const MVProblem problem = assemble_problem(bundles, cfg.model, cfg.target);
  const MVSolution sol = cfg.mode == ProblemMode::P5 ? solve_p5(problem) : solve_p6(problem);

  json report;
  report["command"] = "solve";
  report["mode"] = problem_mode_name(cfg.mode);
  report["resolved_config"] = cfg.resolved;
  report["solution"] = solution_to_json(sol);
  return report;
}

json run_frontier(const ScenarioConfig& cfg) {
  if (cfg.mode != ProblemMode::P5)
    throw ValidationError(Errc::ConfigError, "frontier subcommand requires problem.mode p5");
  if (cfg.targets.empty())
    throw ValidationError(Errc::ConfigError, "frontier requires problem.targets");
  const std::vector<GreekBundle> bundles = build_bundles(cfg);
  const MVProblem problem = assemble_problem(bundles, cfg.model);
  const std::vector<FrontierPoint> points = frontier(problem, cfg.targets);

  json report;
  report["command"] = "frontier";
  report["resolved_config"] = cfg.resolved;
  json jp = json::array();
  for (const FrontierPoint& pt : points) {
    json e;
    e["target"] = pt.target;
    e["status"] = pt.status;
    if (pt.ok) {
      e["mean"] = pt.solution.mean;
      e["variance"] = pt.solution.variance;
      e["positions"] = to_json(pt.solution.positions);
      e["kkt_residual"] = pt.solution.kkt_residual;
    }
    jp.push_back(std::move(e));
  }
  report["points"] = std::move(jp);
  return report;
}

std::string frontier_csv(const json& report) {
  const json& points = report.at("points");
  std::size_t m = 0;
  for (const json& e : points)
    if (e.contains("positions")) m = std::max(m, e["positions"].size());

  std::ostringstream os;
  os.precision(17);
  os << "target,mean,variance";
  for (std::size_t k = 1; k <= m; ++k) os << ",x_" << k;
  os << "\n";
  for (const json& e : points) {
    os << e["target"].get<double>();
    if (e.contains("positions")) {
      os << "," << e["mean"].get<double>() << "," << e["variance"].get<double>();
      for (const json& x : e["positions"]) os << "," << x.get<double>();
    } else {
      // infeasible entry: fields left empty, details in the JSON report
      for (std::size_t k = 0; k < m + 2; ++k) os << ",";
    }
    os << "\n";
  }
  return os.str();
}

json run_hedge(const ScenarioConfig& cfg) {
  if (cfg.mode != ProblemMode::Hedge)
    throw ValidationError(Errc::ConfigError, "hedge subcommand requires problem.mode hedge");
  const std::vector<GreekBundle> bundles = build_bundles(cfg);
  const int target_index = *cfg.hedge_target_index;

  HedgeProblem hp;
  hp.target = bundles[static_cast<std::size_t>(target_index)];
  hp.model = cfg.model;
  std::vector<int> hedger_indices;
  for (std::size_t k = 0; k < bundles.size(); ++k)
    if (static_cast<int>(k) != target_index) {
      hp.hedgers.push_back(bundles[k]);
      hedger_indices.push_back(static_cast<int>(k));
    }

  const HedgeSolution sol = solve_hedge(hp);

  json report;
  report["command"] = "hedge";
  report["resolved_config"] = cfg.resolved;
  json h;
  h["target_index"] = target_index;
  h["hedger_indices"] = hedger_indices;
  h["hedge_positions"] = to_json(sol.hedge_positions);
  h["cash_position"] = sol.cash_position;
  h["residual_variance"] = sol.residual_variance;
  h["financing"] = sol.financing;
  h["unhedged_variance"] = sol.unhedged_variance;
  h["degenerate"] = sol.degenerate;
  h["normal_residual"] = sol.normal_residual;
  report["hedge"] = h;
  return report;
}

json run_validate(ScenarioConfig& cfg) {
  if (cfg.mode != ProblemMode::Validate)
    throw ValidationError(Errc::ConfigError, "validate subcommand requires problem.mode validate");
  const std::vector<GreekBundle> bundles = build_bundles(cfg);

  Eigen::VectorXd positions;
  if (cfg.positions) {
    positions = *cfg.positions;
  } else {
    // no book given: validate at the global minimum-variance positions
    const MVProblem problem = assemble_problem(bundles, cfg.model);
    positions = solve_p6(problem).positions;
    cfg.resolved["problem"]["positions"] =
        std::vector<double>(positions.begin(), positions.end());
  }

  const AggregateGreeks agg = aggregate(bundles, positions, cfg.model.dt);
  const QuadraticReduction qf = reduce(agg.a, agg.delta, agg.gamma, cfg.model);

  const double analytic_mean = moments::mean(qf);
  const double analytic_var = moments::variance(qf);
  const QuadStats qs = simulate_quadratic(qf, cfg.mc);

  json report;
  report["command"] = "validate";
  report["resolved_config"] = cfg.resolved;

  json analytic;
  analytic["mean"] = analytic_mean;
  analytic["variance"] = analytic_var;
  analytic["second_moment"] = moments::second_moment(qf);
  report["analytic"] = analytic;

  json jq;
  jq["mean_est"] = qs.mean_est;
  jq["var_est"] = qs.var_est;
  jq["se_mean"] = qs.se_mean;
  jq["se_var"] = qs.se_var;
  jq["mean_ok"] = std::abs(qs.mean_est - analytic_mean) <= 4.0 * qs.se_mean;
  jq["var_ok"] = std::abs(qs.var_est - analytic_var) <= 4.0 * qs.se_var;
  report["quadratic_mc"] = jq;

  // MGF check at a theta comfortably inside the domain; also kept small
  // against the spread of Y so exp(theta Y) has tame tails at sane N
  const double lam_max = qf.lambda.size() ? qf.lambda.cwiseAbs().maxCoeff() : 0.0;
  const double sd = std::sqrt(analytic_var);
  double theta = 0.5;
  if (lam_max > 0.0) theta = std::min(theta, 0.25 / lam_max);
  if (sd > 0.0) theta = std::min(theta, 0.5 / sd);
  const double mgf_analytic = std::exp(moments::mgf_exponent(theta, qf));
  const MgfStats ms = simulate_mgf(qf, theta, cfg.mc);
  json jmgf;
  jmgf["theta"] = theta;
  jmgf["analytic"] = mgf_analytic;
  jmgf["est"] = ms.est;
  jmgf["se"] = ms.se;
  jmgf["ok"] = std::abs(ms.est - mgf_analytic) <= 4.0 * ms.se;
  report["mgf_mc"] = jmgf;

  // exact repricing, when every instrument admits it
  const bool repriceable = std::all_of(
      cfg.instruments.begin(), cfg.instruments.end(), [&](const InstrumentDef& def) {
        if (def.kind == InstrumentKind::Custom) return false;
        if (def.kind == InstrumentKind::EuropeanCall || def.kind == InstrumentKind::EuropeanPut)
          return def.expiry > cfg.model.dt;
        return true;
      });
  if (repriceable) {
    PortfolioSpec spec = make_portfolio(cfg.instruments, positions, cfg.model);
    const ExactStats ex = simulate_exact(spec, cfg.model, cfg.mc);
    json je;
    je["mean_est"] = ex.mean_est;
    je["var_est"] = ex.var_est;
    je["se_mean"] = ex.se_mean;
    je["se_var"] = ex.se_var;
    je["approx_gap"] = ex.approx_gap;
    je["analytic_var_ratio"] = ex.var_est != 0.0 ? analytic_var / ex.var_est : 0.0;
    report["exact_mc"] = je;
  } else {
    report["exact_mc_skipped"] =
        "portfolio holds custom or expiring instruments; exact repricing unavailable";
  }
  return report;
}

void write_output(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + output_path);
  out << text;
  if (!out) throw IoError("failed writing output file: " + output_path);
}

int dispatch(const std::string& command, const Options& opt) {
  try {
    ScenarioConfig cfg = load_scenario(opt.config_path);
    if (opt.samples) {
      if (*opt.samples < 1)
        throw ValidationError(Errc::ConfigError, "--samples must be >= 1");
      cfg.mc.samples = *opt.samples;
      cfg.resolved["mc"]["samples"] = cfg.mc.samples;
    }
    if (opt.seed) {
      cfg.mc.seed = *opt.seed;
      cfg.resolved["mc"]["seed"] = cfg.mc.seed;
    }

    json report;
    if (command == "solve")
      report = run_solve(cfg);
    else if (command == "frontier")
      report = run_frontier(cfg);
    else if (command == "hedge")
      report = run_hedge(cfg);
    else
      report = run_validate(cfg);

    if (command == "frontier" && opt.format == "csv")
      write_output(frontier_csv(report), opt.output_path);
    else
      write_output(report.dump(2) + "\n", opt.output_path);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"minimum-variance portfolios and hedges of primary and derivative instruments"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "scenario JSON file")->required();
    sub->add_option("--output", opt.output_path, "report path (default: stdout)");
    sub->add_option("--seed", opt.seed, "override mc.seed");
    sub->add_option("--samples", opt.samples, "override mc.samples");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve P5/P6 for one book");
  CLI::App* front = app.add_subcommand("frontier", "sweep P5 over problem.targets");
  CLI::App* hedge = app.add_subcommand("hedge", "minimum-variance static hedge");
  CLI::App* validate = app.add_subcommand("validate", "Monte Carlo check of the analytics");
  for (CLI::App* sub : {solve, front, hedge, validate}) add_common(sub);
  front->add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return dispatch(command, opt);
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace dgmv::cli
