#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inertia/anticipate.hpp"
#include "inertia/csv.hpp"
#include "inertia/domain.hpp"
#include "inertia/estimator.hpp"
#include "inertia/forecast.hpp"
#include "inertia/ingest.hpp"
#include "inertia/model_io.hpp"
#include "inertia/synth.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitModel = 3;
constexpr int kExitInfeasible = 4;

// Values shared by the subcommands. Flags override the optional JSON config
// file, which carries the same keys as the long flag names (dashes swapped
// for underscores).
struct Options {
  std::string config_path;

  std::string positions, actions, plants, market, outturn, demand;
  std::string model, actuals, candidates, out;

  std::optional<double> lambda;
  std::vector<double> lambda_grid{std::begin(inertia::est::kDefaultLambdaGrid),
                                  std::end(inertia::est::kDefaultLambdaGrid)};
  std::string mode = "auto";
  double agreement = 0.995;
  double on_threshold_mw = 0.0;
  double validation_split = 0.2;
  double trigger_gvas = 140.0;
  double lead_minutes = 180.0;
  double baseline_gvas = 0.0;
  std::uint64_t seed = 1;

  int n_plants = 12;
  int n_periods = 960;
  double zero_fraction = 0.25;
  double noise_sigma = 0.5;
  double w_dem_true = 0.8;
  double duty_cycle = 0.6;
  double tso_rate = 0.05;
  int colinear_pairs = 0;

  int oracle_instances = 20;
};

void apply_config_file(Options& opt, const std::string& path, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw inertia::ParseError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw inertia::ParseError(path + ": malformed JSON config: " + std::string(e.what()));
  }
  auto set_if_unset = [&](const char* key, auto& target) {
    const auto* flag = cmd.get_option_no_throw(std::string("--") + key);
    const bool overridden = flag != nullptr && flag->count() > 0;
    std::string json_key = key;
    std::replace(json_key.begin(), json_key.end(), '-', '_');
    if (!overridden && doc.contains(json_key)) {
      doc.at(json_key).get_to(target);
    }
  };
  set_if_unset("positions", opt.positions);
  set_if_unset("actions", opt.actions);
  set_if_unset("plants", opt.plants);
  set_if_unset("market", opt.market);
  set_if_unset("outturn", opt.outturn);
  set_if_unset("demand", opt.demand);
  set_if_unset("model", opt.model);
  set_if_unset("actuals", opt.actuals);
  set_if_unset("candidates", opt.candidates);
  set_if_unset("out", opt.out);
  if (doc.contains("lambda")) {
    const auto* flag = cmd.get_option_no_throw("--lambda");
    if (flag == nullptr || flag->count() == 0) opt.lambda = doc.at("lambda").get<double>();
  }
  set_if_unset("lambda-grid", opt.lambda_grid);
  set_if_unset("mode", opt.mode);
  set_if_unset("agreement", opt.agreement);
  set_if_unset("on-threshold-mw", opt.on_threshold_mw);
  set_if_unset("validation-split", opt.validation_split);
  set_if_unset("trigger-gvas", opt.trigger_gvas);
  set_if_unset("lead-minutes", opt.lead_minutes);
  set_if_unset("baseline-gvas", opt.baseline_gvas);
  set_if_unset("seed", opt.seed);
  set_if_unset("n-plants", opt.n_plants);
  set_if_unset("n-periods", opt.n_periods);
  set_if_unset("zero-fraction", opt.zero_fraction);
  set_if_unset("noise-sigma", opt.noise_sigma);
  set_if_unset("w-dem-true", opt.w_dem_true);
  set_if_unset("duty-cycle", opt.duty_cycle);
  set_if_unset("tso-rate", opt.tso_rate);
  set_if_unset("colinear-pairs", opt.colinear_pairs);
}

inertia::est::L0Mode parse_mode(const std::string& s) {
  if (s == "exact") return inertia::est::L0Mode::exact;
  if (s == "heuristic") return inertia::est::L0Mode::heuristic;
  if (s == "auto") return inertia::est::L0Mode::auto_select;
  throw inertia::ParseError("unknown mode '" + s + "', expected exact|heuristic|auto");
}

fs::path require_file(const std::string& path, const char* what) {
  if (path.empty()) {
    throw inertia::ParseError(std::string("missing required input: ") + what);
  }
  if (!fs::exists(path)) {
    throw inertia::ParseError(std::string(what) + " file not found: " + path);
  }
  return path;
}

fs::path prepare_out_dir(const std::string& out) {
  if (out.empty()) throw inertia::ParseError("missing required --out directory");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw inertia::ParseError("cannot create output directory " + out);
  return out;
}

void write_plant_report(const fs::path& path, const inertia::est::InertiaSolution& sol,
                        const std::vector<inertia::Plant>& fleet) {
  std::map<inertia::PlantId, const inertia::Plant*> by_id;
  for (const auto& p : fleet) by_id[p.id] = &p;
  inertia::csv::Writer w(path);
  w.row({"plant_id", "fuel", "w_gvas", "h_seconds"});
  for (const auto& [id, weight] : sol.w) {
    const auto it = by_id.find(id);
    std::string fuel{inertia::to_string(it != by_id.end() ? it->second->fuel
                                                          : inertia::FuelType::other)};
    std::string h = it != by_id.end()
                        ? inertia::csv::format_double(
                              inertia::h_constant(weight, it->second->nameplate_mva))
                        : std::string();
    w.row({id, fuel, inertia::csv::format_double(weight), h});
  }
  w.close();
}

int cmd_fit(const Options& opt) {
  using namespace inertia;
  const auto positions = ingest::load_positions(require_file(opt.positions, "positions"));
  ingest::ActionsTable actions;
  if (!opt.actions.empty()) {
    actions = ingest::load_actions(require_file(opt.actions, "actions"));
  }
  std::vector<Plant> fleet;
  if (!opt.plants.empty()) {
    fleet = ingest::load_plants(require_file(opt.plants, "plants"));
  }
  const auto series = ingest::load_aggregate(require_file(opt.market, "market inertia"),
                                             require_file(opt.outturn, "outturn inertia"),
                                             require_file(opt.demand, "demand"));
  const auto ind = ingest::build_indicators(positions, actions, series, opt.on_threshold_mw);
  for (const auto& warning : ind.warnings) std::cerr << "warning: " << warning << '\n';
  const auto groups = ingest::group_colinear(ind, fleet, opt.agreement);
  const bool use_tso = ind.has_tso_actions();
  const auto mode = parse_mode(opt.mode);

  est::InertiaSolution sol;
  if (opt.lambda) {
    sol = est::fit(ind, series, groups, *opt.lambda, mode, use_tso);
  } else {
    auto choice = est::select_lambda(ind, series, groups, opt.lambda_grid, opt.validation_split,
                                     mode, use_tso);
    std::cerr << "selected lambda " << csv::format_double(choice.lambda) << '\n';
    sol = std::move(choice.solution);
  }

  const auto out = prepare_out_dir(opt.out);
  est::save_model(out / "model.json", sol, fleet);
  write_plant_report(out / "plant_report.csv", sol, fleet);
  return kExitOk;
}

int cmd_predict(const Options& opt) {
  using namespace inertia;
  const auto model = est::load_model(require_file(opt.model, "model"));
  const auto sol = est::solution_from_model(model);
  const auto positions = ingest::load_positions(require_file(opt.positions, "positions"));
  const auto demand =
      ingest::load_period_series(require_file(opt.demand, "demand"), "demand_gw");

  std::vector<SettlementPeriod> periods;
  std::vector<double> demand_gw;
  for (const auto& p : demand) {
    periods.push_back(p.period);
    demand_gw.push_back(p.value);
  }
  const auto ind =
      ingest::build_indicators(positions, ingest::ActionsTable{}, periods, opt.on_threshold_mw);

  auto series = forecast::predict(sol, ind, demand_gw, opt.trigger_gvas);
  for (const auto& warning : series.warnings) std::cerr << "warning: " << warning << '\n';

  const auto out = prepare_out_dir(opt.out);
  if (!opt.actuals.empty()) {
    const auto actuals =
        ingest::load_period_series(require_file(opt.actuals, "actuals"), "inertia_gvas");
    forecast::attach_actuals(series, actuals);
    std::cout << forecast::eval_to_json(forecast::evaluate(series)) << '\n';
  }
  forecast::write_forecast_csv(out / "forecast.csv", series);
  return kExitOk;
}

int cmd_anticipate(const Options& opt) {
  using namespace inertia;
  const auto candidates = anticipate::load_candidates(require_file(opt.candidates, "candidates"));
  const auto plan = anticipate::plan(candidates, opt.baseline_gvas, opt.trigger_gvas,
                                     opt.lead_minutes);
  const auto out = prepare_out_dir(opt.out);
  std::ofstream plan_out(out / "plan.json");
  plan_out << anticipate::plan_to_json(plan) << '\n';
  if (!plan_out) throw ParseError("failed writing plan.json");
  std::cout << anticipate::plan_to_json(plan) << '\n';
  return plan.feasible ? kExitOk : kExitInfeasible;
}

int cmd_synth(const Options& opt) {
  using namespace inertia;
  synth::ScenarioConfig config;
  config.n_plants = opt.n_plants;
  config.n_periods = opt.n_periods;
  config.zero_fraction = opt.zero_fraction;
  config.noise_sigma_gvas = opt.noise_sigma;
  config.w_dem_true = opt.w_dem_true;
  config.duty_cycle = opt.duty_cycle;
  config.tso_action_rate = opt.tso_rate;
  config.colinear_pairs = opt.colinear_pairs;
  config.seed = opt.seed;
  const auto scenario = synth::generate(config);
  synth::export_scenario(scenario, prepare_out_dir(opt.out));
  return kExitOk;
}

int cmd_oracle_check(const Options& opt) {
  using namespace inertia;
  synth::Rng rng(opt.seed);
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
    all_ok &= ok;
  };

  for (int i = 0; i < opt.oracle_instances; ++i) {
    const std::size_t cols = 1 + std::size_t(rng.below(8));
    const std::size_t rows = 5 + std::size_t(rng.below(40));
    linalg::Matrix x(rows, cols + 1);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) x(r, c) = rng.uniform01() < 0.5 ? 1.0 : 0.0;
      x(r, cols) = rng.uniform(5.0, 40.0);
    }
    std::vector<double> y(rows);
    for (auto& v : y) v = rng.uniform(0.0, 30.0);
    const auto sys = est::DesignSystem::raw(std::move(x), std::move(y), true);
    for (const double lambda : {0.0, 0.1, 1.0}) {
      const auto oracle = est::brute_force_oracle(sys, lambda);
      const auto exact = est::solve_l0(sys, lambda, est::L0Mode::exact);
      const auto heuristic = est::solve_l0_heuristic(sys, lambda);
      const double tol = 1e-6 * std::max(1e-3, oracle.objective);
      const bool exact_ok = std::abs(exact.objective - oracle.objective) <= tol;
      const bool heur_ok = heuristic.objective <= 1.05 * oracle.objective + 1e-9;
      report("l0-instance-" + std::to_string(i) + "-lambda-" + csv::format_double(lambda),
             exact_ok && heur_ok,
             "oracle " + csv::format_double(oracle.objective) + ", exact " +
                 csv::format_double(exact.objective) + ", heuristic " +
                 csv::format_double(heuristic.objective));
    }
  }

  for (int i = 0; i < opt.oracle_instances; ++i) {
    const std::size_t n = 3 + std::size_t(rng.below(12));
    std::vector<anticipate::ActionCandidate> cands;
    for (std::size_t k = 0; k < n; ++k) {
      anticipate::ActionCandidate c;
      c.plant = "T_UNIT-" + std::to_string(k + 1);
      c.kind = rng.uniform01() < 0.5 ? anticipate::ActionKind::keep_running
                                     : anticipate::ActionKind::start;
      c.currently_on = c.kind == anticipate::ActionKind::keep_running;
      c.w_gvas = 0.125 * double(1 + rng.below(60));
      c.cost = 0.25 * double(1 + rng.below(2000));
      c.notice_minutes = double(10 * rng.below(12));
      c.ramp_mw_per_min = double(1 + rng.below(20));
      c.stable_export_mw = double(20 * (1 + rng.below(15)));
      cands.push_back(std::move(c));
    }
    const double baseline = 110.0 + rng.uniform(0.0, 20.0);
    const auto fast = anticipate::plan(cands, baseline);
    const auto slow = anticipate::brute_force_plan(cands, baseline);
    const bool ok = fast.selected == slow.selected &&
                    std::abs(fast.total_cost - slow.total_cost) <= 1e-9 &&
                    anticipate::verify_plan(fast, anticipate::filter_feasible(cands, 180.0),
                                            baseline, 140.0);
    report("plan-instance-" + std::to_string(i), ok,
           "cost " + csv::format_double(fast.total_cost) + " vs enumeration " +
               csv::format_double(slow.total_cost));
  }

  return all_ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"per-plant inertia reconstruction, forecasting and action planning"};
  app.require_subcommand(1);

  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "JSON config file; flags take precedence");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--out", opt.out, "output directory");
    return cmd;
  };

  auto* fit = add_common(app.add_subcommand("fit", "reconstruct per-plant inertia constants"));
  fit->add_option("--positions", opt.positions, "positions.csv");
  fit->add_option("--actions", opt.actions, "actions.csv (optional)");
  fit->add_option("--plants", opt.plants, "plants.csv (optional, enables H reporting)");
  fit->add_option("--market", opt.market, "market_inertia.csv");
  fit->add_option("--outturn", opt.outturn, "outturn_inertia.csv");
  fit->add_option("--demand", opt.demand, "demand.csv");
  fit->add_option("--lambda", [&opt](const CLI::results_t& res) {
    opt.lambda = std::stod(res.front());
    return true;
  }, "fixed l0 penalty; omit to select on a validation split");
  fit->add_option("--lambda-grid", opt.lambda_grid, "candidate penalties")->delimiter(',');
  fit->add_option("--mode", opt.mode, "exact|heuristic|auto");
  fit->add_option("--agreement", opt.agreement, "colinear grouping agreement fraction");
  fit->add_option("--on-threshold-mw", opt.on_threshold_mw, "MW level counting as ON");
  fit->add_option("--validation-split", opt.validation_split, "validation fraction");

  auto* predict = add_common(app.add_subcommand("predict", "forecast aggregate inertia"));
  predict->add_option("--model", opt.model, "model.json from fit");
  predict->add_option("--positions", opt.positions, "positions.csv for the horizon");
  predict->add_option("--demand", opt.demand, "demand.csv for the horizon");
  predict->add_option("--actuals", opt.actuals, "market_inertia.csv to evaluate against");
  predict->add_option("--trigger-gvas", opt.trigger_gvas, "low-inertia trigger level");
  predict->add_option("--on-threshold-mw", opt.on_threshold_mw, "MW level counting as ON");

  auto* anticipate_cmd =
      add_common(app.add_subcommand("anticipate", "plan minimum-cost inertia-raising actions"));
  anticipate_cmd->add_option("--candidates", opt.candidates, "candidates.csv");
  anticipate_cmd->add_option("--baseline-gvas", opt.baseline_gvas, "aggregate before actions");
  anticipate_cmd->add_option("--trigger-gvas", opt.trigger_gvas, "target level");
  anticipate_cmd->add_option("--lead-minutes", opt.lead_minutes, "time until delivery");

  auto* synth_cmd = add_common(app.add_subcommand("synth", "generate a synthetic fixture set"));
  synth_cmd->add_option("--n-plants", opt.n_plants, "fleet size");
  synth_cmd->add_option("--n-periods", opt.n_periods, "settlement periods");
  synth_cmd->add_option("--zero-fraction", opt.zero_fraction, "share of zero-inertia plants");
  synth_cmd->add_option("--noise-sigma", opt.noise_sigma, "aggregate noise, GVAs");
  synth_cmd->add_option("--w-dem-true", opt.w_dem_true, "demand inertia, GVAs per GW");
  synth_cmd->add_option("--duty-cycle", opt.duty_cycle, "ON probability per period");
  synth_cmd->add_option("--tso-rate", opt.tso_rate, "per-period switch-on action probability");
  synth_cmd->add_option("--colinear-pairs", opt.colinear_pairs, "identical-schedule pairs");

  auto* oracle = add_common(
      app.add_subcommand("oracle-check", "compare solvers against brute-force oracles"));
  oracle->add_option("--instances", opt.oracle_instances, "instances per solver family");

  CLI11_PARSE(app, argc, argv);

  const CLI::App* active = app.get_subcommands().front();
  try {
    if (!opt.config_path.empty()) apply_config_file(opt, opt.config_path, *active);
    if (active == fit) return cmd_fit(opt);
    if (active == predict) return cmd_predict(opt);
    if (active == anticipate_cmd) return cmd_anticipate(opt);
    if (active == synth_cmd) return cmd_synth(opt);
    if (active == oracle) return cmd_oracle_check(opt);
  } catch (const inertia::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModel;
  } catch (const inertia::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const inertia::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const inertia::AlignmentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const inertia::AssemblyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
