// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner: plans routes, evaluates the closed-form estimates,
// runs Monte Carlo validation, and emits machine-readable reports
// (JSON for single reports, CSV for grids).

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "leoroute/analytics.hpp"
#include "leoroute/montecarlo.hpp"
#include "leoroute/params.hpp"
#include "leoroute/planner.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace leoroute;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitConfig = 4;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_path;
  std::uint64_t seed = 1;
  std::int64_t trials = 1000;
  int workers = 0;
  std::string kind = "isr";
  std::string strategy = "proposed";
  std::string axis;
  std::vector<double> values;
};

SystemParams resolve_params(const CommonArgs& args) {
  std::map<std::string, std::string> overrides;
  for (const auto& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got: " + kv);
    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return load_params(args.config_path, overrides);
}

planner::RouteKind parse_kind(const std::string& s) {
  if (s == "str") return planner::RouteKind::str;
  if (s == "isr") return planner::RouteKind::isr;
  throw std::invalid_argument("--kind must be str or isr");
}

json decision_json(const planner::DecisionVars& d) {
  return json{{"kind", d.kind == planner::RouteKind::str ? "str" : "isr"},
              {"n_hops", d.n_hops},
              {"theta1_rad", d.theta1},
              {"theta2_rad", d.theta2},
              {"theta3_rad", d.theta3},
              {"theta_big_rad", d.theta_big}};
}

planner::SearchResult run_search(planner::RouteKind kind, const SystemParams& p) {
  const auto ctx = scaling::make_context(p);
  return kind == planner::RouteKind::str ? planner::algorithm1_search(p.theta_big, p, ctx)
                                         : planner::algorithm2_search(p.theta_big, p, ctx);
}

int cmd_plan(const CommonArgs& args) {
  const SystemParams p = resolve_params(args);
  const auto kind = parse_kind(args.kind);
  const auto search = run_search(kind, p);
  json report{{"command", "plan"}, {"feasible", search.feasible}};
  if (!search.feasible) {
    report["reason"] = "no hop count and angle split satisfies the margin-filtered constraints";
    write_output(args.out_path, report.dump(2) + "\n");
    return kExitInfeasible;
  }
  report["decision"] = decision_json(search.decision);
  report["n_max"] = search.n_max;
  report["objective_ee_bits_per_joule"] = search.ee;
  auto plan = planner::ideal_positions(search.decision);
  json positions = json::array();
  double chi = 0.0;
  for (std::size_t i = 0; i + 1 < plan.hop_classes.size(); ++i) {
    chi += plan.hop_angles[i];
    const bool sat = plan.hop_classes[i] != channel::HopClass::c2;
    positions.push_back(json{{"radius_km", sat ? p.r_sat_km() : p.r_earth_km},
                             {"polar_rad", chi},
                             {"azimuth_rad", 0.0}});
  }
  report["ideal_positions"] = positions;
  write_output(args.out_path, report.dump(2) + "\n");
  return kExitOk;
}

int cmd_analyze(const CommonArgs& args) {
  const SystemParams p = resolve_params(args);
  const auto kind = parse_kind(args.kind);
  const auto ctx = scaling::make_context(p);
  const auto search = run_search(kind, p);
  json report{{"command", "analyze"}, {"feasible", search.feasible}};
  if (!search.feasible) {
    report["reason"] = "no feasible plan to analyze";
    write_output(args.out_path, report.dump(2) + "\n");
    return kExitInfeasible;
  }
  analytics::reset_clamp_events();
  const double avail = analytics::availability(search.decision, p, ctx);
  const auto ee = analytics::ee_analytic(search.decision, p, ctx);
  report["decision"] = decision_json(search.decision);
  report["availability_analytic"] = avail;
  report["ee_analytic_bits_per_joule"] = ee.ee;
  report["objective_ee_bits_per_joule"] = search.ee;
  report["density_norm_deficit"] = ee.max_norm_deficit;
  report["clamp_events"] = analytics::clamp_events();
  write_output(args.out_path, report.dump(2) + "\n");
  return kExitOk;
}

json stats_json(const mc::TrialStats& stats) {
  json per_hop = json::array();
  const char* names[3] = {"c1", "c2", "c3"};
  for (int c = 0; c < 3; ++c) {
    const auto& h = stats.per_hop[(std::size_t)c];
    per_hop.push_back(json{{"class", names[c]},
                           {"samples", h.samples},
                           {"outliers", h.outliers},
                           {"recip_mean_joule_per_bit", h.recip_mean},
                           {"recip_std_joule_per_bit", h.recip_std}});
  }
  return json{{"trials", stats.trials},
              {"n_feasible", stats.n_feasible},
              {"availability", stats.availability},
              {"mean_ee_bits_per_joule", stats.mean_ee},
              {"std_ee_bits_per_joule", stats.std_ee},
              {"ee_ci95_bits_per_joule", stats.ci95_halfwidth()},
              {"n_outliers_removed", stats.n_outliers_removed},
              {"mean_ee_inst_bits_per_joule", stats.mean_ee_inst},
              {"std_ee_inst_bits_per_joule", stats.std_ee_inst},
              {"n_outliers_removed_inst", stats.n_outliers_removed_inst},
              {"mean_hops", stats.mean_hops},
              {"per_hop", per_hop}};
}

int cmd_simulate(const CommonArgs& args) {
  const SystemParams p = resolve_params(args);
  mc::TrialConfig cfg;
  cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.strategy = mc::strategy_from_name(args.strategy);
  cfg.kind = parse_kind(args.kind);
  cfg.params = p;
  cfg.workers = args.workers;
  const auto stats = mc::run_trials(cfg);
  json report{{"command", "simulate"},
              {"route_kind", args.kind},
              {"strategy", args.strategy},
              {"seed", cfg.seed},
              {"stats", stats_json(stats)}};
  // Pair the closed-form estimates for the planned strategy so one report
  // carries both sides of the validation protocol.
  if (cfg.strategy == mc::Strategy::proposed) {
    const auto ctx = scaling::make_context(p);
    const auto search = run_search(cfg.kind, p);
    if (search.feasible) {
      const double avail = analytics::availability(search.decision, p, ctx);
      const double ee = analytics::ee_analytic(search.decision, p, ctx).ee;
      json pair{{"availability_analytic", avail}, {"ee_analytic_bits_per_joule", ee}};
      if (stats.mean_ee > 0.0)
        pair["ee_relative_error"] = mc::relative_error(ee, stats.mean_ee);
      report["analytic"] = pair;
    }
  }
  write_output(args.out_path, report.dump(2) + "\n");
  return kExitOk;
}

SystemParams apply_axis(const SystemParams& base, const std::string& axis, double value) {
  SystemParams p = base;
  apply_config_key(p, axis, format_double(value));
  p.validate();
  return p;
}

int cmd_compare(const CommonArgs& args) {
  const SystemParams base = resolve_params(args);
  const std::string axis = args.axis.empty() ? "beta" : args.axis;
  std::vector<double> values = args.values;
  if (values.empty()) values.push_back(axis == "beta" ? base.chan.beta : 0.0);

  std::ostringstream csv;
  csv << "axis,value,route_kind,strategy,trials,availability,mean_ee_bits_per_joule,"
         "ee_ci95_bits_per_joule,analytic_ee_bits_per_joule,n_outliers_removed\n";
  const mc::Strategy strategies[4] = {mc::Strategy::ideal, mc::Strategy::proposed,
                                      mc::Strategy::greedy_max_ee, mc::Strategy::min_deflection};
  for (double value : values) {
    const SystemParams p = apply_axis(base, axis, value);
    const auto ctx = scaling::make_context(p);
    for (auto kind : {planner::RouteKind::str, planner::RouteKind::isr}) {
      const auto search = run_search(kind, p);
      for (auto strat : strategies) {
        mc::TrialConfig cfg;
        cfg.trials = args.trials;
        cfg.seed = args.seed;
        cfg.strategy = strat;
        cfg.kind = kind;
        cfg.params = p;
        cfg.workers = args.workers;
        const auto stats = mc::run_trials(cfg);
        std::string analytic;
        if (strat == mc::Strategy::proposed) {
          if (search.feasible)
            analytic = format_double(analytics::ee_analytic(search.decision, p, ctx).ee);
        } else if (strat == mc::Strategy::ideal) {
          const auto ideal = planner::solve_ideal(kind, p.theta_big, p, p.n_in,
                                                  search.feasible ? search.n_max : 0);
          if (ideal.feasible) analytic = format_double(ideal.ee);
        }
        csv << axis << ',' << format_double(value) << ','
            << (kind == planner::RouteKind::str ? "str" : "isr") << ','
            << mc::strategy_name(strat) << ',' << stats.trials << ','
            << format_double(stats.availability) << ',' << format_double(stats.mean_ee) << ','
            << format_double(stats.ci95_halfwidth()) << ',' << analytic << ','
            << stats.n_outliers_removed << '\n';
      }
    }
  }
  write_output(args.out_path, csv.str());
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  if (args.axis.empty()) throw std::invalid_argument("sweep requires --axis");
  if (args.values.empty()) throw std::invalid_argument("sweep requires --values");
  static const std::map<std::string, bool> allowed = {
      {"n_s", true}, {"n_g", true}, {"h_s_km", true}, {"beta", true}, {"theta_rad", true}};
  if (!allowed.count(args.axis))
    throw std::invalid_argument("sweep axis must be one of n_s, n_g, h_s_km, beta, theta_rad");
  const SystemParams base = resolve_params(args);
  const auto kind = parse_kind(args.kind);

  std::ostringstream csv;
  csv << "axis,value,route_kind,n_hops,availability_sim,availability_analytic,"
         "mean_ee_sim_bits_per_joule,ee_analytic_bits_per_joule,ee_ideal_bits_per_joule,"
         "n_outliers_removed,trials\n";
  for (double value : args.values) {
    const SystemParams p = apply_axis(base, args.axis, value);
    const auto ctx = scaling::make_context(p);
    const auto search = run_search(kind, p);
    mc::TrialConfig cfg;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.strategy = mc::Strategy::proposed;
    cfg.kind = kind;
    cfg.params = p;
    cfg.workers = args.workers;
    const auto stats = mc::run_trials(cfg);
    const auto ideal =
        planner::solve_ideal(kind, p.theta_big, p, p.n_in, search.feasible ? search.n_max : 0);
    std::string n_hops = "", avail_an = "", ee_an = "", ee_ideal = "";
    if (search.feasible) {
      n_hops = std::to_string(search.decision.n_hops);
      avail_an = format_double(analytics::availability(search.decision, p, ctx));
      ee_an = format_double(analytics::ee_analytic(search.decision, p, ctx).ee);
    }
    if (ideal.feasible) ee_ideal = format_double(ideal.ee);
    csv << args.axis << ',' << format_double(value) << ','
        << (kind == planner::RouteKind::str ? "str" : "isr") << ',' << n_hops << ','
        << format_double(stats.availability) << ',' << avail_an << ','
        << format_double(stats.mean_ee) << ',' << ee_an << ',' << ee_ideal << ','
        << stats.n_outliers_removed << ',' << stats.trials << '\n';
  }
  write_output(args.out_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constellation routing laboratory: planning, closed-form analysis and "
               "Monte Carlo validation of satellite-terrestrial vs inter-satellite routing"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub, bool wants_sim) {
    sub->add_option("--config", args.config_path, "key=value parameter file");
    sub->add_option("--set", args.sets, "override a config key (key=value), repeatable");
    sub->add_option("--out", args.out_path, "output file (default: stdout)");
    sub->add_option("--kind", args.kind, "route kind: str or isr")->check(CLI::IsMember({"str", "isr"}));
    if (wants_sim) {
      sub->add_option("--seed", args.seed, "master seed for the trial substreams");
      sub->add_option("--trials", args.trials, "Monte Carlo trial count");
      sub->add_option("--workers", args.workers, "worker threads (0 = auto)");
    }
    return sub;
  };

  auto* plan = add_common(app.add_subcommand("plan", "search the routing decision variables"), false);
  auto* analyze =
      add_common(app.add_subcommand("analyze", "closed-form availability and efficiency"), false);
  auto* simulate = add_common(app.add_subcommand("simulate", "Monte Carlo trials"), true);
  simulate->add_option("--strategy", args.strategy, "proposed|greedy_max_ee|min_deflection|ideal")
      ->check(CLI::IsMember({"proposed", "greedy_max_ee", "min_deflection", "ideal"}));
  auto* compare =
      add_common(app.add_subcommand("compare", "strategy grid over an axis (CSV)"), true);
  compare->add_option("--axis", args.axis, "config key to vary (default beta)");
  compare->add_option("--values", args.values, "axis values")->delimiter(',');
  auto* sweep = add_common(app.add_subcommand("sweep", "metric vs axis (CSV)"), true);
  sweep->add_option("--axis", args.axis, "one of n_s, n_g, h_s_km, beta, theta_rad");
  sweep->add_option("--values", args.values, "axis values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (plan->parsed()) return cmd_plan(args);
    if (analyze->parsed()) return cmd_analyze(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (compare->parsed()) return cmd_compare(args);
    if (sweep->parsed()) return cmd_sweep(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
