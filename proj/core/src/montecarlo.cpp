// SPDX-License-Identifier: Apache-2.0
#include "leoroute/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace leoroute::mc {

using channel::HopClass;
using geometry::DeviceKind;
using geometry::PointSet;
using geometry::SphericalPoint;
using planner::RouteKind;
using planner::RouteRealization;

Strategy strategy_from_name(const std::string& name) {
  if (name == "proposed") return Strategy::proposed;
  if (name == "greedy_max_ee") return Strategy::greedy_max_ee;
  if (name == "min_deflection") return Strategy::min_deflection;
  if (name == "ideal") return Strategy::ideal;
  throw std::invalid_argument("unknown strategy: " + name);
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::proposed: return "proposed";
    case Strategy::greedy_max_ee: return "greedy_max_ee";
    case Strategy::min_deflection: return "min_deflection";
    default: return "ideal";
  }
}

double relative_error(double analytic, double simulated) {
  if (simulated == 0.0) throw std::invalid_argument("relative_error: simulated value is 0");
  return std::abs(analytic - simulated) / simulated;
}

double TrialStats::ci95_halfwidth() const {
  const auto kept = trials - n_outliers_removed;
  if (kept <= 1) return 0.0;
  return 1.96 * std_ee / std::sqrt((double)kept);
}

namespace {

struct StepContext {
  RouteKind kind;
  const PointSet& gw;
  const PointSet& sats;
  const SphericalPoint& rx;
  const SystemParams& p;
};

/// Shared hop-by-hop loop for the two baselines. `pick` selects the next
/// relay among in-range candidates; the walk ends with the final
/// satellite-to-ground hop as soon as the receiver is reachable.
template <typename Pick>
RouteRealization walk_route(const StepContext& sc, const SphericalPoint& tx, Pick&& pick) {
  RouteRealization out;
  std::vector<SphericalPoint> chain{tx};
  std::vector<DeviceKind> kinds{DeviceKind::gateway};
  SphericalPoint cur = tx;
  bool on_ground = true;
  const std::int64_t guard = (std::int64_t)sc.gw.size() + (std::int64_t)sc.sats.size() + 2;
  bool reached = false;

  for (std::int64_t step = 0; step < guard; ++step) {
    if (!on_ground &&
        geometry::euclidean_distance(cur, sc.rx) <= sc.p.chan.lmax2_km * (1.0 + 1e-12)) {
      chain.push_back(sc.rx);
      kinds.push_back(DeviceKind::gateway);
      reached = true;
      break;
    }
    const bool next_is_sat = on_ground || sc.kind == RouteKind::isr;
    const PointSet& cands = next_is_sat ? sc.sats : sc.gw;
    const HopClass hop_class =
        on_ground ? HopClass::c1 : (next_is_sat ? HopClass::c3 : HopClass::c2);
    const double reach = sc.p.chan.lmax_km(hop_class);
    std::int64_t idx = -1;
    SphericalPoint next;
    if (!pick(cands, cur, hop_class, reach, idx, next)) break;
    chain.push_back(next);
    kinds.push_back(next_is_sat ? DeviceKind::satellite : DeviceKind::gateway);
    out.relay_indices.push_back({kinds.back(), (std::size_t)idx});
    out.relay_positions.push_back(next);
    cur = next;
    on_ground = !next_is_sat;
  }

  if (!reached) {
    out.feasible = false;
    out.hops.clear();
    return out;
  }
  out.feasible = true;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const bool a_ground = chain[i].radius_km <= sc.p.r_earth_km * (1.0 + 1e-9);
    const bool b_ground = chain[i + 1].radius_km <= sc.p.r_earth_km * (1.0 + 1e-9);
    energy::HopEE hop;
    hop.hop_class = a_ground ? HopClass::c1 : (b_ground ? HopClass::c2 : HopClass::c3);
    hop.theta = geometry::central_angle(chain[i], chain[i + 1]);
    hop.distance_km = geometry::euclidean_distance(chain[i], chain[i + 1]);
    hop.ee = energy::mean_hop_ee_unchecked(hop.theta, hop.hop_class, sc.p);
    if (hop.distance_km > sc.p.chan.lmax_km(hop.hop_class) * (1.0 + 1e-12)) out.feasible = false;
    out.hops.push_back(hop);
  }
  return out;
}

}  // namespace

RouteRealization greedy_max_ee_strategy(RouteKind kind, const PointSet& gw, const PointSet& sats,
                                        const SphericalPoint& tx, const SphericalPoint& rx,
                                        const SystemParams& p) {
  StepContext sc{kind, gw, sats, rx, p};
  return walk_route(sc, tx,
                    [&](const PointSet& cands, const SphericalPoint& cur, HopClass,
                        double reach, std::int64_t& idx, SphericalPoint& next) {
                      const double remaining = geometry::central_angle(cur, rx);
                      // The candidate is scored by the fading-averaged
                      // efficiency of its onward hop toward the receiver
                      // (down for satellites, up for gateways).
                      const HopClass onward =
                          cands.kind == DeviceKind::satellite ? HopClass::c2 : HopClass::c1;
                      double best_ee = -1.0;
                      for (std::size_t i = 0; i < cands.points.size(); ++i) {
                        const auto& c = cands.points[i];
                        const double d = geometry::euclidean_distance(cur, c);
                        if (d > reach * (1.0 + 1e-12) || d <= 1e-3) continue;
                        const double to_rx = geometry::central_angle(c, rx);
                        if (to_rx >= remaining) continue;
                        const double ee = energy::mean_hop_ee_unchecked(to_rx, onward, p);
                        if (ee > best_ee) {
                          best_ee = ee;
                          idx = (std::int64_t)i;
                          next = c;
                        }
                      }
                      return idx >= 0;
                    });
}

RouteRealization min_deflection_strategy(RouteKind kind, const PointSet& gw, const PointSet& sats,
                                         const SphericalPoint& tx, const SphericalPoint& rx,
                                         const SystemParams& p) {
  StepContext sc{kind, gw, sats, rx, p};
  return walk_route(sc, tx,
                    [&](const PointSet& cands, const SphericalPoint& cur, HopClass,
                        double reach, std::int64_t& idx, SphericalPoint& next) {
                      try {
                        auto [i, pos] = planner::min_deflection_insert(cands, cur, rx, reach);
                        idx = (std::int64_t)i;
                        next = pos;
                        return true;
                      } catch (const std::runtime_error&) {
                        return false;
                      }
                    });
}

namespace {

struct TrialOutcome {
  bool feasible = false;
  double route_ee = 0.0;       // fading-averaged rates
  double route_ee_inst = 0.0;  // per-draw rates
  int n_hops = 0;
  bool has_infinite_recip = false;
  // (class, 1/ee) per hop of a feasible trial, in hop order
  std::vector<std::pair<int, double>> recips;       // fading-averaged
  std::vector<std::pair<int, double>> recips_inst;  // per-draw, finite only
};

struct PlanBundle {
  bool feasible = false;
  planner::RoutePlan plan;
  std::vector<SphericalPoint> ideal_world;  // strategy 'ideal' uses positions directly
};

PlanBundle prepare_plan(const TrialConfig& cfg, const scaling::ScalingContext& ctx) {
  PlanBundle out;
  if (cfg.strategy == Strategy::greedy_max_ee || cfg.strategy == Strategy::min_deflection) {
    out.feasible = true;  // baselines plan nothing
    return out;
  }
  planner::SearchResult search;
  if (cfg.strategy == Strategy::ideal) {
    // Bound the ideal search by the repeated-relay hop limit so the upper
    // bound stays comparable to the device-aware strategies.
    const int cap = planner::max_hops(cfg.kind, cfg.params.theta_big, cfg.params, ctx);
    search =
        planner::solve_ideal(cfg.kind, cfg.params.theta_big, cfg.params, cfg.params.n_in, cap);
  } else {
    search = cfg.kind == RouteKind::str
                 ? planner::algorithm1_search(cfg.params.theta_big, cfg.params, ctx)
                 : planner::algorithm2_search(cfg.params.theta_big, cfg.params, ctx);
  }
  if (!search.feasible) return out;
  out.feasible = true;
  out.plan = planner::ideal_positions(search.decision);
  if (cfg.strategy == Strategy::ideal) {
    double chi = 0.0;
    for (std::size_t i = 0; i + 1 < out.plan.hop_classes.size(); ++i) {
      chi += out.plan.hop_angles[i];
      const bool sat = out.plan.hop_classes[i] != HopClass::c2;
      out.ideal_world.emplace_back(sat ? cfg.params.r_sat_km() : cfg.params.r_earth_km, chi, 0.0);
    }
  }
  return out;
}

RouteRealization ideal_realization(const PlanBundle& bundle, const SphericalPoint& tx,
                                   const SphericalPoint& rx, const SystemParams& p) {
  RouteRealization out;
  out.feasible = true;
  std::vector<SphericalPoint> chain{tx};
  chain.insert(chain.end(), bundle.ideal_world.begin(), bundle.ideal_world.end());
  chain.push_back(rx);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    energy::HopEE hop;
    hop.hop_class = bundle.plan.hop_classes[i];
    hop.theta = bundle.plan.hop_angles[i];
    hop.distance_km = geometry::euclidean_distance(chain[i], chain[i + 1]);
    hop.ee = energy::mean_hop_ee_unchecked(hop.theta, hop.hop_class, p);
    if (hop.distance_km > p.chan.lmax_km(hop.hop_class) * (1.0 + 1e-12)) out.feasible = false;
    out.hops.push_back(hop);
  }
  return out;
}

TrialOutcome run_one_trial(const TrialConfig& cfg, const PlanBundle& bundle,
                           const scaling::ScalingContext& ctx, std::uint64_t index) {
  TrialOutcome out;
  Rng rng = substream(cfg.seed, index);
  const SystemParams& p = cfg.params;
  const SphericalPoint tx(p.r_earth_km, 0.0, 0.0);
  const SphericalPoint rx(p.r_earth_km, p.theta_big, 0.0);

  RouteRealization real;
  if (cfg.strategy == Strategy::ideal) {
    if (!bundle.feasible) return out;
    real = ideal_realization(bundle, tx, rx, p);
  } else {
    // Gateways are drawn first so the satellite stream is identical for
    // STR and ISR runs of the same seed.
    const bool needs_gw = cfg.kind == RouteKind::str;
    PointSet gw = needs_gw ? geometry::sample_bpp((std::size_t)p.n_g, p.r_earth_km,
                                                  DeviceKind::gateway, rng)
                           : PointSet(p.r_earth_km, DeviceKind::gateway, {});
    PointSet sats =
        geometry::sample_bpp((std::size_t)p.n_s, p.r_sat_km(), DeviceKind::satellite, rng);
    switch (cfg.strategy) {
      case Strategy::proposed:
        if (!bundle.feasible) return out;
        real = planner::realize_route(bundle.plan, gw, sats, tx, rx, p);
        break;
      case Strategy::greedy_max_ee:
        real = greedy_max_ee_strategy(cfg.kind, gw, sats, tx, rx, p);
        break;
      default:
        real = min_deflection_strategy(cfg.kind, gw, sats, tx, rx, p);
        break;
    }
  }

  out.n_hops = (int)real.hops.size();
  if (!real.feasible) return out;

  out.feasible = true;
  double recip_sum = 0.0, recip_sum_inst = 0.0;
  bool dead_hop = false;
  for (auto& hop : real.hops) {
    // hop.ee carries the fading-averaged efficiency at the realized angle.
    out.recips.emplace_back((int)hop.hop_class, 1.0 / hop.ee);
    recip_sum += 1.0 / hop.ee;

    double fading;
    if (cfg.pin_fading_mean) {
      fading = hop.hop_class == HopClass::c3 ? channel::pointing_gain_mean(p.chan)
                                             : channel::sr_fading_mean(p.chan);
    } else {
      fading = hop.hop_class == HopClass::c3 ? channel::sample_pointing_gain(rng, p.chan)
                                             : channel::sample_sr_fading(rng, p.chan);
    }
    const double ee = energy::hop_ee_realized(hop.hop_class, hop.distance_km, fading, p);
    if (ee > 0.0) {
      out.recips_inst.emplace_back((int)hop.hop_class, 1.0 / ee);
      recip_sum_inst += 1.0 / ee;
    } else {
      out.has_infinite_recip = true;  // beam miss or zero fading
      dead_hop = true;
    }
  }
  out.route_ee = 1.0 / recip_sum;
  out.route_ee_inst = dead_hop ? 0.0 : 1.0 / recip_sum_inst;
  (void)ctx;
  return out;
}

}  // namespace

TrialStats run_trials(const TrialConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  cfg.params.validate();
  const scaling::ScalingContext ctx = scaling::make_context(cfg.params);
  const PlanBundle bundle = prepare_plan(cfg, ctx);

  std::vector<TrialOutcome> outcomes((std::size_t)cfg.trials);
  unsigned workers = cfg.workers > 0 ? (unsigned)cfg.workers
                                     : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<unsigned>(workers, (unsigned)cfg.trials);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < cfg.trials; ++i)
      outcomes[(std::size_t)i] = run_one_trial(cfg, bundle, ctx, (std::uint64_t)i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::int64_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::int64_t i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1))
          outcomes[(std::size_t)i] = run_one_trial(cfg, bundle, ctx, (std::uint64_t)i);
      });
    }
    for (auto& t : pool) t.join();
  }

  TrialStats stats;
  stats.trials = cfg.trials;

  // Two-pass 3-sigma filter over per-class reciprocal pools: a feasible
  // trial with any flagged hop (or an unbounded reciprocal) is dropped
  // from that estimator's efficiency average.
  struct FilteredMean {
    double mean = 0.0, std = 0.0;
    std::int64_t dropped = 0;
    std::array<double, 3> pool_mean{}, pool_sigma{};
    std::array<std::int64_t, 3> pool_count{}, pool_outliers{};
  };
  auto filtered = [&](auto&& recips_of, auto&& ee_of, auto&& infinite_of) {
    FilteredMean fm;
    std::array<double, 3> sum{}, sumsq{};
    for (const auto& o : outcomes) {
      if (!o.feasible) continue;
      for (const auto& [cls, r] : recips_of(o)) {
        sum[(std::size_t)cls] += r;
        sumsq[(std::size_t)cls] += r * r;
        ++fm.pool_count[(std::size_t)cls];
      }
    }
    for (int c = 0; c < 3; ++c) {
      if (fm.pool_count[c] > 0) {
        fm.pool_mean[c] = sum[c] / (double)fm.pool_count[c];
        const double var =
            std::max(0.0, sumsq[c] / (double)fm.pool_count[c] - fm.pool_mean[c] * fm.pool_mean[c]);
        fm.pool_sigma[c] = std::sqrt(var);
      }
    }
    double ee_sum = 0.0, ee_sumsq = 0.0;
    std::int64_t kept = 0;
    for (const auto& o : outcomes) {
      bool drop = false;
      if (o.feasible) {
        if (infinite_of(o)) drop = true;
        for (const auto& [cls, r] : recips_of(o)) {
          const auto c = (std::size_t)cls;
          if (fm.pool_sigma[c] > 0.0 && std::abs(r - fm.pool_mean[c]) > 3.0 * fm.pool_sigma[c]) {
            drop = true;
            ++fm.pool_outliers[c];
          }
        }
      }
      if (drop) {
        ++fm.dropped;
        continue;
      }
      const double ee = ee_of(o);
      ee_sum += ee;
      ee_sumsq += ee * ee;
      ++kept;
    }
    if (kept > 0) {
      fm.mean = ee_sum / (double)kept;
      fm.std = std::sqrt(std::max(0.0, ee_sumsq / (double)kept - fm.mean * fm.mean));
    }
    return fm;
  };

  const FilteredMean erg = filtered([](const TrialOutcome& o) -> const auto& { return o.recips; },
                                    [](const TrialOutcome& o) { return o.route_ee; },
                                    [](const TrialOutcome&) { return false; });
  const FilteredMean inst =
      filtered([](const TrialOutcome& o) -> const auto& { return o.recips_inst; },
               [](const TrialOutcome& o) { return o.route_ee_inst; },
               [](const TrialOutcome& o) { return o.has_infinite_recip; });

  std::int64_t hops_sum = 0;
  for (const auto& o : outcomes) {
    if (o.feasible) ++stats.n_feasible;
    hops_sum += o.n_hops;
  }
  stats.availability = (double)stats.n_feasible / (double)cfg.trials;
  stats.mean_hops = (double)hops_sum / (double)cfg.trials;
  stats.mean_ee = erg.mean;
  stats.std_ee = erg.std;
  stats.n_outliers_removed = erg.dropped;
  stats.mean_ee_inst = inst.mean;
  stats.std_ee_inst = inst.std;
  stats.n_outliers_removed_inst = inst.dropped;
  for (int c = 0; c < 3; ++c) {
    stats.per_hop[(std::size_t)c].samples = inst.pool_count[c];
    stats.per_hop[(std::size_t)c].outliers = inst.pool_outliers[c];
    stats.per_hop[(std::size_t)c].recip_mean = inst.pool_mean[c];
    stats.per_hop[(std::size_t)c].recip_std = inst.pool_sigma[c];
  }
  return stats;
}

}  // namespace leoroute::mc
