// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "leoroute/planner.hpp"

namespace leoroute::mc {

enum class Strategy { proposed, greedy_max_ee, min_deflection, ideal };

Strategy strategy_from_name(const std::string& name);
const char* strategy_name(Strategy s);

struct TrialConfig {
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  Strategy strategy = Strategy::proposed;
  planner::RouteKind kind = planner::RouteKind::isr;
  SystemParams params;
  int workers = 0;             // 0: hardware concurrency (capped at 8)
  bool pin_fading_mean = false;  // substitute mean fading on every hop
};

struct HopClassStats {
  std::int64_t samples = 0;
  std::int64_t outliers = 0;
  double recip_mean = 0.0;  // mean of 1/ee over finite samples
  double recip_std = 0.0;
};

struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t n_feasible = 0;
  double availability = 0.0;
  double mean_hops = 0.0;

  // Primary estimator: per-hop rates are the fading-averaged achievable
  // rates at the realized distances (the route's randomness is the device
  // topology). Unavailable routes count as 0.
  std::int64_t n_outliers_removed = 0;  // trials dropped by the 3-sigma filter
  double mean_ee = 0.0;
  double std_ee = 0.0;

  // Diagnostic estimator: one small-scale fading draw per hop, the
  // instantaneous Shannon rate, and the same 3-sigma reciprocal filter
  // (this is the estimator whose reciprocals have the heavy tail the
  // filter exists for).
  std::int64_t n_outliers_removed_inst = 0;
  double mean_ee_inst = 0.0;
  double std_ee_inst = 0.0;

  std::array<HopClassStats, 3> per_hop;  // instantaneous reciprocals, by HopClass

  double ci95_halfwidth() const;
};

/// Seeded Monte Carlo run: fresh constellation draws per trial, strategy
/// execution, per-hop fading, route efficiency (0 when unavailable), then
/// the per-class 3-sigma reciprocal-efficiency outlier filter, applied
/// independently to each estimator's reciprocal pools. Trials run on
/// per-index substreams and aggregate in index order, so results are
/// bit-identical for any worker count.
TrialStats run_trials(const TrialConfig& cfg);

/// Greedy baseline: hop-by-hop, among in-range devices that strictly
/// reduce the remaining central angle to the receiver, take the one with
/// the highest fading-averaged single-hop efficiency.
planner::RouteRealization greedy_max_ee_strategy(planner::RouteKind kind,
                                                 const geometry::PointSet& gw,
                                                 const geometry::PointSet& sats,
                                                 const geometry::SphericalPoint& tx,
                                                 const geometry::SphericalPoint& rx,
                                                 const SystemParams& p);

/// Deflection baseline: hop-by-hop minimum angular deviation from the
/// great circle toward the receiver.
planner::RouteRealization min_deflection_strategy(planner::RouteKind kind,
                                                  const geometry::PointSet& gw,
                                                  const geometry::PointSet& sats,
                                                  const geometry::SphericalPoint& tx,
                                                  const geometry::SphericalPoint& rx,
                                                  const SystemParams& p);

/// |analytic - simulated| / simulated. Throws std::invalid_argument when
/// the simulated value is 0.
double relative_error(double analytic, double simulated);

}  // namespace leoroute::mc
