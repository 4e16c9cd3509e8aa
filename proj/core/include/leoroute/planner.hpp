// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "leoroute/energy.hpp"
#include "leoroute/geometry.hpp"
#include "leoroute/params.hpp"
#include "leoroute/scaling.hpp"

namespace leoroute::planner {

enum class RouteKind { str, isr };

/// A routing strategy in decision-variable form. STR splits the total
/// central angle into alternating odd/even hop angles; ISR into first,
/// last, and (n_hops-2) equal middle angles.
struct DecisionVars {
  RouteKind kind = RouteKind::str;
  int n_hops = 2;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;  // ISR middle-hop angle; unused for STR and n_hops == 2
  double theta_big = 0.0;

  /// Checks hop-count parity/minimum and the angle-sum constraint
  /// (1e-9 tolerance). Throws std::invalid_argument.
  void validate() const;
};

/// Ideal relay chain for a decision: alternating satellite/gateway radii
/// for STR, all-satellite for ISR, azimuths all zero (positions live on
/// the transmitter-receiver great circle).
struct RoutePlan {
  DecisionVars decision;
  std::vector<geometry::SphericalPoint> ideal_positions;
  std::vector<double> hop_angles;                 // per hop, theta1/theta2/theta3 verbatim
  std::vector<channel::HopClass> hop_classes;
};

/// Search outcome. `feasible == false` means no decision satisfied the
/// margin-filtered feasibility constraints; ee is then 0.
struct SearchResult {
  bool feasible = false;
  DecisionVars decision;
  double ee = 0.0;     // objective value, bits per joule
  int n_max = 2;       // loop bound implied by the repeated-relay inequalities
};

/// Relay chain realized on sampled device sets.
struct RouteRealization {
  struct RelayRef {
    geometry::DeviceKind kind;
    std::size_t index;
  };
  enum class Failure { none, plan_infeasible, no_candidate, no_progress, unresolved };
  std::vector<RelayRef> relay_indices;
  std::vector<geometry::SphericalPoint> relay_positions;
  std::vector<energy::HopEE> hops;  // ee holds the fading-averaged value
  bool feasible = false;
  Failure failure = Failure::none;
};

/// Ideal relay positions per the decision (transmitter at polar 0,
/// receiver at polar theta_big, azimuth 0 frame).
RoutePlan ideal_positions(const DecisionVars& decision);

/// Ideal-scenario optimizer: exhaustive search over hop counts and angle
/// grids with relays assumed available exactly at ideal positions
/// (no distance inflation, no link margin). Upper-bounds every realizable
/// strategy. `grid` is the per-angle grid resolution (>= 2). `n_cap`
/// bounds the hop count (pass the repeated-relay bound to compare against
/// device-limited searches); 0 stops once the objective stalls.
SearchResult solve_ideal(RouteKind kind, double theta_big, const SystemParams& p, int grid,
                         int n_cap = 0);

/// Exhaustive search for {N*, theta1*} in STR: inner sweeps of theta1 with
/// theta2 = 2*Theta/N - theta1, distance inflation through the scaling
/// factors, (1-eps) margin feasibility filter, hop count stepping by 2 up
/// to the repeated-relay bound.
SearchResult algorithm1_search(double theta_big, const SystemParams& p,
                               const scaling::ScalingContext& ctx);

/// Exhaustive search for {N*, theta1*, theta2*} in ISR (triple loop,
/// theta3 = (Theta - theta1 - theta2)/(N-2), hop count stepping by 1).
SearchResult algorithm2_search(double theta_big, const SystemParams& p,
                               const scaling::ScalingContext& ctx);

/// Largest hop count whose inner-loop optimum satisfies the repeated-relay
/// inequalities (necessary, not sufficient). Returns at least 2.
int max_hops(RouteKind kind, double theta_big, const SystemParams& p,
             const scaling::ScalingContext& ctx);

/// Among candidates within the transmitter's class range, the one
/// deviating least in angle from the from->to great circle; ties by
/// index. Throws std::runtime_error when no candidate is in range.
std::pair<std::size_t, geometry::SphericalPoint> min_deflection_insert(
    const geometry::PointSet& candidates, const geometry::SphericalPoint& from,
    const geometry::SphericalPoint& to, double lmax_km);

/// Full relay subset selection: search, ideal positions, nearest actual
/// devices, and per-hop repair by minimum-deviation insertion. Infeasible
/// hops that cannot be repaired leave feasible == false (route scores 0).
RouteRealization algorithm3_select(RouteKind kind, const geometry::PointSet& gw,
                                   const geometry::PointSet& sats,
                                   const geometry::SphericalPoint& tx,
                                   const geometry::SphericalPoint& rx, const SystemParams& p,
                                   const scaling::ScalingContext& ctx);

/// algorithm3 steps (2)-(4) for an externally supplied decision (the
/// searches depend only on parameters, so trial loops hoist them).
RouteRealization realize_route(const RoutePlan& plan, const geometry::PointSet& gw,
                               const geometry::PointSet& sats,
                               const geometry::SphericalPoint& tx,
                               const geometry::SphericalPoint& rx, const SystemParams& p);

}  // namespace leoroute::planner
