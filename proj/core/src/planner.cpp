// SPDX-License-Identifier: Apache-2.0
#include "leoroute/planner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace leoroute::planner {

namespace {

using channel::HopClass;
using geometry::DeviceKind;
using geometry::SphericalPoint;

constexpr double kPi = std::numbers::pi;
constexpr int kHopCap = 256;       // hard stop for the hop-count loops
constexpr int kIdealPatience = 6;  // ideal search: stop after this many non-improving N

// Preset hop-count ceilings for the exhaustive searches. Together with
// the repeated-relay inequalities they bound the loops; the values keep
// one full search within ~10^4 objective evaluations at the default
// inner resolution (STR costs N_in per hop count, ISR costs N_in^2).
constexpr int kPresetMaxHopsStr = 100;
constexpr int kPresetMaxHopsIsr = 16;

struct MaxAngles {
  double th1, th2, th3;
};

MaxAngles max_angles(const SystemParams& p) {
  return {energy::max_central_angle(HopClass::c1, p), energy::max_central_angle(HopClass::c2, p),
          energy::max_central_angle(HopClass::c3, p)};
}

/// Central angle after inflating the ground-satellite chord of theta by
/// `factor`; clamps to pi when the inflated chord is unrealizable (such
/// candidates then fail the margin filter).
double inflated_gs_angle(double theta, double factor, const SystemParams& p) {
  const double l = factor * geometry::chord_ground_sat(theta, p.r_earth_km, p.r_sat_km());
  if (l >= p.r_earth_km + p.r_sat_km()) return kPi;
  return geometry::angle_ground_sat(std::max(l, p.h_s_km), p.r_earth_km, p.r_sat_km());
}

double inflated_ss_angle(double theta, double factor, const SystemParams& p) {
  const double arg = factor * std::sin(0.5 * theta);
  if (arg >= 1.0) return kPi;
  return 2.0 * std::asin(arg);
}

double recip(double ee) { return std::isinf(ee) ? 0.0 : 1.0 / ee; }

/// Warm the alpha cache for a batch of angles in parallel; values are
/// pure functions of (theta, ctx) so the schedule cannot affect results.
template <typename F>
void prewarm(const std::vector<double>& thetas, F&& eval) {
  if (thetas.size() < 4) {
    for (double t : thetas) eval(t);
    return;
  }
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < thetas.size(); i = next.fetch_add(1))
        eval(thetas[i]);
    });
  }
  for (auto& t : pool) t.join();
}

struct InnerBest {
  bool found = false;
  double ee = 0.0;
  double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;
  double tilde1_mid = 0.0, tilde2_mid = 0.0, tilde3 = 0.0;
};

}  // namespace

void DecisionVars::validate() const {
  if (n_hops < 2) throw std::invalid_argument("DecisionVars: n_hops must be >= 2");
  auto angle_ok = [](double t) { return t >= 0.0 && t <= kPi + 1e-12; };
  if (!angle_ok(theta1) || !angle_ok(theta2) || !angle_ok(theta3))
    throw std::invalid_argument("DecisionVars: hop angles outside [0, pi]");
  if (kind == RouteKind::str) {
    if (n_hops % 2 != 0) throw std::invalid_argument("DecisionVars: STR hop count must be even");
    if (std::abs(n_hops / 2.0 * (theta1 + theta2) - theta_big) > 1e-9)
      throw std::invalid_argument("DecisionVars: STR angle sum violates the span constraint");
  } else {
    const double span = theta1 + theta2 + (n_hops - 2) * theta3;
    if (std::abs(span - theta_big) > 1e-9)
      throw std::invalid_argument("DecisionVars: ISR angle sum violates the span constraint");
  }
}

RoutePlan ideal_positions(const DecisionVars& d) {
  d.validate();
  RoutePlan plan;
  plan.decision = d;
  // Hop angles are stored verbatim (the equal-angle structure is exact by
  // construction); world positions are filled against concrete radii later.
  if (d.kind == RouteKind::str) {
    for (int hop = 1; hop <= d.n_hops; ++hop) {
      plan.hop_classes.push_back(hop % 2 == 1 ? HopClass::c1 : HopClass::c2);
      plan.hop_angles.push_back(hop % 2 == 1 ? d.theta1 : d.theta2);
    }
  } else {
    for (int hop = 1; hop <= d.n_hops; ++hop) {
      if (hop == 1) {
        plan.hop_classes.push_back(HopClass::c1);
        plan.hop_angles.push_back(d.theta1);
      } else if (hop == d.n_hops) {
        plan.hop_classes.push_back(HopClass::c2);
        plan.hop_angles.push_back(d.theta2);
      } else {
        plan.hop_classes.push_back(HopClass::c3);
        plan.hop_angles.push_back(d.theta3);
      }
    }
  }
  return plan;
}

namespace {

/// Fill world-space ideal relay positions for a plan. Relay after hop i is
/// a satellite when hop i ends on a satellite (class c1/c3), a gateway
/// when it ends on the ground (class c2).
void fill_positions(RoutePlan& plan, const SystemParams& p) {
  plan.ideal_positions.clear();
  double chi = 0.0;
  for (std::size_t i = 0; i + 1 < plan.hop_classes.size(); ++i) {
    chi += plan.hop_angles[i];
    const bool ends_on_sat = plan.hop_classes[i] != HopClass::c2;
    plan.ideal_positions.emplace_back(ends_on_sat ? p.r_sat_km() : p.r_earth_km, chi, 0.0);
  }
}

}  // namespace

SearchResult solve_ideal(RouteKind kind, double theta_big, const SystemParams& p, int grid,
                         int n_cap) {
  if (grid < 2) throw std::invalid_argument("solve_ideal: grid must be >= 2");
  SearchResult best;
  best.decision.kind = kind;
  best.decision.theta_big = theta_big;
  MaxAngles lim{};
  try {
    lim = max_angles(p);
  } catch (const std::domain_error&) {
    return best;  // no reachable angle at all
  }

  int since_improved = 0;
  const int step = kind == RouteKind::str ? 2 : 1;
  const int hop_cap = n_cap > 0 ? n_cap : kHopCap;
  for (int n = 2; n <= hop_cap; n += step) {
    bool improved = false;
    if (kind == RouteKind::str) {
      const double bound = std::min(lim.th1, 2.0 * theta_big / n);
      for (int k = 0; k <= grid; ++k) {
        const double th1 = bound * k / grid;
        const double th2 = 2.0 * theta_big / n - th1;
        if (th2 < 0.0 || th2 > lim.th2) continue;
        const double ee =
            1.0 / (n / 2.0 * recip(energy::mean_hop_ee_unchecked(th1, HopClass::c1, p)) +
                   n / 2.0 * recip(energy::mean_hop_ee_unchecked(th2, HopClass::c2, p)));
        if (ee > best.ee) {
          best = {true, {kind, n, th1, th2, 0.0, theta_big}, ee, n};
          improved = true;
        }
      }
    } else {
      const double bound1 = std::min(lim.th1, theta_big);
      for (int k1 = 0; k1 <= grid; ++k1) {
        const double th1 = bound1 * k1 / grid;
        if (n == 2) {
          const double th2 = theta_big - th1;
          if (th2 < 0.0 || th2 > lim.th2) continue;
          const double ee =
              1.0 / (recip(energy::mean_hop_ee_unchecked(th1, HopClass::c1, p)) +
                     recip(energy::mean_hop_ee_unchecked(th2, HopClass::c2, p)));
          if (ee > best.ee) {
            best = {true, {kind, n, th1, th2, 0.0, theta_big}, ee, n};
            improved = true;
          }
          continue;
        }
        const double bound2 = std::min(lim.th2, theta_big - th1);
        const int k2_max = bound2 > 0.0 ? grid : 0;
        for (int k2 = 0; k2 <= k2_max; ++k2) {
          const double th2 = bound2 * k2 / grid;
          const double th3 = (theta_big - th1 - th2) / (n - 2);
          if (th3 < 0.0 || th3 > lim.th3) continue;
          const double ee =
              1.0 / (recip(energy::mean_hop_ee_unchecked(th1, HopClass::c1, p)) +
                     recip(energy::mean_hop_ee_unchecked(th2, HopClass::c2, p)) +
                     (n - 2) * recip(energy::mean_hop_ee_unchecked(th3, HopClass::c3, p)));
          if (ee > best.ee) {
            best = {true, {kind, n, th1, th2, th3, theta_big}, ee, n};
            improved = true;
          }
        }
      }
    }
    if (best.feasible) since_improved = improved ? 0 : since_improved + 1;
    if (n_cap == 0 && since_improved >= kIdealPatience) break;
  }
  if (best.feasible) best.n_max = best.decision.n_hops;
  return best;
}

namespace {

InnerBest str_inner_sweep(int n, double theta_big, const SystemParams& p,
                          const scaling::ScalingContext& ctx, const MaxAngles& lim) {
  InnerBest out;
  const double bound = std::min(lim.th1, 2.0 * theta_big / n);
  const double margin1 = (1.0 - p.eps) * lim.th1;
  const double margin2 = (1.0 - p.eps) * lim.th2;

  std::vector<double> grid;
  for (int k = 0; k <= p.n_in; ++k) grid.push_back(bound * k / p.n_in);
  std::vector<double> warm;
  for (double th1 : grid) {
    warm.push_back(th1);
    warm.push_back(2.0 * theta_big / n - th1);
  }
  prewarm(warm, [&](double t) {
    if (t >= 0.0 && t <= kPi) {
      scaling::alpha1(t, ctx);
      scaling::alpha2(t, ctx);
    }
  });

  for (double th1 : grid) {
    const double th2 = 2.0 * theta_big / n - th1;
    if (th2 < 0.0 || th2 > kPi) continue;
    const double a1_1 = scaling::alpha1(th1, ctx), a2_1 = scaling::alpha2(th1, ctx);
    const double a1_2 = scaling::alpha1(th2, ctx), a2_2 = scaling::alpha2(th2, ctx);
    const double t11 = inflated_gs_angle(th1, a1_1, p);  // first/last-hop inflation
    const double t21 = inflated_gs_angle(th2, a1_2, p);
    const double t12 = inflated_gs_angle(th1, a2_1, p);  // middle-hop inflation
    const double t22 = inflated_gs_angle(th2, a2_2, p);
    if (!(t12 <= margin1 && t22 <= margin2)) continue;
    const double ee =
        1.0 / (recip(energy::mean_hop_ee_unchecked(t11, HopClass::c1, p)) +
               recip(energy::mean_hop_ee_unchecked(t21, HopClass::c2, p)) +
               (n - 2) / 2.0 * recip(energy::mean_hop_ee_unchecked(t12, HopClass::c1, p)) +
               (n - 2) / 2.0 * recip(energy::mean_hop_ee_unchecked(t22, HopClass::c2, p)));
    if (!out.found || ee > out.ee) {
      out = {true, ee, th1, th2, 0.0, t12, t22, 0.0};
    }
  }
  return out;
}

InnerBest isr_inner_sweep(int n, double theta_big, const SystemParams& p,
                          const scaling::ScalingContext& ctx, const MaxAngles& lim) {
  InnerBest out;
  const double margin1 = (1.0 - p.eps) * lim.th1;
  const double margin2 = (1.0 - p.eps) * lim.th2;
  const double margin3 = (1.0 - p.eps) * lim.th3;
  const double bound1 = std::min(lim.th1, theta_big);

  std::vector<double> grid1;
  for (int k = 0; k <= p.n_in; ++k) grid1.push_back(bound1 * k / p.n_in);

  if (n == 2) {
    for (double th1 : grid1) {
      const double th2 = theta_big - th1;
      if (th2 < 0.0 || th2 > kPi) continue;
      const double t1 = inflated_gs_angle(th1, scaling::alpha1(th1, ctx), p);
      const double t2 = inflated_gs_angle(th2, scaling::alpha1(th2, ctx), p);
      if (!(t1 <= margin1 && t2 <= margin2)) continue;
      const double ee = 1.0 / (recip(energy::mean_hop_ee_unchecked(t1, HopClass::c1, p)) +
                               recip(energy::mean_hop_ee_unchecked(t2, HopClass::c2, p)));
      if (!out.found || ee > out.ee) out = {true, ee, th1, th2, 0.0, 0.0, 0.0, 0.0};
    }
    return out;
  }

  // One pass to collect the angles this N visits, so the expensive
  // quadratures run in parallel before the serial argmax scan.
  std::vector<double> warm;
  for (double th1 : grid1) {
    warm.push_back(th1);
    const double bound2 = std::min(lim.th2, theta_big - th1);
    for (int k2 = 0; k2 <= (bound2 > 0.0 ? p.n_in : 0); ++k2) {
      const double th2 = bound2 * k2 / p.n_in;
      warm.push_back(th2);
      const double th3 = (theta_big - th1 - th2) / (n - 2);
      if (th3 > 1e-12) warm.push_back(-th3);  // negative marks a sat-sat angle
    }
  }
  prewarm(warm, [&](double t) {
    if (t >= 0.0 && t <= kPi)
      scaling::alpha1(t, ctx);
    else if (t < 0.0 && -t <= kPi)
      scaling::alpha3(-t, ctx);
  });

  for (double th1 : grid1) {
    const double bound2 = std::min(lim.th2, theta_big - th1);
    const int k2_max = bound2 > 0.0 ? p.n_in : 0;
    for (int k2 = 0; k2 <= k2_max; ++k2) {
      const double th2 = bound2 * k2 / p.n_in;
      const double th3 = (theta_big - th1 - th2) / (n - 2);
      if (th3 <= 1e-12 || th3 > kPi) continue;
      const double t1 = inflated_gs_angle(th1, scaling::alpha1(th1, ctx), p);
      const double t2 = inflated_gs_angle(th2, scaling::alpha1(th2, ctx), p);
      const double t3 = inflated_ss_angle(th3, scaling::alpha3(th3, ctx), p);
      if (!(t1 <= margin1 && t2 <= margin2 && t3 <= margin3)) continue;
      const double ee = 1.0 / (recip(energy::mean_hop_ee_unchecked(t1, HopClass::c1, p)) +
                               recip(energy::mean_hop_ee_unchecked(t2, HopClass::c2, p)) +
                               (n - 2) * recip(energy::mean_hop_ee_unchecked(t3, HopClass::c3, p)));
      if (!out.found || ee > out.ee) out = {true, ee, th1, th2, th3, 0.0, 0.0, t3};
    }
  }
  return out;
}

bool repeated_relay_bound_holds(RouteKind kind, const InnerBest& ib, const SystemParams& p,
                   const scaling::ScalingContext& ctx) {
  if (kind == RouteKind::str) {
    return ib.tilde1_mid < 2.0 * ib.theta1 + ib.theta2 &&
           ib.tilde2_mid < ib.theta1 + 2.0 * ib.theta2;
  }
  if (ib.theta3 <= 0.0) return true;  // bent pipe: no adjacent relays to merge
  // ISR routes have no gateway relays, so the end-hop inflation here uses
  // the satellite-side factor (matching the inner objective's usage).
  const double t1 = inflated_gs_angle(ib.theta1, scaling::alpha1(ib.theta1, ctx), p);
  const double t2 = inflated_gs_angle(ib.theta2, scaling::alpha1(ib.theta2, ctx), p);
  return t1 < ib.theta1 + ib.theta3 && t2 < ib.theta2 + ib.theta3 && ib.tilde3 < 2.0 * ib.theta3;
}

SearchResult exhaustive_search(RouteKind kind, double theta_big, const SystemParams& p,
                               const scaling::ScalingContext& ctx) {
  SearchResult result;
  result.decision.kind = kind;
  result.decision.theta_big = theta_big;
  MaxAngles lim{};
  try {
    lim = max_angles(p);
  } catch (const std::domain_error&) {
    return result;
  }
  const int step = kind == RouteKind::str ? 2 : 1;
  const int preset = kind == RouteKind::str ? kPresetMaxHopsStr : kPresetMaxHopsIsr;
  for (int n = 2; n <= preset; n += step) {
    const InnerBest ib = kind == RouteKind::str ? str_inner_sweep(n, theta_big, p, ctx, lim)
                                                : isr_inner_sweep(n, theta_big, p, ctx, lim);
    if (!ib.found) continue;  // small hop counts can be out of reach entirely
    if (!repeated_relay_bound_holds(kind, ib, p, ctx)) break;
    result.n_max = n;
    if (!result.feasible || ib.ee > result.ee) {
      result.feasible = true;
      result.ee = ib.ee;
      result.decision = {kind, n, ib.theta1, ib.theta2, ib.theta3, theta_big};
    }
  }
  return result;
}

}  // namespace

SearchResult algorithm1_search(double theta_big, const SystemParams& p,
                               const scaling::ScalingContext& ctx) {
  return exhaustive_search(RouteKind::str, theta_big, p, ctx);
}

SearchResult algorithm2_search(double theta_big, const SystemParams& p,
                               const scaling::ScalingContext& ctx) {
  return exhaustive_search(RouteKind::isr, theta_big, p, ctx);
}

int max_hops(RouteKind kind, double theta_big, const SystemParams& p,
             const scaling::ScalingContext& ctx) {
  return exhaustive_search(kind, theta_big, p, ctx).n_max;
}

std::pair<std::size_t, SphericalPoint> min_deflection_insert(const geometry::PointSet& candidates,
                                                             const SphericalPoint& from,
                                                             const SphericalPoint& to,
                                                             double lmax_km) {
  auto unit = [](const SphericalPoint& p, double out[3]) {
    out[0] = std::sin(p.polar) * std::cos(p.azimuth);
    out[1] = std::sin(p.polar) * std::sin(p.azimuth);
    out[2] = std::cos(p.polar);
  };
  double u[3], v[3];
  unit(from, u);
  unit(to, v);
  auto tangent = [&](const double dir[3], double out[3]) {
    const double d = dir[0] * u[0] + dir[1] * u[1] + dir[2] * u[2];
    for (int i = 0; i < 3; ++i) out[i] = dir[i] - d * u[i];
    return std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
  };
  double tv[3];
  const double tv_norm = tangent(v, tv);

  bool found = false;
  std::size_t best_idx = 0;
  double best_dev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.points.size(); ++i) {
    const auto& c = candidates.points[i];
    const double dist = geometry::euclidean_distance(from, c);
    // The 1e-3 km floor keeps `from` itself out of the candidate set
    // (trig roundoff puts the self-distance near 1e-4 km, not 0).
    if (dist > lmax_km * (1.0 + 1e-12) || dist <= 1e-3) continue;
    double cu[3], tc[3];
    unit(c, cu);
    const double tc_norm = tangent(cu, tc);
    double dev = 0.0;
    if (tc_norm > 1e-12 && tv_norm > 1e-12) {
      const double cosd =
          (tc[0] * tv[0] + tc[1] * tv[1] + tc[2] * tv[2]) / (tc_norm * tv_norm);
      dev = std::acos(std::clamp(cosd, -1.0, 1.0));
    }
    if (dev < best_dev) {
      best_dev = dev;
      best_idx = i;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("min_deflection_insert: no candidate in range");
  return {best_idx, candidates.points[best_idx]};
}

namespace {

struct ChainNode {
  DeviceKind kind;
  std::size_t index;  // index in its set; npos for tx/rx endpoints
  SphericalPoint pos;
  static constexpr std::size_t kEndpoint = static_cast<std::size_t>(-1);
};

HopClass classify(DeviceKind a_kind, double a_radius, DeviceKind b_kind, double b_radius,
                  double r_earth) {
  const bool a_ground = a_radius <= r_earth * (1.0 + 1e-9);
  const bool b_ground = b_radius <= r_earth * (1.0 + 1e-9);
  (void)a_kind;
  (void)b_kind;
  if (a_ground && !b_ground) return HopClass::c1;
  if (!a_ground && b_ground) return HopClass::c2;
  if (!a_ground && !b_ground) return HopClass::c3;
  throw std::logic_error("classify: ground-to-ground hop in a route chain");
}

void collapse_consecutive(std::vector<ChainNode>& chain) {
  std::vector<ChainNode> out;
  for (const auto& node : chain) {
    if (!out.empty() && out.back().kind == node.kind && out.back().index == node.index &&
        node.index != ChainNode::kEndpoint) {
      continue;
    }
    out.push_back(node);
  }
  chain = std::move(out);
}

RouteRealization finish_realization(std::vector<ChainNode> chain, const SystemParams& p) {
  RouteRealization out;
  out.feasible = true;
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    out.relay_indices.push_back({chain[i].kind, chain[i].index});
    out.relay_positions.push_back(chain[i].pos);
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto& a = chain[i];
    const auto& b = chain[i + 1];
    const HopClass c = classify(a.kind, a.pos.radius_km, b.kind, b.pos.radius_km, p.r_earth_km);
    energy::HopEE hop;
    hop.hop_class = c;
    hop.theta = geometry::central_angle(a.pos, b.pos);
    hop.distance_km = geometry::euclidean_distance(a.pos, b.pos);
    hop.ee = energy::mean_hop_ee_unchecked(hop.theta, c, p);
    if (hop.distance_km > p.chan.lmax_km(c) * (1.0 + 1e-12)) out.feasible = false;
    out.hops.push_back(hop);
  }
  return out;
}

}  // namespace

RouteRealization realize_route(const RoutePlan& plan_in, const geometry::PointSet& gw,
                               const geometry::PointSet& sats, const SphericalPoint& tx,
                               const SphericalPoint& rx, const SystemParams& p) {
  RoutePlan plan = plan_in;
  if (plan.ideal_positions.empty()) fill_positions(plan, p);
  const geometry::GreatCircleFrame frame(tx, rx);

  std::vector<ChainNode> chain;
  chain.push_back({DeviceKind::gateway, ChainNode::kEndpoint, tx});
  for (const auto& ideal : plan.ideal_positions) {
    const SphericalPoint world = frame.to_world(ideal.radius_km, ideal.polar);
    const bool is_sat = ideal.radius_km > p.r_earth_km * (1.0 + 1e-9);
    const auto& set = is_sat ? sats : gw;
    if (set.points.empty()) throw std::invalid_argument("realize_route: empty point set");
    auto [idx, pos] = geometry::nearest_point(set, world);
    chain.push_back({is_sat ? DeviceKind::satellite : DeviceKind::gateway, idx, pos});
  }
  chain.push_back({DeviceKind::gateway, ChainNode::kEndpoint, rx});
  collapse_consecutive(chain);

  // Repair: insert relays into over-length hops by minimum deviation
  // toward the hop target. ISR adds a single satellite; STR adds a relay
  // pair so the up/down alternation survives (the second insertion
  // re-anchors from the first inserted relay). A fresh insertion's far
  // segment can itself be over-length, so passes run to a fixpoint.
  const bool is_str = plan.decision.kind == RouteKind::str;
  auto failure = RouteRealization::Failure::none;
  for (int pass = 0; pass < 8 && failure == RouteRealization::Failure::none; ++pass) {
    bool inserted = false;
    std::vector<ChainNode> repaired;
    repaired.push_back(chain.front());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const ChainNode& a = chain[i];
      const ChainNode& b = chain[i + 1];
      const HopClass c = classify(a.kind, a.pos.radius_km, b.kind, b.pos.radius_km, p.r_earth_km);
      const double dist = geometry::euclidean_distance(a.pos, b.pos);
      if (dist <= p.chan.lmax_km(c) * (1.0 + 1e-12)) {
        repaired.push_back(b);
        continue;
      }
      try {
        if (!is_str) {
          const double reach = c == HopClass::c1 ? p.chan.lmax1_km : p.chan.lmax3_km;
          auto [si, sp] = min_deflection_insert(sats, a.pos, b.pos, reach);
          // Progress guard: a relay that fails to shorten the remainder
          // would recur forever.
          if (geometry::euclidean_distance(sp, b.pos) >= dist)
            failure = RouteRealization::Failure::no_progress;
          else
            repaired.push_back({DeviceKind::satellite, si, sp});
        } else if (c == HopClass::c1) {
          auto [si, sp] = min_deflection_insert(sats, a.pos, b.pos, p.chan.lmax1_km);
          auto [gi, gp] = min_deflection_insert(gw, sp, b.pos, p.chan.lmax2_km);
          if (geometry::euclidean_distance(gp, b.pos) >= dist) {
            failure = RouteRealization::Failure::no_progress;
          } else {
            repaired.push_back({DeviceKind::satellite, si, sp});
            repaired.push_back({DeviceKind::gateway, gi, gp});
          }
        } else {
          auto [gi, gp] = min_deflection_insert(gw, a.pos, b.pos, p.chan.lmax2_km);
          auto [si, sp] = min_deflection_insert(sats, gp, b.pos, p.chan.lmax1_km);
          if (geometry::euclidean_distance(sp, b.pos) >= dist) {
            failure = RouteRealization::Failure::no_progress;
          } else {
            repaired.push_back({DeviceKind::gateway, gi, gp});
            repaired.push_back({DeviceKind::satellite, si, sp});
          }
        }
        if (failure == RouteRealization::Failure::none) inserted = true;
      } catch (const std::runtime_error&) {
        failure = RouteRealization::Failure::no_candidate;
      }
      repaired.push_back(b);
    }
    collapse_consecutive(repaired);
    chain = std::move(repaired);
    if (!inserted) break;
  }

  RouteRealization out = finish_realization(std::move(chain), p);
  if (failure != RouteRealization::Failure::none) out.feasible = false;
  out.failure = failure;
  if (out.failure == RouteRealization::Failure::none && !out.feasible)
    out.failure = RouteRealization::Failure::unresolved;
  return out;
}

RouteRealization algorithm3_select(RouteKind kind, const geometry::PointSet& gw,
                                   const geometry::PointSet& sats, const SphericalPoint& tx,
                                   const SphericalPoint& rx, const SystemParams& p,
                                   const scaling::ScalingContext& ctx) {
  if (sats.points.empty() || (kind == RouteKind::str && gw.points.empty()))
    throw std::invalid_argument("algorithm3_select: empty point set");
  const double theta_big = geometry::central_angle(tx, rx);
  const SearchResult search = kind == RouteKind::str ? algorithm1_search(theta_big, p, ctx)
                                                     : algorithm2_search(theta_big, p, ctx);
  if (!search.feasible) {
    RouteRealization out;
    out.feasible = false;
    out.failure = RouteRealization::Failure::plan_infeasible;
    return out;
  }
  RoutePlan plan = ideal_positions(search.decision);
  fill_positions(plan, p);
  return realize_route(plan, gw, sats, tx, rx, p);
}

}  // namespace leoroute::planner
