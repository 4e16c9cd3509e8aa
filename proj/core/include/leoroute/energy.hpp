// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "leoroute/channel.hpp"
#include "leoroute/params.hpp"

namespace leoroute::energy {

/// One hop of a realized or planned route.
struct HopEE {
  channel::HopClass hop_class = channel::HopClass::c1;
  double theta = 0.0;        // central angle, rad
  double distance_km = 0.0;  // chord consistent with theta for the class
  double ee = 0.0;           // bits per joule; beta-weighted on satellite-transmit hops
};

/// Energy efficiency of a single hop at the given distance and small-scale
/// fading draw, bits per joule. Satellite-transmit hops (c2, c3) carry the
/// 1/beta price weighting.
double hop_ee_realized(channel::HopClass c, double l_km, double fading, const SystemParams& p);

/// Fading-averaged hop efficiency at central angle theta: the realized
/// formula with the mean fading substituted inside the log (2*b0 + omega
/// for c1/c2, the pointing mean for c3). No range check; theta in [0, pi].
double mean_hop_ee_unchecked(double theta, channel::HopClass c, const SystemParams& p);

/// As mean_hop_ee_unchecked, but rejects theta beyond the class's maximum
/// central angle (derived from the class lmax). Throws std::domain_error.
double avg_hop_ee(double theta, channel::HopClass c, const SystemParams& p);

/// Largest central angle the class can bridge given its lmax. Throws
/// std::domain_error when no angle is reachable (lmax below the radial
/// ground-satellite gap).
double max_central_angle(channel::HopClass c, const SystemParams& p);

/// Route efficiency: inverse sum of per-hop reciprocals. A route with any
/// zero-efficiency hop is unavailable and scores 0. Throws
/// std::invalid_argument on an empty list.
double route_ee(std::span<const HopEE> hops);
double route_ee(const std::vector<HopEE>& hops);

}  // namespace leoroute::energy
