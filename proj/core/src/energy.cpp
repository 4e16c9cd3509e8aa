// SPDX-License-Identifier: Apache-2.0
#include "leoroute/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "leoroute/geometry.hpp"

namespace leoroute::energy {

using channel::HopClass;

double hop_ee_realized(HopClass c, double l_km, double fading, const SystemParams& p) {
  const double rho_r = channel::received_power(l_km, c, fading, p.chan);
  const double snr = rho_r / p.chan.noise_mw(c);
  const double rate = p.chan.bandwidth_hz(c) * std::log2(1.0 + snr);
  const double power_w = p.chan.transmit_power_mw(c) / 1000.0;
  const double weight = channel::satellite_transmits(c) ? p.chan.beta : 1.0;
  return rate / (weight * power_w);
}

double mean_hop_ee_unchecked(double theta, HopClass c, const SystemParams& p) {
  if (c == HopClass::c3) {
    const double l = geometry::chord_sat_sat(theta, p.r_sat_km());
    if (l <= 0.0) return std::numeric_limits<double>::infinity();  // zero-length hop is free
    // Bypass the lmax check: averages are evaluated on the full angle range.
    const double lam = p.chan.lambda_ss_m / (4.0 * std::numbers::pi * l * 1000.0);
    const double snr = p.chan.p3_mw * p.chan.g_ss * lam * lam * p.chan.zeta_ss *
                       channel::pointing_gain_mean(p.chan) / p.chan.noise_sat_mw;
    return p.chan.b_ss_hz * std::log2(1.0 + snr) / (p.chan.beta * p.chan.p3_mw / 1000.0);
  }
  const double l = geometry::chord_ground_sat(theta, p.r_earth_km, p.r_sat_km());
  const double lam = p.chan.lambda_st_m / (4.0 * std::numbers::pi * l * 1000.0);
  const double rho_t = (c == HopClass::c1) ? p.chan.p1_mw : p.chan.p2_mw;
  const double noise = (c == HopClass::c1) ? p.chan.noise_sat_mw : p.chan.noise_gnd_mw;
  const double snr =
      rho_t * p.chan.g_st * lam * lam * p.chan.zeta_st * channel::sr_fading_mean(p.chan) / noise;
  const double weight = (c == HopClass::c1) ? 1.0 : p.chan.beta;
  return p.chan.b_st_hz * std::log2(1.0 + snr) / (weight * rho_t / 1000.0);
}

double max_central_angle(HopClass c, const SystemParams& p) {
  const double lmax = p.chan.lmax_km(c);
  if (c == HopClass::c3) return geometry::angle_sat_sat(lmax, p.r_sat_km());
  if (lmax < p.h_s_km)
    throw std::domain_error("max_central_angle: lmax below the constellation altitude");
  return geometry::angle_ground_sat(lmax, p.r_earth_km, p.r_sat_km());
}

double avg_hop_ee(double theta, HopClass c, const SystemParams& p) {
  if (!(theta >= 0.0) || theta > max_central_angle(c, p) * (1.0 + 1e-12))
    throw std::domain_error("avg_hop_ee: theta outside the class's reachable range");
  return mean_hop_ee_unchecked(theta, c, p);
}

double route_ee(std::span<const HopEE> hops) {
  if (hops.empty()) throw std::invalid_argument("route_ee: empty hop list");
  double recip_sum = 0.0;
  for (const auto& h : hops) {
    if (!(h.ee > 0.0)) return 0.0;  // unavailable-route convention
    recip_sum += 1.0 / h.ee;
  }
  return 1.0 / recip_sum;
}

double route_ee(const std::vector<HopEE>& hops) {
  return route_ee(std::span<const HopEE>(hops.data(), hops.size()));
}

}  // namespace leoroute::energy
