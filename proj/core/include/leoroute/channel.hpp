// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leoroute/rng.hpp"

namespace leoroute::channel {

/// Hop classes. c1: ground-to-satellite (odd STR hops, first ISR hop),
/// c2: satellite-to-ground (even STR hops, last ISR hop),
/// c3: satellite-to-satellite (middle ISR hops).
enum class HopClass { c1, c2, c3 };

/// Transmitter of the hop sits on a satellite (these hops carry the price
/// ratio factor beta in the efficiency accounting).
inline bool satellite_transmits(HopClass c) { return c != HopClass::c1; }

/// Channel, antenna, power and link-budget constants. All values linear
/// and in fixed units (mW, Hz, m, km); dB/dBi/dBW conversion happens once
/// at config load, never here.
struct ChannelParams {
  // shadowed-Rician small-scale fading (satellite-terrestrial links)
  double omega = 1.29;   // average LOS power
  double b0 = 0.158;     // half average multipath power
  double n0 = 19.4;      // Nakagami shape

  // pointing error (inter-satellite links)
  double eta_s = 1.00526;
  double a0 = 3.2120;
  double sigma_jitter = 0.015;  // Rayleigh jitter sigma, rad

  double lambda_st_m = 1550e-9;
  double lambda_ss_m = 1550e-9;
  double zeta_st = 0.63095734448019325;  // -2 dB
  double zeta_ss = 1.0;                  // air attenuation negligible on ISLs
  double g_st = 14791.083881682072;      // 41.7 dBi, bidirectional
  double g_ss = 14791.083881682072;
  double b_st_hz = 20e6;
  double b_ss_hz = 20e6;
  double noise_sat_mw = 1e-10;  // sigma_s^2
  double noise_gnd_mw = 1e-10;  // sigma_g^2
  double p1_mw = 31622.776601683792;  // 15 dBW
  double p2_mw = 31622.776601683792;
  double p3_mw = 31622.776601683792;
  double lmax1_km = 3000.0;
  double lmax2_km = 3000.0;
  double lmax3_km = 3000.0;
  double beta = 5.0;  // space/ground energy price ratio, >= 1

  double lmax_km(HopClass c) const {
    switch (c) {
      case HopClass::c1: return lmax1_km;
      case HopClass::c2: return lmax2_km;
      default: return lmax3_km;
    }
  }
  double transmit_power_mw(HopClass c) const {
    switch (c) {
      case HopClass::c1: return p1_mw;
      case HopClass::c2: return p2_mw;
      default: return p3_mw;
    }
  }
  /// Receiver-side noise: satellites receive on c1 and c3, ground on c2.
  double noise_mw(HopClass c) const { return c == HopClass::c2 ? noise_gnd_mw : noise_sat_mw; }
  double bandwidth_hz(HopClass c) const { return c == HopClass::c3 ? b_ss_hz : b_st_hz; }

  /// Throws std::invalid_argument on a nonsensical parameter set.
  void validate() const;
};

/// CDF of the shadowed-Rician fading power gain, evaluated from its
/// Pochhammer series with regularized lower incomplete gamma terms.
/// Truncation: next term's relative contribution < 1e-12, capped at 500.
double sr_fading_cdf(double w, const ChannelParams& p);

/// Mean of the shadowed-Rician power gain: 2*b0 + omega.
double sr_fading_mean(const ChannelParams& p);

/// Inverse-transform draw from sr_fading_cdf (bisection, 1e-10 relative).
double sample_sr_fading(Rng& rng, const ChannelParams& p);

/// Mean pointing-error gain, small-jitter closed form:
/// a0*eta^2/(1+eta^2)*(1-sigma^2).
double pointing_gain_mean(const ChannelParams& p);

/// Pointing-error gain draw: Rayleigh deviation angle theta_d, then with
/// probability cos(theta_d) a draw from the conditional power density
/// (W = a0 * U^(1/eta^2)), otherwise 0. The zero branch carries the
/// conditional density's deficient mass 1 - cos(theta_d) (beam miss).
double sample_pointing_gain(Rng& rng, const ChannelParams& p);

/// Free-space large-scale gain (lambda/(4*pi*l))^2 * zeta for the class's
/// link type; excludes small-scale fading. Throws std::domain_error if l
/// is nonpositive or exceeds the class's maximum distance.
double path_gain(double l_km, HopClass c, const ChannelParams& p);

/// Received power in mW: rho_t * G * path_gain * fading.
double received_power(double l_km, HopClass c, double fading, const ChannelParams& p);

}  // namespace leoroute::channel
