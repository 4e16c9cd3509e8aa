// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leoroute/params.hpp"

namespace leoroute::scaling {

/// Device counts and radii the deviation statistics depend on.
struct ScalingContext {
  long n_sat = 1000;
  long n_gw = 1000;
  double r_earth_km = 6371.0;
  double r_sat_km = 7371.0;
};

inline ScalingContext make_context(const SystemParams& p) {
  return ScalingContext{p.n_s, p.n_g, p.r_earth_km, p.r_sat_km()};
}

/// Density of the polar angle of the BPP point nearest to a reference
/// direction, out of n uniform points: (n sin(psi)/2)*((1+cos(psi))/2)^(n-1).
double nearest_polar_pdf(double psi, long n);

/// Closed-form CDF: 1 - ((1+cos(psi))/2)^n.
double nearest_polar_cdf(double psi, long n);

/// Distance scaling factors: ratio of the mean nearest-device hop length
/// to the ideal hop length, for a hop of central angle theta.
///
/// alpha1 — one end fixed, the satellite end drawn nearest to its ideal
/// position (first/last hops). alpha2 — alpha1 times the gateway-side
/// increment (middle STR hops, sequential-increment approximation).
/// alpha3 — square of the single-satellite increment over the
/// inter-satellite chord (middle ISR hops).
///
/// Evaluated by nested adaptive Simpson quadrature (1e-8 relative per
/// axis); results are memoized behind a read-safe cache keyed on inputs
/// rounded to a 1e-9 rad grid.
double alpha1(double theta, const ScalingContext& ctx);
double alpha2(double theta, const ScalingContext& ctx);
double alpha3(double theta, const ScalingContext& ctx);

/// The inner (un-squared) increment ratio of alpha3; alpha3 equals its
/// square by construction.
double alpha3_single_increment(double theta, const ScalingContext& ctx);

}  // namespace leoroute::scaling
