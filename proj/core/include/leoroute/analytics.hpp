// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "leoroute/planner.hpp"
#include "leoroute/scaling.hpp"

namespace leoroute::analytics {

/// Probability that at least one of n relay devices on the sphere of the
/// given radius lies within central angle theta1 of one endpoint and
/// theta2 of the other, the endpoints being theta_c apart (lens-area
/// estimate; the degenerate theta1 == theta2 case uses the symmetric
/// construction).
double single_hop_availability(double theta1, double theta2, double theta_c, long n,
                               double radius_km);

/// Central-angle inflation factors: tilde_alpha_g(theta)*theta is the
/// angle whose ground-satellite chord equals the gateway-side deviation
/// increment (alpha2/alpha1) times the ideal chord; tilde_alpha_s uses the
/// satellite-side increment alpha1.
double tilde_alpha_g(double theta, const scaling::ScalingContext& ctx);
double tilde_alpha_s(double theta, const scaling::ScalingContext& ctx);

/// Routing availability estimates for a planned decision (products of
/// single-hop terms with inflated contact angles; lower-bound flavored).
double availability_str(const planner::DecisionVars& d, const SystemParams& p,
                        const scaling::ScalingContext& ctx);
double availability_isr(const planner::DecisionVars& d, const SystemParams& p,
                        const scaling::ScalingContext& ctx);
double availability(const planner::DecisionVars& d, const SystemParams& p,
                    const scaling::ScalingContext& ctx);

/// Realized contact-angle densities given the hop's ideal central angle
/// phi. c1: first/last hops (one deviating satellite). c2: middle STR
/// hops (chord additionally scaled by alpha1). c3: middle ISR hops
/// (chord scaled by sqrt(alpha3) on each end).
double angle_pdf_c1(double theta_c, double phi, const scaling::ScalingContext& ctx);
double angle_pdf_c2(double theta_c, double phi, const scaling::ScalingContext& ctx);
double angle_pdf_c3(double theta_c, double phi, const scaling::ScalingContext& ctx);

/// Route energy-efficiency estimate: inverse of the summed expectations of
/// reciprocal hop efficiency over the realized contact angles. The c2/c3
/// densities are approximations and may integrate slightly off 1; each is
/// renormalized before use and the worst deficit is reported.
struct AnalyticEe {
  double ee = 0.0;                 // bits per joule
  double max_norm_deficit = 0.0;   // max |1 - integral of density|
};

AnalyticEe ee_str_analytic(const planner::DecisionVars& d, const SystemParams& p,
                           const scaling::ScalingContext& ctx);
AnalyticEe ee_isr_analytic(const planner::DecisionVars& d, const SystemParams& p,
                           const scaling::ScalingContext& ctx);
AnalyticEe ee_analytic(const planner::DecisionVars& d, const SystemParams& p,
                       const scaling::ScalingContext& ctx);

/// Count of arc-function arguments nudged back into [-1, 1] on this
/// thread since the last reset (within the 1e-9 budget; anything larger
/// throws std::runtime_error).
long clamp_events();
void reset_clamp_events();

/// Thread-local multiplier on the internal quadrature tolerances
/// (stability checks evaluate at 1.0 vs a tighter scale and compare).
void set_quadrature_tolerance_scale(double scale);
double quadrature_tolerance_scale();

}  // namespace leoroute::analytics
