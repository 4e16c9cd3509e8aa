// SPDX-License-Identifier: Apache-2.0
#include "leoroute/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "leoroute/quadrature.hpp"

namespace leoroute::analytics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLensTolBase = 1e-8;
constexpr double kDensityTolBase = 1e-8;
constexpr double kEeTolBase = 1e-7;

thread_local long g_clamp_events = 0;
thread_local double g_tol_scale = 1.0;

double lens_tol() { return kLensTolBase * g_tol_scale; }
double density_tol() { return kDensityTolBase * g_tol_scale; }
double ee_tol() { return kEeTolBase * g_tol_scale; }

/// Clamp an arccos/arcsin argument. Violations beyond the 1e-9 budget
/// signal inconsistent parameters rather than roundoff and are fatal.
double clamp_arc(double x) {
  if (x > 1.0 || x < -1.0) {
    if (x > 1.0 + 1e-9 || x < -1.0 - 1e-9)
      throw std::runtime_error("analytics: arc-function argument outside [-1,1] beyond budget");
    if (std::abs(std::abs(x) - 1.0) > 1e-15) ++g_clamp_events;
    return std::clamp(x, -1.0, 1.0);
  }
  return x;
}

/// ((1+cos(beta))/2)^(n-1) where beta is the angle between the direction
/// (theta, omega) and the reference direction (phi, 0).
double cap_factor_between(double theta, double omega, double phi, long n) {
  if (n <= 1) return 1.0;
  const double cos_beta =
      std::sin(theta) * std::sin(phi) * std::cos(omega) + std::cos(theta) * std::cos(phi);
  const double base = 0.5 * (1.0 + cos_beta);
  if (base <= 0.0) return 0.0;
  return std::exp((double)(n - 1) * std::log(base));
}

/// Nearest-device direction density marginalized over azimuth, without
/// the sin(theta) area factor: h(theta) = (n/4pi) * Int_0^2pi
/// cap_factor_between d(omega). The realized-angle densities are
/// sin(theta) * h(theta) with suitable angle transforms.
double direction_density(double theta, double phi, long n) {
  auto f = [&](double omega) { return cap_factor_between(theta, omega, phi, n); };
  const double integral = quadrature::adaptive_simpson(f, 0.0, kTwoPi, density_tol());
  return (double)n / (4.0 * kPi) * integral;
}

/// Piecewise integration with explicit breakpoints around a concentration
/// center; plain adaptive Simpson can step over a narrow spike when the
/// initial stencil misses it entirely.
template <typename F>
double integrate_peaked(F&& f, double a, double b, double center, double halfwidth, double tol) {
  if (!(b > a)) return 0.0;
  double cuts[4] = {a, std::clamp(center - halfwidth, a, b), std::clamp(center + halfwidth, a, b),
                    b};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (cuts[i + 1] > cuts[i])
      total += quadrature::adaptive_simpson(f, cuts[i], cuts[i + 1], tol);
  }
  return total;
}

/// Half-width covering all but ~1e-12 of the nearest-device deviation mass.
double deviation_halfwidth(long n) {
  if (n <= 1) return kPi;
  const double c = std::exp(-6.0 * std::numbers::ln10 / (double)n);
  return std::min(kPi, 2.0 * std::acos(std::min(1.0, c)) + 0.05);
}

double sq(double x) { return x * x; }

struct LensGeometry {
  double psi1;
  double psi2;
};

/// Split angles of the overlap region (the x == y limit removes the
/// division by the x - y difference).
LensGeometry lens_split(double theta1, double theta2, double theta_c) {
  const double x = std::cos(theta1), y = std::cos(theta2);
  if (std::abs(x - y) < 1e-12) {
    return {theta1 - 0.5 * theta_c, theta2 - 0.5 * theta_c};
  }
  const double root = std::sqrt(std::max(0.0, 2.0 * x * x - 4.0 * x * y + 2.0 * y * y +
                                                  x * y * theta_c * theta_c));
  const double psi1 = theta1 - (x * theta_c - root) / (x - y);
  const double psi2 = theta2 - (y * theta_c - root) / (x - y);
  return {psi1, psi2};
}

/// One half of the overlap area on the sphere of radius r: the strip of
/// the cap of half-angle theta cut at split angle psi.
double lens_half_area(double theta, double psi, double r) {
  if (!(psi > 0.0)) return 0.0;
  const double upper = r * std::sin(theta);
  const double delta = theta - psi;
  double lower;
  if (delta <= 0.0) {
    lower = -upper;  // split beyond the cap center: whole width counts
  } else if (delta >= 0.5 * kPi) {
    return 0.0;
  } else {
    lower = r * std::cos(theta) * std::tan(delta);
  }
  lower = std::max(lower, -upper);
  if (!(lower < upper)) return 0.0;
  auto f = [&](double l) {
    const double s = std::max(0.0, sq(r * std::sin(theta)) - l * l);
    return 2.0 * r * std::asin(clamp_arc(std::sqrt(s) / r));
  };
  return quadrature::adaptive_simpson(f, lower, upper, lens_tol());
}

/// Angle whose ground-satellite chord is `scale` times the chord of theta.
double inflate_gs_angle(double theta, double scale, double r_earth, double r_sat) {
  const double s = r_earth * r_earth + r_sat * r_sat;
  const double p = 2.0 * r_earth * r_sat;
  const double arg = (p * std::cos(theta) * scale * scale - (scale * scale - 1.0) * s) / p;
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double tilde_angle_g(double theta, const scaling::ScalingContext& ctx) {
  const double a1 = scaling::alpha1(theta, ctx);
  const double a2 = scaling::alpha2(theta, ctx);
  return inflate_gs_angle(theta, a2 / a1, ctx.r_earth_km, ctx.r_sat_km);
}

double tilde_angle_s(double theta, const scaling::ScalingContext& ctx) {
  const double a1 = scaling::alpha1(theta, ctx);
  return inflate_gs_angle(theta, a1, ctx.r_earth_km, ctx.r_sat_km);
}

}  // namespace

long clamp_events() { return g_clamp_events; }
void reset_clamp_events() { g_clamp_events = 0; }

void set_quadrature_tolerance_scale(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("tolerance scale must be > 0");
  g_tol_scale = scale;
}
double quadrature_tolerance_scale() { return g_tol_scale; }

double single_hop_availability(double theta1, double theta2, double theta_c, long n,
                               double radius_km) {
  if (n < 0) throw std::invalid_argument("single_hop_availability: n must be >= 0");
  if (!(theta1 >= 0.0 && theta2 >= 0.0 && theta_c >= 0.0))
    throw std::domain_error("single_hop_availability: angles must be >= 0");
  if (n == 0) return 0.0;
  if (theta_c >= theta1 + theta2) return 0.0;  // reach regions disjoint
  const auto [psi1, psi2] = lens_split(theta1, theta2, theta_c);
  const double sphere = 4.0 * kPi * radius_km * radius_km;
  double area = lens_half_area(theta1, psi1, radius_km) + lens_half_area(theta2, psi2, radius_km);
  area = std::clamp(area, 0.0, sphere);
  return 1.0 - std::pow(1.0 - area / sphere, (double)n);
}

double tilde_alpha_g(double theta, const scaling::ScalingContext& ctx) {
  if (!(theta > 0.0 && theta <= kPi))
    throw std::domain_error("tilde_alpha_g: theta outside (0, pi]");
  return tilde_angle_g(theta, ctx) / theta;
}

double tilde_alpha_s(double theta, const scaling::ScalingContext& ctx) {
  if (!(theta > 0.0 && theta <= kPi))
    throw std::domain_error("tilde_alpha_s: theta outside (0, pi]");
  return tilde_angle_s(theta, ctx) / theta;
}

double availability_str(const planner::DecisionVars& d, const SystemParams& p,
                        const scaling::ScalingContext& ctx) {
  d.validate();
  if (d.kind != planner::RouteKind::str)
    throw std::invalid_argument("availability_str: decision is not STR");
  const double th1max = energy::max_central_angle(channel::HopClass::c1, p);
  const double th2max = energy::max_central_angle(channel::HopClass::c2, p);
  const double ag1 = d.theta1 > 0.0 ? tilde_angle_g(d.theta1, ctx) : 0.0;
  const double ag2 = d.theta2 > 0.0 ? tilde_angle_g(d.theta2, ctx) : 0.0;
  const double as1 = d.theta1 > 0.0 ? tilde_angle_s(d.theta1, ctx) : 0.0;
  const double as2 = d.theta2 > 0.0 ? tilde_angle_s(d.theta2, ctx) : 0.0;
  auto pg = [&](double theta_c) {
    return single_hop_availability(th1max, th2max, theta_c, ctx.n_gw, ctx.r_earth_km);
  };
  auto ps = [&](double theta_c) {
    return single_hop_availability(th1max, th2max, theta_c, ctx.n_sat, ctx.r_sat_km);
  };
  const double mid_g = std::max(0.0, d.n_hops / 2.0 - 1.0);
  const double mid_s = std::max(0.0, d.n_hops / 2.0 - 2.0);
  double prob = pg(d.theta1 + ag2) * pg(d.theta2 + ag1);
  if (mid_g > 0.0) prob *= std::pow(pg(ag1 + ag2), mid_g);
  if (mid_s > 0.0) prob *= std::pow(ps(as1 + as2), mid_s);
  return std::clamp(prob, 0.0, 1.0);
}

double availability_isr(const planner::DecisionVars& d, const SystemParams& p,
                        const scaling::ScalingContext& ctx) {
  d.validate();
  if (d.kind != planner::RouteKind::isr)
    throw std::invalid_argument("availability_isr: decision is not ISR");
  const double th1max = energy::max_central_angle(channel::HopClass::c1, p);
  const double th2max = energy::max_central_angle(channel::HopClass::c2, p);
  const double th3max = energy::max_central_angle(channel::HopClass::c3, p);
  // No middle hops means no deviating satellite neighbor on the end hops.
  const double as3 = (d.n_hops > 2 && d.theta3 > 0.0) ? tilde_angle_s(d.theta3, ctx) : 0.0;
  auto ps = [&](double t1, double t2, double theta_c) {
    return single_hop_availability(t1, t2, theta_c, ctx.n_sat, ctx.r_sat_km);
  };
  double prob = ps(th1max, th3max, d.theta1 + as3) * ps(th2max, th3max, d.theta2 + as3);
  const double mid = d.n_hops - 2;
  if (mid > 0) prob *= std::pow(ps(th3max, th3max, 2.0 * as3), mid);
  return std::clamp(prob, 0.0, 1.0);
}

double availability(const planner::DecisionVars& d, const SystemParams& p,
                    const scaling::ScalingContext& ctx) {
  return d.kind == planner::RouteKind::str ? availability_str(d, p, ctx)
                                           : availability_isr(d, p, ctx);
}

double angle_pdf_c1(double theta_c, double phi, const scaling::ScalingContext& ctx) {
  if (!(theta_c >= 0.0 && theta_c <= kPi))
    throw std::domain_error("angle_pdf_c1: theta_c outside [0, pi]");
  return std::sin(theta_c) * direction_density(theta_c, phi, ctx.n_sat);
}

double angle_pdf_c2(double theta_c, double phi, const scaling::ScalingContext& ctx) {
  if (!(theta_c >= 0.0 && theta_c <= kPi))
    throw std::domain_error("angle_pdf_c2: theta_c outside [0, pi]");
  const double a1 = scaling::alpha1(phi, ctx);
  const double s = ctx.r_earth_km * ctx.r_earth_km + ctx.r_sat_km * ctx.r_sat_km;
  const double pp = 2.0 * ctx.r_earth_km * ctx.r_sat_km;
  const double xi = (s - (s - pp * std::cos(theta_c)) / (a1 * a1)) / pp;
  if (xi > 1.0 || xi < -1.0) return 0.0;  // outside the transformed support
  // sin(arccos(xi)) cancels against the Jacobian's sqrt(1 - xi^2), leaving
  // the direction density at the back-transformed angle.
  return std::sin(theta_c) * direction_density(std::acos(xi), phi, ctx.n_sat) / (a1 * a1);
}

double angle_pdf_c3(double theta_c, double phi, const scaling::ScalingContext& ctx) {
  if (!(theta_c >= 0.0 && theta_c <= kPi))
    throw std::domain_error("angle_pdf_c3: theta_c outside [0, pi]");
  const double a3 = scaling::alpha3(phi, ctx);
  const double u = std::sin(0.5 * theta_c) / std::sqrt(a3);
  if (u > 1.0) return 0.0;
  const double back = 2.0 * std::asin(clamp_arc(u));
  // As in angle_pdf_c2, the sin of the back-transformed angle cancels the
  // Jacobian square root exactly.
  return std::sin(theta_c) * direction_density(back, phi, ctx.n_sat) / a3;
}

namespace {

enum class DensityKind { c1, c2, c3 };

/// Support, concentration center and density callable for one hop term.
struct HopTerm {
  DensityKind kind;
  double phi;
  channel::HopClass hop_class;
};

double term_center(const HopTerm& t, const scaling::ScalingContext& ctx) {
  switch (t.kind) {
    case DensityKind::c1:
      return t.phi;
    case DensityKind::c2: {
      const double a1 = scaling::alpha1(t.phi, ctx);
      const double chord =
          a1 * geometry::chord_ground_sat(t.phi, ctx.r_earth_km, ctx.r_sat_km);
      const double hi = ctx.r_earth_km + ctx.r_sat_km;
      return chord >= hi ? kPi : geometry::angle_ground_sat(chord, ctx.r_earth_km, ctx.r_sat_km);
    }
    default: {
      const double root = std::sqrt(scaling::alpha3(t.phi, ctx));
      const double arg = root * std::sin(0.5 * t.phi);
      return 2.0 * std::asin(std::min(1.0, arg));
    }
  }
}

double term_density(const HopTerm& t, double psi, const scaling::ScalingContext& ctx) {
  switch (t.kind) {
    case DensityKind::c1: return angle_pdf_c1(psi, t.phi, ctx);
    case DensityKind::c2: return angle_pdf_c2(psi, t.phi, ctx);
    default: return angle_pdf_c3(psi, t.phi, ctx);
  }
}

/// Expectation of 1/avg-hop-efficiency over the realized contact angle,
/// with the density renormalized on its support. Returns the reciprocal
/// expectation and the normalization deficit.
std::pair<double, double> reciprocal_ee_term(const HopTerm& t, const SystemParams& p,
                                             const scaling::ScalingContext& ctx) {
  const double center = term_center(t, ctx);
  const double width = deviation_halfwidth(ctx.n_sat);
  auto density = [&](double psi) { return term_density(t, psi, ctx); };
  const double norm = integrate_peaked(density, 0.0, kPi, center, width, density_tol());
  if (!(norm > 0.0)) throw std::runtime_error("analytics: contact-angle density integrates to 0");
  auto weighted = [&](double psi) {
    const double f = density(psi);
    if (f == 0.0) return 0.0;
    const double ee = energy::mean_hop_ee_unchecked(psi, t.hop_class, p);
    return std::isinf(ee) ? 0.0 : f / ee;
  };
  const double integral = integrate_peaked(weighted, 0.0, kPi, center, width, ee_tol());
  return {integral / norm, std::abs(1.0 - norm)};
}

}  // namespace

AnalyticEe ee_isr_analytic(const planner::DecisionVars& d, const SystemParams& p,
                           const scaling::ScalingContext& ctx) {
  d.validate();
  if (d.kind != planner::RouteKind::isr)
    throw std::invalid_argument("ee_isr_analytic: decision is not ISR");
  AnalyticEe out;
  auto [first, def1] =
      reciprocal_ee_term({DensityKind::c1, d.theta1, channel::HopClass::c1}, p, ctx);
  auto [last, def2] =
      reciprocal_ee_term({DensityKind::c1, d.theta2, channel::HopClass::c2}, p, ctx);
  double sum = first + last;
  out.max_norm_deficit = std::max(def1, def2);
  if (d.n_hops > 2) {
    auto [mid, def3] =
        reciprocal_ee_term({DensityKind::c3, d.theta3, channel::HopClass::c3}, p, ctx);
    sum += (d.n_hops - 2) * mid;
    out.max_norm_deficit = std::max(out.max_norm_deficit, def3);
  }
  out.ee = 1.0 / sum;
  return out;
}

AnalyticEe ee_str_analytic(const planner::DecisionVars& d, const SystemParams& p,
                           const scaling::ScalingContext& ctx) {
  d.validate();
  if (d.kind != planner::RouteKind::str)
    throw std::invalid_argument("ee_str_analytic: decision is not STR");
  AnalyticEe out;
  auto [first, def1] =
      reciprocal_ee_term({DensityKind::c1, d.theta1, channel::HopClass::c1}, p, ctx);
  auto [last, def2] =
      reciprocal_ee_term({DensityKind::c1, d.theta2, channel::HopClass::c2}, p, ctx);
  double sum = first + last;
  out.max_norm_deficit = std::max(def1, def2);
  const double mids = d.n_hops / 2.0 - 1.0;
  if (mids > 0.0) {
    auto [mid1, def3] =
        reciprocal_ee_term({DensityKind::c2, d.theta1, channel::HopClass::c1}, p, ctx);
    auto [mid2, def4] =
        reciprocal_ee_term({DensityKind::c2, d.theta2, channel::HopClass::c2}, p, ctx);
    sum += mids * (mid1 + mid2);
    out.max_norm_deficit = std::max({out.max_norm_deficit, def3, def4});
  }
  out.ee = 1.0 / sum;
  return out;
}

AnalyticEe ee_analytic(const planner::DecisionVars& d, const SystemParams& p,
                       const scaling::ScalingContext& ctx) {
  return d.kind == planner::RouteKind::str ? ee_str_analytic(d, p, ctx)
                                           : ee_isr_analytic(d, p, ctx);
}

}  // namespace leoroute::analytics
