// SPDX-License-Identifier: Apache-2.0
#include "leoroute/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace leoroute::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

SphericalPoint::SphericalPoint(double radius_km, double polar, double azimuth)
    : radius_km(radius_km), polar(polar) {
  if (!(radius_km > 0.0)) throw std::invalid_argument("SphericalPoint: radius must be > 0");
  if (!(polar >= 0.0 && polar <= std::numbers::pi))
    throw std::invalid_argument("SphericalPoint: polar angle must lie in [0, pi]");
  // Normalize azimuth into [0, 2*pi) once; no wraparound arithmetic later.
  double a = std::fmod(azimuth, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  this->azimuth = a;
}

PointSet::PointSet(double radius_km, DeviceKind kind, std::vector<SphericalPoint> pts)
    : radius_km(radius_km), kind(kind), points(std::move(pts)) {
  for (const auto& p : points) {
    if (std::abs(p.radius_km - radius_km) > 1e-9 * radius_km)
      throw std::invalid_argument("PointSet: point radius differs from set radius");
  }
}

double euclidean_distance(double r1, double th1, double ph1, double r2, double th2, double ph2) {
  const double dot =
      std::sin(th1) * std::sin(th2) * std::cos(ph1 - ph2) + std::cos(th1) * std::cos(th2);
  const double sq = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * dot;
  return std::sqrt(std::max(sq, 0.0));
}

double euclidean_distance(const SphericalPoint& a, const SphericalPoint& b) {
  return euclidean_distance(a.radius_km, a.polar, a.azimuth, b.radius_km, b.polar, b.azimuth);
}

double central_angle(double th1, double ph1, double th2, double ph2) {
  const double dot =
      std::sin(th1) * std::sin(th2) * std::cos(ph1 - ph2) + std::cos(th1) * std::cos(th2);
  return std::acos(clamp_unit(dot));
}

double central_angle(const SphericalPoint& a, const SphericalPoint& b) {
  return central_angle(a.polar, a.azimuth, b.polar, b.azimuth);
}

double chord_ground_sat(double theta, double r_earth_km, double r_sat_km) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::domain_error("chord_ground_sat: theta outside [0, pi]");
  const double sq = r_earth_km * r_earth_km + r_sat_km * r_sat_km -
                    2.0 * r_earth_km * r_sat_km * std::cos(theta);
  return std::sqrt(std::max(sq, 0.0));
}

double angle_ground_sat(double l_km, double r_earth_km, double r_sat_km) {
  const double lo = r_sat_km - r_earth_km;
  const double hi = r_sat_km + r_earth_km;
  if (!(l_km >= lo * (1.0 - 1e-12) && l_km <= hi * (1.0 + 1e-12)))
    throw std::domain_error("angle_ground_sat: length outside [h_s, r_earth + r_sat]");
  const double arg =
      (r_earth_km * r_earth_km + r_sat_km * r_sat_km - l_km * l_km) / (2.0 * r_earth_km * r_sat_km);
  return std::acos(clamp_unit(arg));
}

double chord_sat_sat(double theta, double r_sat_km) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::domain_error("chord_sat_sat: theta outside [0, pi]");
  return 2.0 * r_sat_km * std::sin(0.5 * theta);
}

double angle_sat_sat(double l_km, double r_sat_km) {
  if (!(l_km >= 0.0 && l_km <= 2.0 * r_sat_km * (1.0 + 1e-12)))
    throw std::domain_error("angle_sat_sat: length outside [0, 2*r_sat]");
  return 2.0 * std::asin(clamp_unit(l_km / (2.0 * r_sat_km)));
}

PointSet sample_bpp(std::size_t n, double radius_km, DeviceKind kind, Rng& rng) {
  std::vector<SphericalPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cos_polar = rng.next_uniform(-1.0, 1.0);
    const double polar = std::acos(clamp_unit(cos_polar));
    const double azimuth = rng.next_uniform(0.0, kTwoPi);
    pts.emplace_back(radius_km, polar, azimuth);
  }
  return PointSet(radius_km, kind, std::move(pts));
}

std::pair<std::size_t, SphericalPoint> nearest_point(const PointSet& set,
                                                     const SphericalPoint& target) {
  if (set.points.empty()) throw std::invalid_argument("nearest_point: empty point set");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const double d = euclidean_distance(set.points[i], target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, set.points[best]};
}

GreatCircleFrame::GreatCircleFrame(const SphericalPoint& origin, const SphericalPoint& toward) {
  auto unit = [](const SphericalPoint& p, double out[3]) {
    out[0] = std::sin(p.polar) * std::cos(p.azimuth);
    out[1] = std::sin(p.polar) * std::sin(p.azimuth);
    out[2] = std::cos(p.polar);
  };
  double u[3], v[3];
  unit(origin, u);
  unit(toward, v);
  // Gram-Schmidt: e2 spans the great-circle plane with e1.
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  double w[3] = {v[0] - dot * u[0], v[1] - dot * u[1], v[2] - dot * u[2]};
  double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  if (n < 1e-12) {
    // Antipodal or coincident endpoints: every meridian works, pick a
    // deterministic one from the axis least aligned with e1.
    int axis = std::abs(u[0]) <= std::abs(u[1])
                   ? (std::abs(u[0]) <= std::abs(u[2]) ? 0 : 2)
                   : (std::abs(u[1]) <= std::abs(u[2]) ? 1 : 2);
    double a[3] = {0.0, 0.0, 0.0};
    a[axis] = 1.0;
    const double ad = a[0] * u[0] + a[1] * u[1] + a[2] * u[2];
    for (int i = 0; i < 3; ++i) w[i] = a[i] - ad * u[i];
    n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  }
  for (int i = 0; i < 3; ++i) {
    e1_[i] = u[i];
    e2_[i] = w[i] / n;
  }
}

SphericalPoint GreatCircleFrame::to_world(double radius_km, double chi) const {
  const double c = std::cos(chi), s = std::sin(chi);
  const double x = c * e1_[0] + s * e2_[0];
  const double y = c * e1_[1] + s * e2_[1];
  const double z = c * e1_[2] + s * e2_[2];
  const double polar = std::acos(std::clamp(z, -1.0, 1.0));
  double azim = std::atan2(y, x);
  return SphericalPoint(radius_km, polar, azim);
}

}  // namespace leoroute::geometry
