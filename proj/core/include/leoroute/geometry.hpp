// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "leoroute/rng.hpp"

namespace leoroute::geometry {

/// Position in Earth-centered spherical coordinates.
/// radius_km > 0, polar in [0, pi], azimuth normalized to [0, 2*pi).
struct SphericalPoint {
  double radius_km = 0.0;
  double polar = 0.0;
  double azimuth = 0.0;

  SphericalPoint() = default;
  SphericalPoint(double radius_km, double polar, double azimuth);
};

enum class DeviceKind { gateway, satellite };

/// Fixed-cardinality point set on a single sphere (spherical BPP draw or
/// a hand-built configuration). Immutable after construction.
struct PointSet {
  double radius_km = 0.0;
  DeviceKind kind = DeviceKind::satellite;
  std::vector<SphericalPoint> points;

  PointSet(double radius_km, DeviceKind kind, std::vector<SphericalPoint> points);
  std::size_t size() const { return points.size(); }
};

/// Straight-line distance between two points given in spherical form.
double euclidean_distance(const SphericalPoint& a, const SphericalPoint& b);

/// Distance between (r1,th1,ph1) and (r2,th2,ph2) without building points.
double euclidean_distance(double r1, double th1, double ph1, double r2, double th2, double ph2);

/// Angle at the Earth's center between the two directions, in [0, pi].
double central_angle(const SphericalPoint& a, const SphericalPoint& b);
double central_angle(double th1, double ph1, double th2, double ph2);

/// Chord length between a ground point and a satellite separated by
/// central angle theta. Monotone on [0, pi], range [r_sat-r_earth, r_sat+r_earth].
double chord_ground_sat(double theta, double r_earth_km, double r_sat_km);
/// Inverse of chord_ground_sat. Throws std::domain_error outside
/// [r_sat-r_earth, r_sat+r_earth].
double angle_ground_sat(double l_km, double r_earth_km, double r_sat_km);

/// Chord between two satellites: 2*r_sat*sin(theta/2).
double chord_sat_sat(double theta, double r_sat_km);
/// Inverse of chord_sat_sat. Throws std::domain_error outside [0, 2*r_sat].
double angle_sat_sat(double l_km, double r_sat_km);

/// n independent uniform points on the sphere of the given radius
/// (polar from arccos of a uniform cosine, azimuth uniform).
PointSet sample_bpp(std::size_t n, double radius_km, DeviceKind kind, Rng& rng);

/// Index and point minimizing euclidean_distance to target; ties broken by
/// lowest index. Throws std::invalid_argument on an empty set.
std::pair<std::size_t, SphericalPoint> nearest_point(const PointSet& set,
                                                     const SphericalPoint& target);

/// Orthonormal frame anchored at `origin` whose zero-azimuth meridian
/// passes through `toward`. Maps plan coordinates (polar chi, azimuth 0
/// measured from origin along the origin->toward great circle) to world
/// spherical coordinates. With origin at the pole and toward at azimuth 0
/// this is the identity.
class GreatCircleFrame {
 public:
  GreatCircleFrame(const SphericalPoint& origin, const SphericalPoint& toward);
  SphericalPoint to_world(double radius_km, double chi) const;

 private:
  double e1_[3];  // unit vector toward origin
  double e2_[3];  // unit vector in the origin->toward plane, orthogonal to e1
};

}  // namespace leoroute::geometry
