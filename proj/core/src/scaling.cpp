// SPDX-License-Identifier: Apache-2.0
#include "leoroute/scaling.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "leoroute/geometry.hpp"
#include "leoroute/quadrature.hpp"

namespace leoroute::scaling {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAxisTol = 1e-8;

/// ((1+cos(psi))/2)^(n-1), evaluated in log space for large n.
double cap_factor(double psi, long n) {
  if (n <= 1) return 1.0;
  const double c = std::cos(0.5 * psi);
  if (c <= 0.0) return 0.0;
  return std::exp(2.0 * (double)(n - 1) * std::log(c));
}

/// Outer-domain cutoff: beyond psi_star the cap factor is below 1e-16 and
/// contributes nothing at the working tolerance. The truncated tail is
/// bounded by 1e-16 * (max distance) * (remaining angular mass).
double truncation_angle(long n) {
  if (n <= 1) return kPi;
  const double c = std::exp(-8.0 * std::numbers::ln10 / (double)(n - 1));
  if (c >= 1.0) return kPi;
  return std::min(kPi, 2.0 * std::acos(c));
}

/// Mean distance between the nearest of n uniform points on the sphere of
/// radius r_dev (nearest to the pole direction) and a fixed point at polar
/// angle theta on the sphere of radius r_fix.
double mean_nearest_distance(double theta, long n, double r_dev, double r_fix) {
  if (n < 1) throw std::invalid_argument("mean_nearest_distance: n must be >= 1");
  const double psi_star = truncation_angle(n);
  auto outer = [&](double psi) {
    const double weight = (double)n * std::sin(psi) / (4.0 * kPi) * cap_factor(psi, n);
    if (weight == 0.0) return 0.0;
    auto inner = [&](double phi) {
      return geometry::euclidean_distance(r_dev, psi, phi, r_fix, theta, 0.0);
    };
    return weight * quadrature::adaptive_simpson(inner, 0.0, kTwoPi, kAxisTol);
  };
  return quadrature::adaptive_simpson(outer, 0.0, psi_star, kAxisTol);
}

enum class AlphaKind : std::uint8_t { a1, a2, a3, a3_inner };

struct CacheKey {
  AlphaKind kind;
  std::int64_t theta_grid;  // rounded to a 1e-9 rad grid
  long n_sat;
  long n_gw;
  std::uint64_t r_earth_bits;
  std::uint64_t r_sat_bits;
  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ull;
    };
    mix((std::uint64_t)k.kind);
    mix((std::uint64_t)k.theta_grid);
    mix((std::uint64_t)k.n_sat);
    mix((std::uint64_t)k.n_gw);
    mix(k.r_earth_bits);
    mix(k.r_sat_bits);
    return (std::size_t)h;
  }
};

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

class AlphaCache {
 public:
  template <typename F>
  double get(AlphaKind kind, double theta, const ScalingContext& ctx, F&& compute) {
    const CacheKey key{kind, (std::int64_t)std::llround(theta * 1e9), ctx.n_sat, ctx.n_gw,
                       bits(ctx.r_earth_km), bits(ctx.r_sat_km)};
    {
      std::shared_lock lock(mutex_);
      const auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    const double value = compute();
    std::unique_lock lock(mutex_);
    return map_.try_emplace(key, value).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<CacheKey, double, CacheKeyHash> map_;
};

AlphaCache& cache() {
  static AlphaCache c;
  return c;
}

void check_theta(double theta, bool allow_zero) {
  if (!(theta >= 0.0 && theta <= kPi) || (!allow_zero && theta == 0.0))
    throw std::domain_error("distance scaling factor: theta outside the valid range");
}

double gateway_increment(double theta, const ScalingContext& ctx) {
  const double ideal = geometry::chord_ground_sat(theta, ctx.r_earth_km, ctx.r_sat_km);
  return mean_nearest_distance(theta, ctx.n_gw, ctx.r_earth_km, ctx.r_sat_km) / ideal;
}

}  // namespace

double nearest_polar_pdf(double psi, long n) {
  if (!(psi >= 0.0 && psi <= kPi)) throw std::domain_error("nearest_polar_pdf: psi outside [0, pi]");
  if (n < 1) throw std::invalid_argument("nearest_polar_pdf: n must be >= 1");
  return (double)n * std::sin(psi) / 2.0 * cap_factor(psi, n);
}

double nearest_polar_cdf(double psi, long n) {
  if (!(psi >= 0.0 && psi <= kPi)) throw std::domain_error("nearest_polar_cdf: psi outside [0, pi]");
  if (n < 1) throw std::invalid_argument("nearest_polar_cdf: n must be >= 1");
  const double base = 0.5 * (1.0 + std::cos(psi));
  return 1.0 - std::pow(base, (double)n);
}

double alpha1(double theta, const ScalingContext& ctx) {
  check_theta(theta, /*allow_zero=*/true);
  return cache().get(AlphaKind::a1, theta, ctx, [&] {
    const double ideal = geometry::chord_ground_sat(theta, ctx.r_earth_km, ctx.r_sat_km);
    return mean_nearest_distance(theta, ctx.n_sat, ctx.r_sat_km, ctx.r_earth_km) / ideal;
  });
}

double alpha2(double theta, const ScalingContext& ctx) {
  check_theta(theta, /*allow_zero=*/true);
  return cache().get(AlphaKind::a2, theta, ctx,
                     [&] { return alpha1(theta, ctx) * gateway_increment(theta, ctx); });
}

double alpha3_single_increment(double theta, const ScalingContext& ctx) {
  check_theta(theta, /*allow_zero=*/false);
  return cache().get(AlphaKind::a3_inner, theta, ctx, [&] {
    const double ideal = geometry::chord_sat_sat(theta, ctx.r_sat_km);
    return mean_nearest_distance(theta, ctx.n_sat, ctx.r_sat_km, ctx.r_sat_km) / ideal;
  });
}

double alpha3(double theta, const ScalingContext& ctx) {
  const double inc = alpha3_single_increment(theta, ctx);
  return inc * inc;
}

}  // namespace leoroute::scaling
