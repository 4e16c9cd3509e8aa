// SPDX-License-Identifier: Apache-2.0
#include "leoroute/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace leoroute::channel {

void ChannelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("ChannelParams: ") + name + " must be > 0");
  };
  positive(omega, "omega");
  positive(b0, "b0");
  positive(n0, "n0");
  positive(eta_s, "eta_s");
  positive(a0, "a0");
  positive(sigma_jitter, "sigma_jitter");
  positive(lambda_st_m, "lambda_st_m");
  positive(lambda_ss_m, "lambda_ss_m");
  positive(zeta_st, "zeta_st");
  positive(g_st, "g_st");
  positive(g_ss, "g_ss");
  positive(b_st_hz, "b_st_hz");
  positive(b_ss_hz, "b_ss_hz");
  positive(noise_sat_mw, "noise_sat_mw");
  positive(noise_gnd_mw, "noise_gnd_mw");
  positive(p1_mw, "p1_mw");
  positive(p2_mw, "p2_mw");
  positive(p3_mw, "p3_mw");
  positive(lmax1_km, "lmax1_km");
  positive(lmax2_km, "lmax2_km");
  positive(lmax3_km, "lmax3_km");
  if (!(beta >= 1.0)) throw std::invalid_argument("ChannelParams: beta must be >= 1");
  // Air attenuation is negligible on inter-satellite links.
  if (std::abs(zeta_ss - 1.0) > 1e-12)
    throw std::invalid_argument("ChannelParams: zeta_ss must be 1 (0 dB) for ISLs");
}

namespace {

// Series state shared between CDF evaluations: the per-order coefficients
// a_z = (n0)_z q^z / z! and the prefactor (1-q)^n0, with
// q = omega / (2 b0 n0 + omega). Gamma_l(z+1, x) enters regularized, via
// the Poisson partial sums P(z+1, x) = 1 - e^-x * sum_{k<=z} x^k/k!.
struct SrSeries {
  double q;
  double prefactor;
  double n0;
};

SrSeries make_series(const ChannelParams& p) {
  const double q = p.omega / (2.0 * p.b0 * p.n0 + p.omega);
  return SrSeries{q, std::pow(1.0 - q, p.n0), p.n0};
}

constexpr int kMaxTerms = 500;
constexpr double kRelTruncation = 1e-12;

double sr_cdf_impl(double w, double b0, const SrSeries& s) {
  if (w <= 0.0) return 0.0;
  const double x = w / (2.0 * b0);
  // Running Poisson pmf/cdf at rate x.
  double pois_pmf = std::exp(-x);  // k = 0 term; underflows to 0 for huge x
  double pois_cdf = pois_pmf;
  double a_z = 1.0;  // z = 0 coefficient
  double sum = 0.0;
  for (int z = 0; z < kMaxTerms; ++z) {
    const double reg_gamma = 1.0 - pois_cdf;  // P(z+1, x)
    const double term = a_z * reg_gamma;
    sum += term;
    if (z > 0 && term < kRelTruncation * sum) break;
    a_z *= s.q * (s.n0 + z) / (z + 1.0);
    pois_pmf *= x / (z + 1.0);
    pois_cdf += pois_pmf;
  }
  const double cdf = s.prefactor * sum;
  return cdf < 0.0 ? 0.0 : (cdf > 1.0 ? 1.0 : cdf);
}

}  // namespace

double sr_fading_cdf(double w, const ChannelParams& p) {
  if (w < 0.0) throw std::domain_error("sr_fading_cdf: w must be >= 0");
  p.validate();
  return sr_cdf_impl(w, p.b0, make_series(p));
}

double sr_fading_mean(const ChannelParams& p) { return 2.0 * p.b0 + p.omega; }

double sample_sr_fading(Rng& rng, const ChannelParams& p) {
  const SrSeries series = make_series(p);
  const double u = rng.next_unit();
  if (u <= 0.0) return 0.0;
  // Bracket the quantile, then bisect to 1e-10 relative width.
  double hi = 2.0 * p.b0 + p.omega;
  while (sr_cdf_impl(hi, p.b0, series) < u) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  double lo = 0.0;
  while ((hi - lo) > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (sr_cdf_impl(mid, p.b0, series) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double pointing_gain_mean(const ChannelParams& p) {
  const double eta2 = p.eta_s * p.eta_s;
  return p.a0 * eta2 / (1.0 + eta2) * (1.0 - p.sigma_jitter * p.sigma_jitter);
}

double sample_pointing_gain(Rng& rng, const ChannelParams& p) {
  const double theta_d = rng.next_rayleigh(p.sigma_jitter);
  const double hit_prob = std::max(0.0, std::cos(theta_d));
  if (rng.next_unit() >= hit_prob) return 0.0;
  const double u = rng.next_unit_open_low();
  return p.a0 * std::pow(u, 1.0 / (p.eta_s * p.eta_s));
}

double path_gain(double l_km, HopClass c, const ChannelParams& p) {
  if (!(l_km > 0.0)) throw std::domain_error("path_gain: distance must be > 0");
  if (l_km > p.lmax_km(c) * (1.0 + 1e-12))
    throw std::domain_error("path_gain: distance exceeds the class's maximum");
  const double lambda = (c == HopClass::c3) ? p.lambda_ss_m : p.lambda_st_m;
  const double zeta = (c == HopClass::c3) ? p.zeta_ss : p.zeta_st;
  const double l_m = l_km * 1000.0;
  const double ratio = lambda / (4.0 * std::numbers::pi * l_m);
  return ratio * ratio * zeta;
}

double received_power(double l_km, HopClass c, double fading, const ChannelParams& p) {
  if (fading < 0.0) throw std::domain_error("received_power: fading must be >= 0");
  const double g = (c == HopClass::c3) ? p.g_ss : p.g_st;
  return p.transmit_power_mw(c) * g * path_gain(l_km, c, p) * fading;
}

}  // namespace leoroute::channel
