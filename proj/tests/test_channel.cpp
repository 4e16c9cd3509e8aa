// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "leoroute/channel.hpp"
#include "oracles.hpp"

using namespace leoroute;
using namespace leoroute::channel;

namespace {
ChannelParams defaults() { return ChannelParams{}; }
}  // namespace

TEST_CASE("SR fading CDF endpoints") {
  const auto p = defaults();
  CHECK(sr_fading_cdf(0.0, p) == 0.0);
  CHECK(sr_fading_cdf(1e6, p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(sr_fading_cdf(-0.1, p), std::domain_error);
}

TEST_CASE("SR fading CDF against quadrature of the density") {
  const auto p = defaults();
  // Independent route: integrate the confluent-hypergeometric density.
  auto pdf = [&](double w) { return oracles::sr_pdf(w, p.omega, p.b0, p.n0); };
  const double by_quadrature = oracles::simpson(pdf, 0.0, 1.0, 8192);
  CHECK(sr_fading_cdf(1.0, p) == doctest::Approx(by_quadrature).epsilon(1e-8));
  const double at5 = oracles::simpson(pdf, 0.0, 5.0, 8192);
  CHECK(sr_fading_cdf(5.0, p) == doctest::Approx(at5).epsilon(1e-8));
}

TEST_CASE("SR fading CDF is non-decreasing") {
  const auto p = defaults();
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double w = 50.0 * i / 1000.0;
    const double f = sr_fading_cdf(w, p);
    CHECK(f >= prev - 1e-14);
    prev = f;
  }
}

TEST_CASE("SR fading sampler: mean, support, KS") {
  const auto p = defaults();
  Rng rng(101);
  const int n = 100000;
  std::vector<double> draws;
  draws.reserve(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_sr_fading(rng, p);
    CHECK(w >= 0.0);
    draws.push_back(w);
    sum += w;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(2 * p.b0 + p.omega).epsilon(0.02));  // 1.606

  draws.resize(10000);
  const double d = oracles::ks_statistic(draws, [&](double w) { return sr_fading_cdf(w, p); });
  CHECK(d < oracles::ks_critical(10000, 0.01));
}

TEST_CASE("SR fading mean closed form") {
  auto p = defaults();
  CHECK(sr_fading_mean(p) == doctest::Approx(1.606));
  p.b0 = 1e-12;  // validation requires > 0
  CHECK(sr_fading_mean(p) == doctest::Approx(p.omega).epsilon(1e-9));
  p.omega = 1e-12;
  p.b0 = 0.5;
  CHECK(sr_fading_mean(p) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pointing gain sampler: mean, support, small-jitter limit") {
  auto p = defaults();
  Rng rng(55);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_pointing_gain(rng, p);
    CHECK(w >= 0.0);
    CHECK(w <= p.a0);
    sum += w;
  }
  CHECK(sum / n == doctest::Approx(pointing_gain_mean(p)).epsilon(0.02));  // ~1.6140

  p.sigma_jitter = 1e-6;
  int zeros = 0;
  for (int i = 0; i < 1000000; ++i)
    if (sample_pointing_gain(rng, p) == 0.0) ++zeros;
  CHECK(zeros <= 1);  // miss probability below 1e-6
}

TEST_CASE("pointing gain mean closed form") {
  auto p = defaults();
  const double eta2 = p.eta_s * p.eta_s;
  CHECK(pointing_gain_mean(p) == doctest::Approx(1.6140).epsilon(5e-4));
  p.sigma_jitter = 1e-15;
  CHECK(pointing_gain_mean(p) == doctest::Approx(p.a0 * eta2 / (1 + eta2)).epsilon(1e-9));
  p.sigma_jitter = 1.0;
  CHECK(pointing_gain_mean(p) == doctest::Approx(0.0));
}

TEST_CASE("samplers match closed-form means within 3 standard errors") {
  const auto p = defaults();
  Rng rng(2222);
  const int n = 100000;
  std::vector<double> sr, pt;
  for (int i = 0; i < n; ++i) sr.push_back(sample_sr_fading(rng, p));
  for (int i = 0; i < n; ++i) pt.push_back(sample_pointing_gain(rng, p));
  const auto ms_sr = oracles::mean_std(sr);
  const auto ms_pt = oracles::mean_std(pt);
  CHECK(std::abs(ms_sr.mean - sr_fading_mean(p)) <= 3.0 * ms_sr.stderr_mean);
  CHECK(std::abs(ms_pt.mean - pointing_gain_mean(p)) <= 3.0 * ms_pt.stderr_mean);
}

TEST_CASE("path gain: inverse square, validation, hand arithmetic") {
  const auto p = defaults();
  CHECK(path_gain(2000.0, HopClass::c1, p) ==
        doctest::Approx(path_gain(1000.0, HopClass::c1, p) / 4.0).epsilon(1e-12));

  auto bad = defaults();
  bad.zeta_ss = 0.9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // (1550 nm / (4*pi*1000 km))^2 * 10^(-0.2), written out independently
  const double lam = 1550e-9, l = 1e6;
  const double expected =
      (lam / (4.0 * std::numbers::pi * l)) * (lam / (4.0 * std::numbers::pi * l)) *
      std::pow(10.0, -0.2);
  CHECK(path_gain(1000.0, HopClass::c1, p) == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(path_gain(3500.0, HopClass::c1, p), std::domain_error);
  CHECK_THROWS_AS(path_gain(0.0, HopClass::c1, p), std::domain_error);
}

TEST_CASE("received power: zero fading, linearity, hand formula") {
  auto p = defaults();
  CHECK(received_power(1500.0, HopClass::c1, 0.0, p) == 0.0);

  const double base = received_power(1500.0, HopClass::c1, 1.0, p);
  p.p1_mw *= 2.0;
  CHECK(received_power(1500.0, HopClass::c1, 1.0, p) == doctest::Approx(2.0 * base));

  p = defaults();
  const double lam = 1550e-9, l = 1.5e6;
  const double expected = 31622.776601683792 * 14791.083881682072 *
                          std::pow(lam / (4.0 * std::numbers::pi * l), 2.0) *
                          std::pow(10.0, -0.2) * 1.606;
  CHECK(received_power(1500.0, HopClass::c1, 1.606, p) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("received power decreases with distance for all classes") {
  const auto p = defaults();
  for (auto c : {HopClass::c1, HopClass::c2, HopClass::c3}) {
    double prev = 1e300;
    for (double l = 100.0; l <= 2900.0; l += 200.0) {
      const double rp = received_power(l, c, 1.0, p);
      CHECK(rp < prev);
      prev = rp;
    }
  }
}
