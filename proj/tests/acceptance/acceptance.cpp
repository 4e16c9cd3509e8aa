// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
// line; the binary exits nonzero if any check fails. Runs the full
// pipeline (search, closed-form estimates, Monte Carlo) at the reference
// parameter set; expect a few minutes of wall time.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "leoroute/analytics.hpp"
#include "leoroute/montecarlo.hpp"
#include "oracles.hpp"

using namespace leoroute;
using planner::RouteKind;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// All acceptance runs pin the link-margin factor; the closed-form
// estimates model repair-free routes, so the margin is set where
// over-length-hop repairs are rare.
constexpr double kEps = 0.15;
constexpr std::uint64_t kSeed = 20240801;

SystemParams defaults() {
  SystemParams p;
  p.eps = kEps;
  return p;
}

mc::TrialStats simulate(const SystemParams& p, RouteKind kind, mc::Strategy strategy,
                        std::int64_t trials, std::uint64_t seed) {
  mc::TrialConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.strategy = strategy;
  cfg.kind = kind;
  cfg.params = p;
  return mc::run_trials(cfg);
}

// ---- criterion 1: analytic vs simulated route efficiency ----------------
void criterion1() {
  bool ok = true;
  std::ostringstream detail;
  for (auto kind : {RouteKind::isr, RouteKind::str}) {
    const SystemParams p = defaults();
    const auto ctx = scaling::make_context(p);
    const auto search = kind == RouteKind::str ? planner::algorithm1_search(p.theta_big, p, ctx)
                                               : planner::algorithm2_search(p.theta_big, p, ctx);
    if (!search.feasible) {
      ok = false;
      detail << (kind == RouteKind::str ? "STR" : "ISR") << " infeasible; ";
      continue;
    }
    const double thm = analytics::ee_analytic(search.decision, p, ctx).ee;
    const auto stats = simulate(p, kind, mc::Strategy::proposed, 10000, kSeed);
    const double err = mc::relative_error(thm, stats.mean_ee);
    detail << (kind == RouteKind::str ? "STR" : "ISR") << " relerr=" << err * 100 << "% ";
    ok = ok && err <= 0.05;
  }
  report("1 analytic-vs-sim efficiency", ok, detail.str());
}

// ---- criterion 2: availability saturation --------------------------------
void criterion2() {
  SystemParams isr = defaults();
  isr.n_s = 600;
  const auto s_isr = simulate(isr, RouteKind::isr, mc::Strategy::proposed, 10000, kSeed + 1);

  SystemParams str = defaults();
  str.n_g = 500;
  str.n_s = 500;
  const auto s_str = simulate(str, RouteKind::str, mc::Strategy::proposed, 10000, kSeed + 2);

  std::ostringstream detail;
  detail << "ISR@600 avail=" << s_isr.availability << " STR@500+500 avail=" << s_str.availability;
  report("2 availability saturation", s_isr.availability >= 0.99 && s_str.availability >= 0.99,
         detail.str());
}

// ---- criterion 3: analytic availability is a close lower bound ----------
void criterion3() {
  const int totals[5] = {1000, 1200, 1400, 1600, 2000};
  bool ok = true;
  std::ostringstream detail;
  for (auto kind : {RouteKind::isr, RouteKind::str}) {
    for (int total : totals) {
      SystemParams p = defaults();
      if (kind == RouteKind::isr) {
        p.n_g = 0;
        p.n_s = total;
      } else {
        p.n_g = total / 2;
        p.n_s = total / 2;
      }
      const auto ctx = scaling::make_context(p);
      const auto search = kind == RouteKind::str
                              ? planner::algorithm1_search(p.theta_big, p, ctx)
                              : planner::algorithm2_search(p.theta_big, p, ctx);
      if (!search.feasible) {
        ok = false;
        continue;
      }
      const double analytic = analytics::availability(search.decision, p, ctx);
      const auto stats = simulate(p, kind, mc::Strategy::proposed, 5000, kSeed + 3);
      const bool in_band =
          analytic <= stats.availability + 0.01 && analytic >= stats.availability - 0.05;
      if (!in_band) {
        detail << (kind == RouteKind::str ? "STR" : "ISR") << "@" << total << " a=" << analytic
               << " s=" << stats.availability << " OUT ";
      }
      ok = ok && in_band;
    }
  }
  if (ok) detail << "all 10 points within [sim-5pp, sim+1pp]";
  report("3 availability lower bound", ok, detail.str());
}

// ---- criterion 4: strategy dominance -------------------------------------
void criterion4() {
  bool ok = true;
  std::ostringstream detail;
  for (auto kind : {RouteKind::str, RouteKind::isr}) {
    const SystemParams p = defaults();
    const auto ideal = simulate(p, kind, mc::Strategy::ideal, 1000, kSeed + 4);
    const auto prop = simulate(p, kind, mc::Strategy::proposed, 1000, kSeed + 4);
    const auto greedy = simulate(p, kind, mc::Strategy::greedy_max_ee, 1000, kSeed + 4);
    const auto defl = simulate(p, kind, mc::Strategy::min_deflection, 1000, kSeed + 4);
    const bool order = ideal.mean_ee >= prop.mean_ee && prop.mean_ee >= greedy.mean_ee &&
                       prop.mean_ee >= defl.mean_ee;
    const bool separated =
        prop.mean_ee - prop.ci95_halfwidth() > greedy.mean_ee + greedy.ci95_halfwidth() &&
        prop.mean_ee - prop.ci95_halfwidth() > defl.mean_ee + defl.ci95_halfwidth();
    detail << (kind == RouteKind::str ? "STR" : "ISR") << " ideal=" << ideal.mean_ee
           << " prop=" << prop.mean_ee << " greedy=" << greedy.mean_ee
           << " defl=" << defl.mean_ee << " ";
    ok = ok && order && separated;
  }
  report("4 strategy dominance", ok, detail.str());
}

// ---- criterion 5: beta crossover ------------------------------------------
void criterion5() {
  auto analytic_ee = [](RouteKind kind, double h_s, double beta, int n_g, int n_s,
                        double lmax12) {
    SystemParams p = defaults();
    p.h_s_km = h_s;
    p.chan.beta = beta;
    p.n_g = n_g;
    p.n_s = n_s;
    p.chan.lmax1_km = lmax12;
    p.chan.lmax2_km = lmax12;
    const auto ctx = scaling::make_context(p);
    const auto search = kind == RouteKind::str ? planner::algorithm1_search(p.theta_big, p, ctx)
                                               : planner::algorithm2_search(p.theta_big, p, ctx);
    return search.feasible ? analytics::ee_analytic(search.decision, p, ctx).ee : 0.0;
  };

  // h = 500 km: the Earth-blockage bound caps the up/down links at
  // sqrt(r_sat^2 - r_earth^2) ~ 2573 km. Equal total device budget.
  double crossover = -1.0;
  for (int i = 0; i <= 25; ++i) {
    const double beta = 1.0 + 0.2 * i;
    const double ee_str = analytic_ee(RouteKind::str, 500.0, beta, 1000, 1000, 2573.0);
    const double ee_isr = analytic_ee(RouteKind::isr, 500.0, beta, 0, 2000, 2573.0);
    if (ee_str > ee_isr) {
      crossover = beta;
      break;
    }
  }
  const bool low_ok = crossover >= 2.6 && crossover <= 3.4;

  // h = 1500 km: ISR holds the lead across the whole grid.
  bool high_ok = true;
  for (int i = 0; i <= 25 && high_ok; ++i) {
    const double beta = 1.0 + 0.2 * i;
    const double ee_str = analytic_ee(RouteKind::str, 1500.0, beta, 1000, 1000, 3000.0);
    const double ee_isr = analytic_ee(RouteKind::isr, 1500.0, beta, 0, 2000, 3000.0);
    high_ok = ee_isr >= ee_str;
  }

  std::ostringstream detail;
  detail << "h500 crossover beta=" << crossover << (high_ok ? ", h1500 ISR>=STR everywhere" : ", h1500 ordering broken");
  report("5 beta crossover", low_ok && high_ok, detail.str());
}

// ---- criterion 6: oracle equivalence suite --------------------------------
void criterion6() {
  bool ok = true;
  std::ostringstream detail;
  const auto base = scaling::ScalingContext{1000, 1000, 6371.0, 7371.0};

  {  // (a) distance scaling factors vs Monte Carlo ratio oracles
    Rng rng(kSeed + 6);
    const geometry::SphericalPoint ideal_sat(base.r_sat_km, 0.0, 0.0);
    const geometry::SphericalPoint ground(base.r_earth_km, 0.3, 0.0);
    const geometry::SphericalPoint ideal_gw(base.r_earth_km, 0.3, 0.0);
    const geometry::SphericalPoint ideal_b(base.r_sat_km, 0.2, 0.0);
    double d1 = 0, d2 = 0, d3 = 0;
    const int rounds = 10000;
    for (int i = 0; i < rounds; ++i) {
      auto sats = geometry::sample_bpp(1000, base.r_sat_km, geometry::DeviceKind::satellite, rng);
      auto gws = geometry::sample_bpp(1000, base.r_earth_km, geometry::DeviceKind::gateway, rng);
      const auto sp = geometry::nearest_point(sats, ideal_sat).second;
      d1 += geometry::euclidean_distance(ground, sp);
      d2 += geometry::euclidean_distance(geometry::nearest_point(gws, ideal_gw).second, sp);
      d3 += geometry::euclidean_distance(sp, geometry::nearest_point(sats, ideal_b).second);
    }
    const double chord_gs = geometry::chord_ground_sat(0.3, base.r_earth_km, base.r_sat_km);
    const double chord_ss = geometry::chord_sat_sat(0.2, base.r_sat_km);
    const double e1 = std::abs(scaling::alpha1(0.3, base) - d1 / rounds / chord_gs) /
                      (d1 / rounds / chord_gs);
    const double e2 = std::abs(scaling::alpha2(0.3, base) - d2 / rounds / chord_gs) /
                      (d2 / rounds / chord_gs);
    const double e3 = std::abs(scaling::alpha3(0.2, base) - d3 / rounds / chord_ss) /
                      (d3 / rounds / chord_ss);
    const bool a_ok = e1 <= 0.01 && e2 <= 0.03 && e3 <= 0.03;
    detail << "a(" << e1 * 100 << "%," << e2 * 100 << "%," << e3 * 100 << "%) ";
    ok = ok && a_ok;
  }

  {  // (b) contact-angle densities vs sampled histograms (KS)
    auto numeric_cdf = [&](int which, double phi) {
      const int grid_n = 4000;
      std::vector<double> cdf(grid_n + 1, 0.0);
      double acc = 0.0;
      auto pdf = [&](double t) {
        return which == 1 ? analytics::angle_pdf_c1(t, phi, base)
                          : (which == 2 ? analytics::angle_pdf_c2(t, phi, base)
                                        : analytics::angle_pdf_c3(t, phi, base));
      };
      double prev = pdf(0.0);
      for (int i = 1; i <= grid_n; ++i) {
        const double t = std::numbers::pi * i / grid_n;
        const double f = pdf(t);
        acc += 0.5 * (prev + f) * (std::numbers::pi / grid_n);
        cdf[(std::size_t)i] = acc;
        prev = f;
      }
      for (auto& v : cdf) v /= acc;
      return [cdf, grid_n](double x) {
        const double g = std::clamp(x / std::numbers::pi * grid_n, 0.0, (double)grid_n);
        const auto i = (std::size_t)g;
        if (i >= (std::size_t)grid_n) return 1.0;
        const double frac = g - (double)i;
        return cdf[i] * (1 - frac) + cdf[i + 1] * frac;
      };
    };

    // c1 is an exact density: test it against the true realized first-hop
    // angles at full power. The c2/c3 middle-hop densities are the
    // sequential-increment approximation, whose defining random variable
    // is the one-end realized chord scaled by the deterministic
    // second-end increment; the sampling oracle draws exactly that
    // construction (a shape error in the transform would fail here), and
    // the distance to the true both-end angles is asserted as a bounded,
    // documented approximation gap.
    Rng rng(kSeed + 60);
    const double phi1 = 0.35, phi2 = 0.30, phi3 = 0.20;
    std::vector<double> s1, s2, s3, true2, true3;
    const geometry::SphericalPoint ideal_a(base.r_sat_km, 0.0, 0.0);
    const geometry::SphericalPoint ground1(base.r_earth_km, phi1, 0.0);
    const geometry::SphericalPoint ground2(base.r_earth_km, phi2, 0.0);
    const geometry::SphericalPoint sat3(base.r_sat_km, phi3, 0.0);
    const double a1_phi2 = scaling::alpha1(phi2, base);
    const double a3_root = std::sqrt(scaling::alpha3(phi3, base));
    for (int t = 0; t < 100000; ++t) {
      auto sats = geometry::sample_bpp(1000, base.r_sat_km, geometry::DeviceKind::satellite, rng);
      const auto pa = geometry::nearest_point(sats, ideal_a).second;
      s1.push_back(geometry::central_angle(pa, ground1));
      if (t < 20000) {
        // model construction for c2: one-end chord times the increment
        const double d1 = geometry::euclidean_distance(pa, ground2);
        const double scaled = std::min(a1_phi2 * d1, base.r_earth_km + base.r_sat_km);
        s2.push_back(geometry::angle_ground_sat(scaled, base.r_earth_km, base.r_sat_km));
        // model construction for c3: one-end angle through the chord map
        const double tilde = geometry::central_angle(pa, sat3);
        const double arg = std::min(1.0, a3_root * std::sin(0.5 * tilde));
        s3.push_back(2.0 * std::asin(arg));
        // true both-end realized angles, for the documented gap
        auto gws =
            geometry::sample_bpp(1000, base.r_earth_km, geometry::DeviceKind::gateway, rng);
        true2.push_back(
            geometry::central_angle(pa, geometry::nearest_point(gws, ground2).second));
        true3.push_back(
            geometry::central_angle(pa, geometry::nearest_point(sats, sat3).second));
      }
    }
    const double d1 = oracles::ks_statistic(s1, numeric_cdf(1, phi1));
    const double d2 = oracles::ks_statistic(s2, numeric_cdf(2, phi2));
    const double d3 = oracles::ks_statistic(s3, numeric_cdf(3, phi3));
    const double gap2 = oracles::ks_statistic(true2, numeric_cdf(2, phi2));
    const double gap3 = oracles::ks_statistic(true3, numeric_cdf(3, phi3));
    const bool b_ok = d1 < oracles::ks_critical(s1.size(), 0.01) &&
                      d2 < oracles::ks_critical(s2.size(), 0.05) &&
                      d3 < oracles::ks_critical(s3.size(), 0.05) && gap2 < 0.12 && gap3 < 0.12;
    detail << "b(KS " << d1 << "," << d2 << "," << d3 << "; gap " << gap2 << "," << gap3 << ") ";
    ok = ok && b_ok;
  }

  {  // (c) lens availability vs direct sampling
    const SystemParams p = defaults();
    const double th_max = energy::max_central_angle(channel::HopClass::c1, p);
    Rng rng(kSeed + 66);
    const auto a = oracles::from_spherical(1.0, 0.0, 0.0);
    const auto b = oracles::from_spherical(1.0, 1.2 * th_max, 0.0);
    const double ca = std::cos(th_max);
    int hits = 0;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) {
      bool found = false;
      for (int i = 0; i < 1000 && !found; ++i) {
        const auto u = oracles::random_direction(rng);
        found = oracles::dot(u, a) >= ca && oracles::dot(u, b) >= ca;
      }
      hits += found;
    }
    const double sim = (double)hits / draws;
    const double est =
        analytics::single_hop_availability(th_max, th_max, 1.2 * th_max, 1000, p.r_sat_km());
    const bool c_ok = std::abs(est - sim) <= 0.005;
    detail << "c(|" << est << "-" << sim << "|) ";
    ok = ok && c_ok;
  }

  {  // (d) nearest polar CDF vs closed form
    bool d_ok = true;
    for (long n : {1L, 100L, 10000L}) {
      for (int i = 0; i <= 50; ++i) {
        const double psi = std::numbers::pi * i / 50.0;
        const double closed = 1.0 - std::pow(0.5 * (1.0 + std::cos(psi)), (double)n);
        d_ok = d_ok && std::abs(scaling::nearest_polar_cdf(psi, n) - closed) <= 1e-10;
      }
    }
    detail << (d_ok ? "d(ok) " : "d(FAIL) ");
    ok = ok && d_ok;
  }

  {  // (e) sampler means within 3 standard errors of the closed forms
    const SystemParams p = defaults();
    Rng rng(kSeed + 67);
    std::vector<double> sr, pt;
    for (int i = 0; i < 100000; ++i) sr.push_back(channel::sample_sr_fading(rng, p.chan));
    for (int i = 0; i < 100000; ++i) pt.push_back(channel::sample_pointing_gain(rng, p.chan));
    const auto ms_sr = oracles::mean_std(sr);
    const auto ms_pt = oracles::mean_std(pt);
    const bool e_ok =
        std::abs(ms_sr.mean - channel::sr_fading_mean(p.chan)) <= 3.0 * ms_sr.stderr_mean &&
        std::abs(ms_pt.mean - channel::pointing_gain_mean(p.chan)) <= 3.0 * ms_pt.stderr_mean;
    detail << (e_ok ? "e(ok)" : "e(FAIL)");
    ok = ok && e_ok;
  }

  report("6 oracle equivalence", ok, detail.str());
}

// ---- criterion 7: byte-identical outputs across worker counts -------------
void criterion7() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("leoroute_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = LEOROUTE_CLI_PATH;

  auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = true;
  const std::string common = "--set theta_rad=1.2 --set eps=0.15 --seed 99 --trials 64";
  const std::vector<std::pair<std::string, std::string>> jobs = {
      {"simulate --kind str " + common, "sim"},
      {"sweep --kind str --axis n_s --values 900,1000 " + common, "sweep"},
      {"compare --values 5 " + common, "compare"},
  };
  for (const auto& [args, name] : jobs) {
    const auto f1 = dir / (name + "_w1.out");
    const auto f8 = dir / (name + "_w8.out");
    ok = ok && run(args + " --workers 1 --out " + f1.string()) == 0;
    ok = ok && run(args + " --workers 8 --out " + f8.string()) == 0;
    const auto a = slurp(f1), b = slurp(f8);
    ok = ok && !a.empty() && a == b;
  }
  report("7 determinism across workers", ok, ok ? "simulate/sweep/compare byte-identical" : "mismatch");
}

}  // namespace

int main() {
  std::printf("acceptance suite (seed %llu, eps %.2f)\n", (unsigned long long)kSeed, kEps);
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
