// SPDX-License-Identifier: Apache-2.0
#include "leoroute/params.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace leoroute {

void SystemParams::validate() const {
  if (n_g < 0 || n_s < 0) throw std::invalid_argument("SystemParams: device counts must be >= 0");
  if (!(r_earth_km > 0.0) || !(h_s_km > 0.0))
    throw std::invalid_argument("SystemParams: radii must be > 0");
  if (!(theta_big > 0.0 && theta_big <= std::numbers::pi))
    throw std::invalid_argument("SystemParams: theta_big must lie in (0, pi]");
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("SystemParams: eps must lie in [0, 1)");
  if (n_in < 2) throw std::invalid_argument("SystemParams: n_in must be >= 2");
  chan.validate();
  // Links must not be blocked by the Earth.
  const double horizon = std::sqrt(r_sat_km() * r_sat_km() - r_earth_km * r_earth_km);
  if (chan.lmax1_km > horizon * (1.0 + 1e-12) || chan.lmax2_km > horizon * (1.0 + 1e-12))
    throw std::invalid_argument("SystemParams: lmax1/lmax2 exceed sqrt(r_sat^2 - r_earth^2)");
  if (chan.lmax3_km > 2.0 * horizon * (1.0 + 1e-12))
    throw std::invalid_argument("SystemParams: lmax3 exceeds 2*sqrt(r_sat^2 - r_earth^2)");
}

namespace {

using Setter = std::function<void(SystemParams&, double)>;

struct KeySpec {
  const char* help;
  Setter set;
};

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      {"n_g", {"number of gateways", [](SystemParams& p, double v) { p.n_g = (int)std::llround(v); }}},
      {"n_s", {"number of satellites", [](SystemParams& p, double v) { p.n_s = (int)std::llround(v); }}},
      {"r_earth_km", {"Earth radius (km)", [](SystemParams& p, double v) { p.r_earth_km = v; }}},
      {"h_s_km", {"constellation altitude (km)", [](SystemParams& p, double v) { p.h_s_km = v; }}},
      {"theta_rad", {"transmitter-receiver central angle (rad)",
                     [](SystemParams& p, double v) { p.theta_big = v; }}},
      {"beta", {"space/ground energy price ratio", [](SystemParams& p, double v) { p.chan.beta = v; }}},
      {"eps", {"link margin factor in the searches", [](SystemParams& p, double v) { p.eps = v; }}},
      {"n_in", {"inner grid resolution of the searches",
                [](SystemParams& p, double v) { p.n_in = (int)std::llround(v); }}},
      {"omega", {"SR fading average LOS power", [](SystemParams& p, double v) { p.chan.omega = v; }}},
      {"b0", {"SR fading half multipath power", [](SystemParams& p, double v) { p.chan.b0 = v; }}},
      {"n0", {"SR fading Nakagami shape", [](SystemParams& p, double v) { p.chan.n0 = v; }}},
      {"eta_s", {"pointing error parameter eta_s", [](SystemParams& p, double v) { p.chan.eta_s = v; }}},
      {"a0", {"pointing error parameter A0", [](SystemParams& p, double v) { p.chan.a0 = v; }}},
      {"varsigma_rad", {"Rayleigh jitter sigma (rad)",
                        [](SystemParams& p, double v) { p.chan.sigma_jitter = v; }}},
      {"lambda_st_nm", {"STL wavelength (nm)",
                        [](SystemParams& p, double v) { p.chan.lambda_st_m = v * 1e-9; }}},
      {"lambda_ss_nm", {"ISL wavelength (nm)",
                        [](SystemParams& p, double v) { p.chan.lambda_ss_m = v * 1e-9; }}},
      {"zeta_st_db", {"STL air attenuation (dB)",
                      [](SystemParams& p, double v) { p.chan.zeta_st = db_to_linear(v); }}},
      {"zeta_ss_db", {"ISL air attenuation (dB); must be 0",
                      [](SystemParams& p, double v) { p.chan.zeta_ss = db_to_linear(v); }}},
      {"g_st_dbi", {"STL bidirectional antenna gain (dBi)",
                    [](SystemParams& p, double v) { p.chan.g_st = db_to_linear(v); }}},
      {"g_ss_dbi", {"ISL bidirectional antenna gain (dBi)",
                    [](SystemParams& p, double v) { p.chan.g_ss = db_to_linear(v); }}},
      {"b_st_hz", {"STL bandwidth (Hz)", [](SystemParams& p, double v) { p.chan.b_st_hz = v; }}},
      {"b_ss_hz", {"ISL bandwidth (Hz)", [](SystemParams& p, double v) { p.chan.b_ss_hz = v; }}},
      {"sigma_s2_mw", {"satellite noise power (mW)",
                       [](SystemParams& p, double v) { p.chan.noise_sat_mw = v; }}},
      {"sigma_g2_mw", {"ground noise power (mW)",
                       [](SystemParams& p, double v) { p.chan.noise_gnd_mw = v; }}},
      {"p_t1_dbw", {"c1 transmit power (dBW)",
                    [](SystemParams& p, double v) { p.chan.p1_mw = dbw_to_mw(v); }}},
      {"p_t2_dbw", {"c2 transmit power (dBW)",
                    [](SystemParams& p, double v) { p.chan.p2_mw = dbw_to_mw(v); }}},
      {"p_t3_dbw", {"c3 transmit power (dBW)",
                    [](SystemParams& p, double v) { p.chan.p3_mw = dbw_to_mw(v); }}},
      {"lmax1_km", {"c1 maximum hop distance (km)",
                    [](SystemParams& p, double v) { p.chan.lmax1_km = v; }}},
      {"lmax2_km", {"c2 maximum hop distance (km)",
                    [](SystemParams& p, double v) { p.chan.lmax2_km = v; }}},
      {"lmax3_km", {"c3 maximum hop distance (km)",
                    [](SystemParams& p, double v) { p.chan.lmax3_km = v; }}},
  };
  return table;
}

}  // namespace

const std::map<std::string, std::string>& config_key_help() {
  static const std::map<std::string, std::string> help = [] {
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : key_table()) m.emplace(k, v.help);
    return m;
  }();
  return help;
}

void apply_config_key(SystemParams& p, const std::string& key, const std::string& value) {
  const auto it = key_table().find(key);
  if (it == key_table().end())
    throw std::invalid_argument("unknown config key: " + key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number: " + value);
  }
  if (pos != value.size())
    throw std::invalid_argument("config key " + key + ": trailing characters in: " + value);
  it->second.set(p, v);
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

SystemParams params_from_kv(const std::map<std::string, std::string>& kv, SystemParams base) {
  for (const auto& [k, v] : kv) apply_config_key(base, k, v);
  base.validate();
  return base;
}

SystemParams load_params(const std::string& path,
                         const std::map<std::string, std::string>& overrides) {
  SystemParams p;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    for (const auto& [k, v] : parse_kv_text(buf.str())) apply_config_key(p, k, v);
  }
  for (const auto& [k, v] : overrides) apply_config_key(p, k, v);
  p.validate();
  return p;
}

}  // namespace leoroute
