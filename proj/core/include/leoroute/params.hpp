// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "leoroute/channel.hpp"

namespace leoroute {

/// Full experiment parameter set. Defaults reproduce the reference
/// configuration (1000 gateways, 1000 satellites at 1000 km, Theta = pi).
struct SystemParams {
  int n_g = 1000;
  int n_s = 1000;
  double r_earth_km = 6371.0;
  double h_s_km = 1000.0;
  double theta_big = 3.14159265358979323846;  // transmitter-receiver central angle
  double eps = 0.05;                          // link-margin factor in the searches
  int n_in = 20;                              // inner grid resolution of the searches
  channel::ChannelParams chan;

  double r_sat_km() const { return r_earth_km + h_s_km; }

  /// Throws std::invalid_argument on violated invariants (including the
  /// Earth-blockage bounds on the maximum hop distances).
  void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbw_to_mw(double dbw) { return std::pow(10.0, dbw / 10.0) * 1000.0; }

/// Flat key=value config format. '#' starts a comment; keys are the
/// reference-table names (n_s, h_s_km, beta, p_t1_dbw, ...). Unknown keys
/// are an error. dB-denominated keys are converted to linear here, once.
SystemParams params_from_kv(const std::map<std::string, std::string>& kv,
                            SystemParams base = SystemParams{});

/// Reads the file, applies `overrides` (same key set) on top.
SystemParams load_params(const std::string& path,
                         const std::map<std::string, std::string>& overrides);

/// Parse "key=value" pairs from file contents; used by load_params.
std::map<std::string, std::string> parse_kv_text(const std::string& text);

/// The full set of recognized config keys, for validation and docs.
const std::map<std::string, std::string>& config_key_help();

/// Apply one key to params (shared by file load and --set overrides).
void apply_config_key(SystemParams& p, const std::string& key, const std::string& value);

}  // namespace leoroute
