// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "leoroute/params.hpp"

using namespace leoroute;

TEST_CASE("defaults validate and carry the converted reference values") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.r_sat_km() == doctest::Approx(7371.0));
  CHECK(p.chan.p1_mw == doctest::Approx(31622.776601683792));   // 15 dBW
  CHECK(p.chan.g_st == doctest::Approx(std::pow(10.0, 4.17)));  // 41.7 dBi
  CHECK(p.chan.zeta_st == doctest::Approx(std::pow(10.0, -0.2)));
  CHECK(p.chan.zeta_ss == 1.0);
}

TEST_CASE("key-value parsing: comments, whitespace, errors") {
  const auto kv = parse_kv_text("# comment\n n_s = 600 \n\nbeta=2.5 # trailing\n");
  CHECK(kv.at("n_s") == "600");
  CHECK(kv.at("beta") == "2.5");
  CHECK_THROWS_AS(parse_kv_text("this is not a pair\n"), std::invalid_argument);
}

TEST_CASE("dB-denominated keys convert once at load") {
  SystemParams p = params_from_kv({{"p_t1_dbw", "20"},
                                   {"g_ss_dbi", "30"},
                                   {"zeta_st_db", "-3"},
                                   {"lambda_st_nm", "1064"}});
  CHECK(p.chan.p1_mw == doctest::Approx(1e5));
  CHECK(p.chan.g_ss == doctest::Approx(1000.0));
  CHECK(p.chan.zeta_st == doctest::Approx(std::pow(10.0, -0.3)));
  CHECK(p.chan.lambda_st_m == doctest::Approx(1064e-9));
}

TEST_CASE("unknown keys and malformed numbers are rejected") {
  SystemParams p;
  CHECK_THROWS_AS(apply_config_key(p, "n_sats", "100"), std::invalid_argument);
  CHECK_THROWS_AS(apply_config_key(p, "beta", "2.5x"), std::invalid_argument);
}

TEST_CASE("validation enforces the physical bounds") {
  CHECK_THROWS_AS(params_from_kv({{"beta", "0.5"}}), std::invalid_argument);
  CHECK_THROWS_AS(params_from_kv({{"eps", "1.0"}}), std::invalid_argument);
  CHECK_THROWS_AS(params_from_kv({{"n_in", "1"}}), std::invalid_argument);
  // links blocked by the Earth: lmax above the horizon bound
  CHECK_THROWS_AS(params_from_kv({{"h_s_km", "500"}}), std::invalid_argument);
  CHECK_NOTHROW(params_from_kv({{"h_s_km", "500"}, {"lmax1_km", "2573"}, {"lmax2_km", "2573"}}));
  CHECK_THROWS_AS(params_from_kv({{"lmax3_km", "7500"}}), std::invalid_argument);
  CHECK_THROWS_AS(params_from_kv({{"zeta_ss_db", "-1"}}), std::invalid_argument);
}
