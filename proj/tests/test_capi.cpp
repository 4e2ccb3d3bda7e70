#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ruenergy/ruenergy.h"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Scenario {
    rue_scenario* s = nullptr;
    Scenario() { REQUIRE(rue_scenario_default(&s) == RUE_OK); }
    ~Scenario() { rue_scenario_free(s); }
};

std::string get(const rue_scenario* s, const char* key) {
    size_t needed = 0;
    REQUIRE(rue_scenario_get(s, key, nullptr, 0, &needed) == RUE_OK);
    std::string out(needed, '\0');
    REQUIRE(rue_scenario_get(s, key, out.data(), out.size(), nullptr) == RUE_OK);
    out.resize(needed - 1);
    return out;
}

} // namespace

TEST_CASE("version and errors") {
    CHECK(std::string(rue_version()).size() > 0);
    rue_scenario* s = nullptr;
    CHECK(rue_scenario_parse("[waveform]\nfft_size = x\n", &s) == RUE_ERR_CONFIG);
    CHECK(s == nullptr);
    CHECK(std::string(rue_last_error()).find("line 2") != std::string::npos);
    CHECK(rue_scenario_load("/nonexistent.ini", &s) == RUE_ERR_CONFIG);
    CHECK(rue_scenario_default(nullptr) == RUE_ERR_INVALID_ARGUMENT);
    Scenario ok;
    CHECK(std::string(rue_last_error()).empty());
}

TEST_CASE("scenario get, set and save") {
    Scenario sc;
    CHECK(get(sc.s, "waveform.fft_size") == "2048");
    char small[3];
    size_t needed = 0;
    CHECK(rue_scenario_get(sc.s, "waveform.fft_size", small, sizeof small, &needed) == RUE_OK);
    CHECK(std::string(small) == "20");
    CHECK(needed == 5);

    const uint64_t h = rue_scenario_hash(sc.s);
    CHECK(rue_scenario_set(sc.s, "waveform.allocated_tones", "4000") == RUE_ERR_CONFIG);
    CHECK(rue_scenario_hash(sc.s) == h);
    CHECK(rue_scenario_set(sc.s, "pa.smoothness", "2.5") == RUE_OK);
    CHECK(rue_scenario_hash(sc.s) != h);
    CHECK(rue_scenario_set(sc.s, "pa.nope", "1") == RUE_ERR_CONFIG);

    const std::string path = "capi_roundtrip.ini";
    REQUIRE(rue_scenario_save(sc.s, path.c_str()) == RUE_OK);
    rue_scenario* back = nullptr;
    REQUIRE(rue_scenario_load(path.c_str(), &back) == RUE_OK);
    CHECK(rue_scenario_hash(back) == rue_scenario_hash(sc.s));
    rue_scenario_free(back);
    std::remove(path.c_str());
}

TEST_CASE("PA and link-level simulation") {
    Scenario sc;
    double re = 0.0, im = 0.0;
    REQUIRE(rue_rapp_gain(sc.s, 1.0, 0.0, &re, &im) == RUE_OK);
    CHECK(std::hypot(re, im) == doctest::Approx(std::pow(2.0, -1.0 / 6.0)));

    double cp = 0.0, dft = 0.0;
    REQUIRE(rue_measure_evm(sc.s, RUE_CP_OFDM, 5.0, 20, 3, &cp) == RUE_OK);
    REQUIRE(rue_measure_evm(sc.s, RUE_DFTS_OFDM, 5.0, 20, 3, &dft) == RUE_OK);
    CHECK(dft < cp);
    CHECK(rue_measure_evm(sc.s, RUE_CP_OFDM, 5.0, 0, 3, &cp) == RUE_ERR_INVALID_ARGUMENT);

    double b = 0.0;
    CHECK(rue_min_backoff(sc.s, RUE_CP_OFDM, -80.0, 4, 3, &b) == RUE_ERR_INFEASIBLE);

    double q_cp = 0.0, q_dft = 0.0;
    REQUIRE(rue_papr_quantile(sc.s, RUE_CP_OFDM, 500, 1, 0.01, &q_cp) == RUE_OK);
    REQUIRE(rue_papr_quantile(sc.s, RUE_DFTS_OFDM, 500, 1, 0.01, &q_dft) == RUE_OK);
    CHECK(q_dft < q_cp);
}

TEST_CASE("link budget") {
    const rue_link_input unit{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    double se = 0.0, p = 0.0;
    REQUIRE(rue_mimo_se(&unit, 2.0, &se) == RUE_OK);
    CHECK(se == doctest::Approx(2.0));
    REQUIRE(rue_mimo_ptx(&unit, 2.0, &p) == RUE_OK);
    CHECK(p == doctest::Approx(2.0));
    REQUIRE(rue_simo_ptx(&unit, 1.0, &p) == RUE_OK);
    CHECK(p == doctest::Approx(1.0));
    REQUIRE(rue_simo_se(&unit, 1.0, &se) == RUE_OK);
    CHECK(se == doctest::Approx(1.0));
    const rue_link_input rank1{1.0, 1.0, 1.0, 0.0, 1.0, 1.0};
    CHECK(rue_mimo_ptx(&rank1, 2.0, &p) == RUE_ERR_INVALID_ARGUMENT);

    Scenario sc;
    rue_link_input in{};
    REQUIRE(rue_link_input_from(sc.s, &in) == RUE_OK);
    CHECK(in.gain == doctest::Approx(1e-11));
    CHECK(in.lambda0 > in.lambda_eff);
}

TEST_CASE("EE optimization") {
    const double gains[] = {1.0};
    const rue_fp_problem prob{gains, 1, 1.0, 1.0, 1.0, 1.0, 1, 0.0, 10.0};
    rue_fp_result r{};
    REQUIRE(rue_maximize_ee(&prob, &r) == RUE_OK);
    CHECK(r.p_star > 0.0);
    CHECK(r.p_star < 10.0);
    CHECK(r.iterations >= 1);
    rue_fp_problem bad = prob;
    bad.p_circ = 0.0;
    CHECK(rue_maximize_ee(&bad, &r) == RUE_ERR_INVALID_ARGUMENT);

    Scenario sc;
    rue_ee_result full{}, sw_dft{};
    REQUIRE(rue_solve_mode(sc.s, RUE_FULL_MIMO, 8.555, 7.07, &full) == RUE_OK);
    REQUIRE(rue_solve_mode(sc.s, RUE_SWITCH_DFT, 8.555, 7.07, &sw_dft) == RUE_OK);
    CHECK(sw_dft.ee >= full.ee);
    CHECK(full.inner == RUE_MIMO_CP);
    CHECK(rue_solve_mode(sc.s, static_cast<rue_tx_mode>(7), 8.0, 7.0, &full) == RUE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("SE sweep handle") {
    Scenario sc;
    const double se[] = {0.5, 4.0, 40.0};
    rue_sweep* sw = nullptr;
    REQUIRE(rue_sweep_run(sc.s, 8.555, 7.07, se, 3, &sw) == RUE_OK);
    CHECK(rue_sweep_size(sw) == 9);
    rue_sweep_row row{};
    REQUIRE(rue_sweep_row_at(sw, 2, &row) == RUE_OK);
    CHECK(row.mode == RUE_SWITCH_DFT);
    CHECK(row.feasible == 1);
    CHECK(row.has_inner == 1);
    CHECK(row.inner == RUE_SIMO_DFT);
    REQUIRE(rue_sweep_row_at(sw, 8, &row) == RUE_OK);
    CHECK(row.feasible == 0);
    CHECK(rue_sweep_row_at(sw, 9, &row) == RUE_ERR_INVALID_ARGUMENT);
    rue_sweep_free(sw);
}

TEST_CASE("experiment runner") {
    const char* overrides[] = {"sweep.papr_symbols = 100"};
    rue_experiment e{};
    e.command = "papr";
    e.overrides = overrides;
    e.num_overrides = 1;
    e.out_dir = "capi_papr_out";
    e.has_seed = 1;
    e.seed = 2;
    CHECK(rue_run_experiment(&e) == 0);
    e.command = "nope";
    CHECK(rue_run_experiment(&e) == 2);
    CHECK(rue_run_experiment(nullptr) == 2);
}
