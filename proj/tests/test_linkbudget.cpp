#include "ruenergy/error.hpp"
#include "ruenergy/linkbudget.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ruenergy;
using namespace ruenergy::linkbudget;

namespace {

LinkBudgetInput unit_input(double l0 = 1.0, double l1 = 1.0, double le = 1.0) {
    return {1.0, 1.0, l0, l1, le, 1.0};
}

LinkBudgetInput scenario_input(ChannelStats stats) {
    const auto cfg = default_scenario();
    return LinkBudgetInput::from(cfg, channel::channel_statistics(stats, 1000, cfg.sweep.seed));
}

const ModeBackoff kBackoff{8.555, 7.070};

} // namespace

TEST_SUITE("linkbudget") {

TEST_CASE("MIMO spectral efficiency") {
    CHECK(mimo_se(0.0, unit_input()) == 0.0);
    CHECK(mimo_se(2.0, unit_input()) == doctest::Approx(2.0));
    CHECK_THROWS_AS(mimo_se(-1.0, unit_input()), Error);
}

TEST_CASE("MIMO power inversion") {
    CHECK(mimo_ptx(0.0, unit_input(2.0, 0.5)) == doctest::Approx(0.0));
    const auto sym = unit_input(3.0, 3.0);
    for (double c : {0.5, 2.0, 6.0}) {
        CHECK(mimo_ptx(c, sym) == doctest::Approx(2.0 / 3.0 * (std::pow(2.0, c / 2.0) - 1.0)).epsilon(1e-12));
        const auto in = unit_input(2.7, 0.4);
        CHECK(std::abs(mimo_se(mimo_ptx(c, in), in) - c) < 1e-9);
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double l1 = std::pow(10.0, -2.0 + 3.0 * u(rng));
        const double l0 = l1 * (1.0 + 10.0 * u(rng));
        const double c = 20.0 * u(rng);
        LinkBudgetInput in{std::pow(10.0, -12.0 + 4.0 * u(rng)), 1e-13 * (1.0 + u(rng)), l0, l1, l0, 20e6};
        CHECK(std::abs(mimo_se(mimo_ptx(c, in), in) - c) < 1e-9 * std::max(1.0, c));
    }
    CHECK_THROWS_AS(mimo_ptx(1.0, unit_input(1.0, 0.0)), Error);
    CHECK_THROWS_AS(mimo_ptx(-1.0, unit_input()), Error);
}

TEST_CASE("MIMO power is increasing and convex in SE") {
    const auto in = scenario_input(ChannelStats::Median);
    const auto grid = linspace(0.0, 14.0, 281);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double a = mimo_ptx(grid[i - 1], in);
        const double b = mimo_ptx(grid[i], in);
        const double c = mimo_ptx(grid[i + 1], in);
        CHECK(b > a);
        CHECK(c - 2.0 * b + a > 0.0);
    }
}

TEST_CASE("SIMO power") {
    CHECK(simo_ptx(0.0, unit_input()) == 0.0);
    CHECK(simo_ptx(1.0, unit_input()) == doctest::Approx(1.0));
    CHECK(simo_ptx(3.0, unit_input(1, 1, 2.0)) == doctest::Approx(0.5 * simo_ptx(3.0, unit_input())));
    for (double c = 1e-3; c < 30.0; c *= 1.7) {
        const auto in = scenario_input(ChannelStats::Fixed);
        CHECK(std::abs(simo_se(simo_ptx(c, in), in) / c - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(simo_ptx(1.0, unit_input(1, 1, 0.0)), Error);
    CHECK_THROWS_AS(simo_se(-1.0, unit_input()), Error);
}

TEST_CASE("link budget constants") {
    const auto in = scenario_input(ChannelStats::Median);
    CHECK(in.gain == doctest::Approx(1e-11));
    CHECK(in.noise_power == doctest::Approx(std::pow(10.0, (-174.0 + 7.0 - 30.0) / 10.0) * 20e6));
    CHECK(in.bandwidth_hz == 20e6);
}

TEST_CASE("RU power") {
    const PaProfile pa;
    const CircuitProfile circuit;
    const auto simo = ru_power(LinkMode::SimoDft, 0.0, 7.0, circuit, pa);
    CHECK(simo.m_act == 1);
    CHECK(simo.p_ru == doctest::Approx(7.9));
    const auto mimo = ru_power(LinkMode::MimoCp, 0.0, 7.0, circuit, pa);
    CHECK(mimo.m_act == 2);
    CHECK(mimo.p_circ == doctest::Approx(15.3));
    CHECK(mimo.p_circ - simo.p_circ == doctest::Approx(circuit.per_chain_w()));

    const auto r = ru_power(LinkMode::MimoCp, 2.0, 8.0, circuit, pa);
    CHECK(r.per_pa.size() == 2);
    CHECK(r.p_ru == doctest::Approx(r.p_pa_total + r.p_circ));
    CHECK(r.p_pa_total == doctest::Approx(2.0 * 2.0 / pa::drain_efficiency(8.0, pa)));

    double prev = 0.0;
    for (double p = 0.0; p <= power_cap(8.0, pa); p += 0.05) {
        const double v = ru_power(LinkMode::SimoCp, p, 8.0, circuit, pa).p_ru;
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(power_cap(10.0, pa) == doctest::Approx(pa.p_sat_w() / 10.0));
    CHECK_THROWS_AS(ru_power(LinkMode::SimoCp, power_cap(8.0, pa) * 1.01, 8.0, circuit, pa), InfeasibleError);
    CHECK_FALSE(ru_power_at(LinkMode::SimoCp, 30.0, scenario_input(ChannelStats::Median), kBackoff, circuit, pa));
}

TEST_CASE("MIMO splits the total power over two PAs") {
    const auto in = scenario_input(ChannelStats::Median);
    CHECK(required_power(LinkMode::MimoCp, 6.0, in) == doctest::Approx(0.5 * mimo_ptx(6.0, in)));
    CHECK(required_power(LinkMode::SimoDft, 6.0, in) == doctest::Approx(simo_ptx(6.0, in)));
}

TEST_CASE("crossover point") {
    const auto cfg = default_scenario();
    const auto grid = linspace(0.25, 12.0, 40);
    for (auto stats : {ChannelStats::Fixed, ChannelStats::Median}) {
        const auto in = scenario_input(stats);
        const auto cp = crossover(in, LinkMode::SimoCp, grid, kBackoff, cfg.circuit, cfg.pa);
        const auto dft = crossover(in, LinkMode::SimoDft, grid, kBackoff, cfg.circuit, cfg.pa);
        REQUIRE(cp);
        REQUIRE(dft);
        CHECK(dft->se > cp->se);
        for (auto [lm, x] : {std::pair{LinkMode::SimoCp, *cp}, std::pair{LinkMode::SimoDft, *dft}}) {
            const auto s = ru_power_at(lm, x.se, in, kBackoff, cfg.circuit, cfg.pa);
            const auto m = ru_power_at(LinkMode::MimoCp, x.se, in, kBackoff, cfg.circuit, cfg.pa);
            REQUIRE(s);
            REQUIRE(m);
            CHECK(std::abs(s->p_ru - m->p_ru) < 1e-3);
            CHECK(x.p_ru == doctest::Approx(s->p_ru));
            for (double se : {x.se - 1.0, x.se - 0.25, x.se - 0.01}) {
                const auto below_s = ru_power_at(lm, se, in, kBackoff, cfg.circuit, cfg.pa);
                const auto below_m = ru_power_at(LinkMode::MimoCp, se, in, kBackoff, cfg.circuit, cfg.pa);
                CHECK(below_s->p_ru < below_m->p_ru);
            }
            for (double se : {x.se + 0.01, x.se + 0.1}) {
                const auto above_s = ru_power_at(lm, se, in, kBackoff, cfg.circuit, cfg.pa);
                const auto above_m = ru_power_at(LinkMode::MimoCp, se, in, kBackoff, cfg.circuit, cfg.pa);
                if (above_s) CHECK(above_s->p_ru > above_m->p_ru);
            }
        }
    }
}

TEST_CASE("no crossover when SIMO stays cheaper") {
    const auto cfg = default_scenario();
    const auto in = scenario_input(ChannelStats::Median);
    const auto grid = linspace(0.1, 2.0, 20);
    CHECK_FALSE(crossover(in, LinkMode::SimoDft, grid, kBackoff, cfg.circuit, cfg.pa));
    CHECK_THROWS_AS(crossover(in, LinkMode::MimoCp, grid, kBackoff, cfg.circuit, cfg.pa), Error);
    const std::vector<double> unordered = {1.0, 0.5};
    CHECK_THROWS_AS(crossover(in, LinkMode::SimoCp, unordered, kBackoff, cfg.circuit, cfg.pa), Error);
}

TEST_CASE("linspace") {
    CHECK(linspace(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), Error);
}

}
