// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "fhsplit/split_models.hpp"

using namespace fhsplit;

namespace {

CellParams lte(std::uint32_t n_sc, double bw)
{
    CellParams p;
    p.bw_mhz = bw;
    p.n_sc = n_sc;
    return p;
}

// Reference rates straight from the cell parameters, in bit/s.
struct Expected {
    std::uint64_t o71, o72, o73dl, o73ul;
};

Expected reference(const CellParams& p)
{
    const std::uint64_t sps = p.symbols_per_second;
    Expected e{};
    e.o72 = 2ULL * p.iq_component_bits * p.n_sc * p.n_layers * sps;
    e.o71 = e.o72 * p.n_ant;
    e.o73dl = 1ULL * p.n_sc * p.n_layers * p.mod_order * sps;
    e.o73ul = e.o73dl * p.soft_bit_width;
    return e;
}

}  // namespace

TEST_CASE("lte10 rates")
{
    CellConfig cfg(lte(600, 10));
    CHECK(rate_71(cfg).mbps_display() == "2150.4");
    CHECK(rate_72(cfg).mbps_display() == "537.6");
    CHECK(rate_73_dl(cfg).mbps_display() == "67.2");
    CHECK(rate_73_ul(cfg).mbps_display() == "537.6");
    CHECK(rate_option8(cfg).mbps_display() == "3677.2");
    // 2150.4e6 * 1.71 exactly
    CHECK(rate_option8(cfg).exact() == Rational(3'677'184'000));
}

TEST_CASE("lte20 rates")
{
    CellConfig cfg(lte(1200, 20));
    CHECK(rate_71(cfg).exact() == Rational(4'300'800'000));
    CHECK(rate_72(cfg).exact() == Rational(1'075'200'000));
    CHECK(rate_73_dl(cfg).exact() == Rational(134'400'000));
    CHECK(rate_option8(cfg).exact() == Rational(7'354'368'000));
    CHECK(rate_option8(cfg).mbps_display() == "7354.4");
    CHECK(rate_option8(cfg).mbps_tenths() != 73'574);
}

TEST_CASE("rates match the reference for random cells")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        CellParams p;
        p.n_sc = 12 * static_cast<std::uint32_t>(1 + rng() % 275);
        p.n_layers = 1 + rng() % 8;
        p.n_ant = 1 + rng() % 64;
        p.mod_order = std::array{2u, 4u, 6u, 8u}[rng() % 4];
        p.iq_component_bits = 1 + rng() % 16;
        p.soft_bit_width = 1 + rng() % 16;
        p.symbols_per_second = 1000 * (1 + rng() % 56);
        CellConfig cfg(p);
        Expected e = reference(p);
        CHECK(rate_71(cfg).exact() == Rational(e.o71));
        CHECK(rate_72(cfg).exact() == Rational(e.o72));
        CHECK(rate_73_dl(cfg).exact() == Rational(e.o73dl));
        CHECK(rate_73_ul(cfg).exact() == Rational(e.o73ul));
        CHECK(rate_option8(cfg).exact() == Rational(e.o71) * Rational(171, 100));
        CHECK(rate_72(cfg).exact() / rate_73_dl(cfg).exact() ==
              efficiency_ratio(Direction::Downlink, cfg.modulation(), p.soft_bit_width,
                               p.iq_component_bits));
        CHECK(rate_72(cfg).exact() / rate_73_ul(cfg).exact() ==
              efficiency_ratio(Direction::Uplink, cfg.modulation(), p.soft_bit_width,
                               p.iq_component_bits));
    }
}

TEST_CASE("rates scale linearly in antennas and layers")
{
    CellParams p = lte(600, 10);
    CellConfig base(p);
    p.n_ant *= 2;
    CellConfig ant2(p);
    CHECK(rate_71(ant2).exact() == rate_71(base).exact() * Rational(2));
    CHECK(rate_72(ant2).exact() == rate_72(base).exact());
    p.n_layers *= 3;
    CellConfig layers3(p);
    CHECK(rate_73_dl(layers3).exact() == rate_73_dl(base).exact() * Rational(3));
}

TEST_CASE("n_fft overrides the oversampling factor")
{
    CellParams p = lte(600, 10);
    p.n_fft = 1024;
    CellConfig cfg(p);
    CHECK(cfg.oversampling_factor() == Rational(1024, 600));
    CHECK(rate_option8(cfg).exact() == rate_71(cfg).exact() * Rational(1024, 600));
    p.n_fft = 512;
    CHECK_THROWS_AS(CellConfig{p}, ConfigError);
}

TEST_CASE("split_rate and labels")
{
    CellConfig cfg(lte(600, 10));
    CHECK(split_rate(cfg, SplitOption::Option72) == rate_72(cfg));
    CHECK(split_label(SplitOption::Option73UL) == "7.3");
    CHECK(split_direction(SplitOption::Option8) == "both");
    CHECK(split_direction(SplitOption::Option73DL) == "DL");
}

TEST_CASE("display rounding is half up")
{
    CHECK(BitRate(Rational(67'250'000)).mbps_display() == "67.3");
    CHECK(BitRate(Rational(67'249'999)).mbps_display() == "67.2");
    CHECK(BitRate(Rational(0)).mbps_display() == "0.0");
}

TEST_CASE("validation names the field")
{
    auto field_of = [](CellParams p) -> std::string {
        try {
            CellConfig c(p);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    CellParams p;
    p.n_layers = 0;
    CHECK(field_of(p) == "n_layers");
    p = {};
    p.n_sc = 0;
    CHECK(field_of(p) == "n_sc");
    p = {};
    p.mod_order = 3;
    CHECK(field_of(p) == "mod_order");
    p = {};
    p.bw_mhz = -1;
    CHECK(field_of(p) == "bw_mhz");
    p = {};
    p.oversampling_factor = Rational(1, 2);
    CHECK(field_of(p) == "oversampling_factor");
    p = {};
    p.symbols_per_second = 0;
    CHECK(field_of(p) == "symbols_per_second");
    p = {};
    p.n_sc = 4'000'000'000u;
    p.n_ant = 4'000'000'000u;
    CHECK(field_of(p) == "n_sc");
}

TEST_CASE("efficiency ratios")
{
    // DL: 2*16 / Om
    CHECK(efficiency_ratio(Direction::Downlink, Modulation::Qpsk, 8) == Rational(16));
    CHECK(efficiency_ratio(Direction::Downlink, Modulation::Qam16, 8) == Rational(8));
    CHECK(efficiency_ratio(Direction::Downlink, Modulation::Qam64, 8) == Rational(16, 3));
    CHECK(efficiency_ratio(Direction::Downlink, Modulation::Qam256, 8) == Rational(4));
    // UL: 2*16 / (Om * Sbw)
    CHECK(efficiency_ratio(Direction::Uplink, Modulation::Qpsk, 8) == Rational(2));
    CHECK(efficiency_ratio(Direction::Uplink, Modulation::Qam64, 4) == Rational(4, 3));
    CHECK(efficiency_ratio(Direction::Uplink, Modulation::Qam256, 4) == Rational(1));
    // A one-bit soft value makes the uplink equal the downlink.
    for (Modulation m : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64, Modulation::Qam256}) {
        CHECK(efficiency_ratio(Direction::Uplink, m, 1) == efficiency_ratio(Direction::Downlink, m, 5));
    }
    CHECK_THROWS_AS(efficiency_ratio(Direction::Uplink, Modulation::Qpsk, 0), std::invalid_argument);
    CHECK_THROWS_AS(efficiency_ratio(Direction::Downlink, Modulation::Qpsk, 8, 0),
                    std::invalid_argument);
}

TEST_CASE("worst-case uplink pair")
{
    CellConfig cfg(CellParams{100, 3000, 8, 32, 6, 16, 5, 28'125, Rational(171, 100), {}});
    CHECK(rate_72(cfg).exact() == Rational(21'600'000'000));
    CHECK(rate_73_ul(cfg).exact() == Rational(20'250'000'000));
    CHECK(Rational(21'600, 1000) / Rational(20'250, 1000) == Rational(32, 30));
}

TEST_CASE("expected efficiency over a modulation mix")
{
    std::array<ModulationShare, 2> half{{{Modulation::Qpsk, 0.5}, {Modulation::Qam256, 0.5}}};
    CHECK(expected_efficiency(half, Direction::Downlink, 8) == doctest::Approx(10.0));
    // Shares are renormalized over what was reported.
    std::array<ModulationShare, 2> partial{{{Modulation::Qpsk, 0.2}, {Modulation::Qam256, 0.2}}};
    CHECK(expected_efficiency(partial, Direction::Downlink, 8) == doctest::Approx(10.0));
    std::array<ModulationShare, 1> one{{{Modulation::Qam16, 1.0}}};
    CHECK(expected_efficiency(one, Direction::Uplink, 4) == doctest::Approx(2.0));

    CHECK_THROWS_AS(expected_efficiency({}, Direction::Downlink, 8), std::invalid_argument);
    std::array<ModulationShare, 1> negative{{{Modulation::Qpsk, -0.1}}};
    CHECK_THROWS_AS(expected_efficiency(negative, Direction::Downlink, 8), std::invalid_argument);
    std::array<ModulationShare, 2> over{{{Modulation::Qpsk, 0.7}, {Modulation::Qam16, 0.4}}};
    CHECK_THROWS_AS(expected_efficiency(over, Direction::Downlink, 8), std::invalid_argument);
    std::array<ModulationShare, 1> zero{{{Modulation::Qpsk, 0.0}}};
    CHECK_THROWS_AS(expected_efficiency(zero, Direction::Downlink, 8), std::invalid_argument);
    std::array<ModulationShare, 1> nan{{{Modulation::Qpsk, std::nan("")}}};
    CHECK_THROWS_AS(expected_efficiency(nan, Direction::Downlink, 8), std::invalid_argument);
}

TEST_CASE("distance budget")
{
    LinkBudget b;
    CHECK(max_fronthaul_distance_km(b, Direction::Uplink, 1.5) == doctest::Approx(100.0));
    CHECK(max_fronthaul_distance_km(b, Direction::Downlink, 1.0) == 0.0);
    CHECK(max_fronthaul_distance_km(b, Direction::Uplink, 0.0) == doctest::Approx(400.0));
    CHECK(max_fronthaul_distance_km(b, Direction::Downlink, 0.5) == doctest::Approx(100.0));
    CHECK(propagation_delay_us(b, 10.0) == doctest::Approx(50.0));
    CHECK(propagation_delay_us(b, 0.0) == 0.0);
    CHECK_THROWS_AS(max_fronthaul_distance_km(b, Direction::Downlink, 1.1), std::domain_error);
    CHECK_THROWS_AS(max_fronthaul_distance_km(b, Direction::Uplink, -0.1), std::domain_error);
    CHECK_THROWS_AS(propagation_delay_us(b, -1.0), std::domain_error);

    // Distance and delay are inverse on the remaining budget.
    for (double proc : {0.0, 0.3, 1.2, 1.9}) {
        double km = max_fronthaul_distance_km(b, Direction::Uplink, proc);
        CHECK(propagation_delay_us(b, km) == doctest::Approx((2.0 - proc) * 1000.0));
    }

    LinkBudget bad;
    bad.ul_processing_ms = 4.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.propagation_us_per_km = 0;
    CHECK_THROWS_AS(max_fronthaul_distance_km(bad, Direction::Uplink, 1.0), ConfigError);
}

TEST_CASE("direction and modulation names")
{
    CHECK(to_string(Direction::Downlink) == "DL");
    CHECK(parse_direction("ul") == Direction::Uplink);
    CHECK_THROWS_AS(parse_direction("sideways"), ConfigError);
    CHECK(scheme_name(Modulation::Qam64) == "64QAM");
    CHECK(modulation_from_order(8) == Modulation::Qam256);
    CHECK_THROWS_AS(modulation_from_order(5), ConfigError);
}
