// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fhsplit/config.hpp"
#include "fhsplit/scenario.hpp"

using namespace fhsplit;

namespace {

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_field(auto&& fn)
{
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("key value parsing")
{
    auto kv = KeyValues::parse("# comment\n  a = 1  \n\nb=two # trailing\n");
    CHECK(kv.entries().size() == 2);
    CHECK(kv.take_uint("a", 0) == 1);
    CHECK(kv.take_string("b", "") == "two");
    CHECK(kv.take_uint("missing", 42) == 42);
    CHECK_NOTHROW(kv.reject_unconsumed());
}

TEST_CASE("key value errors")
{
    CHECK(error_field([] { KeyValues::parse("a = 1\na = 2\n"); }) == "line 2");
    CHECK(error_field([] { KeyValues::parse("just words\n"); }) == "line 1");
    CHECK(error_field([] { KeyValues::parse(" = 3\n"); }) == "line 1");
    CHECK(error_field([] {
              auto kv = KeyValues::parse("n = -3\n");
              kv.take_uint("n", 0);
          }) == "n");
    CHECK(error_field([] {
              auto kv = KeyValues::parse("x = 1.5.2\n");
              kv.take_double("x", 0);
          }) == "x");
    CHECK(error_field([] {
              auto kv = KeyValues::parse("known = 1\nunknown = 2\n");
              kv.take_uint("known", 0);
              kv.reject_unconsumed();
          }) == "unknown");
    CHECK_THROWS_AS(KeyValues::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("preset files match the built-in profiles")
{
    const std::filesystem::path dir = std::filesystem::path(FHSPLIT_SOURCE_DIR) / "presets";
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        CHECK(read_file(dir / (name + ".cfg")) == preset_text(name));
        CHECK(to_key_values(load_cell_config(dir / (name + ".cfg"))) ==
              to_key_values(preset_config(name)));
    }
    CHECK_THROWS_AS(preset_text("lte5"), ConfigError);
}

TEST_CASE("presets")
{
    CellConfig lte10 = preset_config("lte10");
    CHECK(lte10.n_sc() == 600);
    CHECK(lte10.n_layers() == 2);
    CHECK(lte10.n_ant() == 4);
    CHECK(lte10.mod_order() == 4);
    CHECK(lte10.symbols_per_second() == 14'000);
    CHECK(lte10.oversampling_factor() == Rational(171, 100));
    CHECK(preset_config("lte20").n_sc() == 1200);
    CellConfig worst = preset_config("worst100");
    CHECK(rate_72(worst).exact() == Rational(21'600'000'000));
    CHECK(rate_73_ul(worst).exact() == Rational(20'250'000'000));
}

TEST_CASE("cell config text")
{
    CellConfig cfg = parse_cell_config("preset = lte10\nn_layers = 4\n");
    CHECK(cfg.n_layers() == 4);
    CHECK(cfg.n_sc() == 600);

    CellConfig fft = parse_cell_config("n_sc = 600\nn_fft = 1024\n");
    CHECK(fft.oversampling_factor() == Rational(1024, 600));
    CHECK(to_key_values(fft).find("n_fft = 1024") != std::string::npos);

    CHECK(parse_cell_config("oversampling_factor = 2048/1200\n").oversampling_factor() ==
          Rational(128, 75));

    // Canonical rendering parses back to the same configuration.
    CellConfig again = parse_cell_config(to_key_values(cfg));
    CHECK(to_key_values(again) == to_key_values(cfg));

    CHECK(error_field([] { parse_cell_config("n_layers = 0\n"); }) == "n_layers");
    CHECK(error_field([] { parse_cell_config("colour = red\n"); }) == "colour");
    CHECK(error_field([] { parse_cell_config("oversampling_factor = x\n"); }) ==
          "oversampling_factor");
    CHECK(error_field([] { parse_cell_config("preset = lte5\n"); }) == "preset");
    CHECK(error_field([] { parse_cell_config("n_sc = 99999999999\n"); }) == "n_sc");
}

TEST_CASE("scenario parsing")
{
    Scenario s = parse_scenario(
        "preset = lte10\n"
        "goodput_bps = peak\n"
        "duration_subframes = 50\n"
        "loss_rate = 0.25\n"
        "reorder_rate = 0.5\n"
        "delay_us = 30\n"
        "reorder_hold_us = 2000\n"
        "max_datagram = 9000\n"
        "timeout_us = 1500\n"
        "reassembly_order = sender_clock\n"
        "llr_clip = 4\n"
        "cqi_period = 2\n"
        "queue_limit_subframes = 3\n"
        "mode = socket\n"
        "du_addr = 127.0.0.1:0\n"
        "ru_addr = 127.0.0.1:0\n"
        "seed = 9\n");
    CHECK(s.traffic.goodput_bps == 67'200'000);
    CHECK(s.traffic.duration_subframes == 50);
    CHECK(s.goodput_sweep.empty());
    CHECK(s.impairments.loss_rate == 0.25);
    CHECK(s.impairments.reorder_rate == 0.5);
    CHECK(s.impairments.delay == std::chrono::microseconds(30));
    CHECK(s.impairments.reorder_hold == std::chrono::microseconds(2000));
    CHECK(s.options.max_datagram == 9000);
    CHECK(s.options.reassembly_timeout == std::chrono::microseconds(1500));
    CHECK(s.options.order == wire::ReassemblyOrder::SenderClock);
    CHECK(s.options.llr_clip == 4.0);
    CHECK(s.options.cqi_period_subframes == 2);
    CHECK(s.options.queue_limit_subframes == 3);
    CHECK(s.mode == ChannelMode::Socket);
    CHECK(s.endpoints.du_addr == "127.0.0.1:0");
    CHECK(s.seed == 9u);
}

TEST_CASE("scenario sweeps")
{
    Scenario grid = parse_scenario("sweep_points = 5\n");
    REQUIRE(grid.goodput_sweep.size() == 5);
    CHECK(grid.goodput_sweep.front() == 0);
    CHECK(grid.goodput_sweep[2] == 33'600'000);
    CHECK(grid.goodput_sweep.back() == 67'200'000);

    Scenario list = parse_scenario("goodput_sweep = 0, 1000000 ,peak\n");
    CHECK(list.goodput_sweep == std::vector<std::uint64_t>{0, 1'000'000, 67'200'000});

    CHECK(error_field([] { parse_scenario("sweep_points = 1\n"); }) == "sweep_points");
    CHECK(error_field([] { parse_scenario("goodput_sweep = 1\nsweep_points = 3\n"); }) ==
          "sweep_points");
    CHECK(error_field([] { parse_scenario("goodput_sweep = 1,,2\n"); }) == "goodput_sweep");
    CHECK(error_field([] { parse_scenario("goodput_bps = fast\n"); }) == "goodput_bps");
}

TEST_CASE("scenario validation")
{
    CHECK(error_field([] { parse_scenario("loss_rate = 1.5\n"); }) == "loss_rate");
    CHECK(error_field([] { parse_scenario("mode = carrier_pigeon\n"); }) == "mode");
    CHECK(error_field([] { parse_scenario("reassembly_order = random\n"); }) == "reassembly_order");
    CHECK(error_field([] { parse_scenario("max_datagram = 22\n"); }) == "max_datagram");
    CHECK(error_field([] { parse_scenario("timeout_us = 0\n"); }) == "timeout_us");
    CHECK(error_field([] { parse_scenario("duration_subframes = 0\n"); }) == "duration_subframes");
    CHECK(error_field([] { parse_scenario("packet_size_bytes = 0\n"); }) == "packet_size_bytes");
    CHECK(error_field([] { parse_scenario("cqi_period = 0\n"); }) == "cqi_period");
    CHECK(error_field([] { parse_scenario("typo_key = 1\n"); }) == "typo_key");
    CHECK(error_field([] { parse_scenario("n_layers = 0\n"); }) == "n_layers");
}

TEST_CASE("shipped scenarios parse")
{
    const std::filesystem::path dir = std::filesystem::path(FHSPLIT_SOURCE_DIR) / "scenarios";
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_scenario(entry.path()));
        ++count;
    }
    CHECK(count >= 3);
    CHECK_THROWS_AS(load_scenario("/nonexistent.cfg"), ConfigError);
}
