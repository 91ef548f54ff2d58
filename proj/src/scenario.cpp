// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace fhsplit {
namespace {

// "peak" resolves to the cell's downlink 7.3 rate.
std::uint64_t parse_goodput(std::string_view text, const CellConfig& cell, const char* field)
{
    if (text == "peak") {
        return rate_73_dl(cell).exact().round_half_up();
    }
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(field, "expected bit/s or 'peak', got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::uint64_t> parse_sweep(std::string_view text, const CellConfig& cell)
{
    std::vector<std::uint64_t> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        out.push_back(parse_goodput(item, cell, "goodput_sweep"));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    if (out.empty()) {
        throw ConfigError("goodput_sweep", "is empty");
    }
    return out;
}

}  // namespace

ChannelMode parse_mode(std::string_view text)
{
    if (text == "sim" || text == "simulated") return ChannelMode::Simulated;
    if (text == "socket") return ChannelMode::Socket;
    throw ConfigError("mode", "expected sim or socket, got '" + std::string(text) + "'");
}

Scenario parse_scenario(std::string_view text)
{
    KeyValues kv = KeyValues::parse(text);
    Scenario s;
    s.cell = CellConfig(take_cell_params(kv));

    if (const std::string* g = kv.take("goodput_bps")) {
        s.traffic.goodput_bps = parse_goodput(*g, s.cell, "goodput_bps");
    }
    if (const std::string* sweep = kv.take("goodput_sweep")) {
        s.goodput_sweep = parse_sweep(*sweep, s.cell);
    }
    if (kv.contains("sweep_points")) {
        if (!s.goodput_sweep.empty()) {
            throw ConfigError("sweep_points", "conflicts with goodput_sweep");
        }
        std::uint64_t n = kv.take_uint("sweep_points", 0);
        if (n < 2) throw ConfigError("sweep_points", "must be at least 2");
        s.goodput_sweep = goodput_grid(rate_73_dl(s.cell).exact().round_half_up(), n);
    }
    s.traffic.packet_size_bytes = static_cast<std::uint32_t>(
        kv.take_uint("packet_size_bytes", s.traffic.packet_size_bytes));
    s.traffic.duration_subframes = kv.take_uint("duration_subframes", s.traffic.duration_subframes);

    s.impairments.loss_rate = kv.take_double("loss_rate", s.impairments.loss_rate);
    s.impairments.reorder_rate = kv.take_double("reorder_rate", s.impairments.reorder_rate);
    s.impairments.delay = std::chrono::microseconds(kv.take_uint("delay_us", 0));
    s.impairments.reorder_hold = std::chrono::microseconds(
        kv.take_uint("reorder_hold_us", static_cast<std::uint64_t>(s.impairments.reorder_hold.count())));

    s.options.max_datagram = kv.take_uint("max_datagram", s.options.max_datagram);
    s.options.reassembly_timeout = std::chrono::microseconds(kv.take_uint("timeout_us", 1000));
    std::string order = kv.take_string("reassembly_order", "arrival");
    if (order == "arrival") {
        s.options.order = wire::ReassemblyOrder::Arrival;
    } else if (order == "sender_clock") {
        s.options.order = wire::ReassemblyOrder::SenderClock;
    } else {
        throw ConfigError("reassembly_order", "expected arrival or sender_clock");
    }
    s.options.llr_clip = kv.take_double("llr_clip", s.options.llr_clip);
    s.options.cqi_period_subframes =
        static_cast<std::uint32_t>(kv.take_uint("cqi_period", s.options.cqi_period_subframes));
    s.options.queue_limit_subframes =
        kv.take_uint("queue_limit_subframes", s.options.queue_limit_subframes);

    s.mode = parse_mode(kv.take_string("mode", "sim"));
    s.endpoints.du_addr = kv.take_string("du_addr", s.endpoints.du_addr);
    s.endpoints.ru_addr = kv.take_string("ru_addr", s.endpoints.ru_addr);
    if (kv.contains("seed")) {
        s.seed = kv.take_uint("seed", 0);
    }

    kv.reject_unconsumed();
    s.traffic.validate();
    s.impairments.validate();
    s.options.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    KeyValues::load(path);  // surfaces a missing file as ConfigError
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace fhsplit
