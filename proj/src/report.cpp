// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/report.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace fhsplit {
namespace {

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

nlohmann::ordered_json link_json(const LinkTotals& t, double mean_bps)
{
    nlohmann::ordered_json j;
    j["mean_rate_bps"] = mean_bps;
    j["mean_rate_mbps"] = mean_bps / 1e6;
    j["wire_bytes"] = t.wire_bytes;
    j["datagrams_sent"] = t.datagrams_sent;
    j["datagrams_received"] = t.datagrams_received;
    j["scheduled_bits"] = t.scheduled_bits;
    j["messages_sent"] = t.messages_sent;
    j["payload_bytes_sent"] = t.payload_bytes_sent;
    j["payload_bytes_delivered"] = t.payload_bytes_delivered;
    j["payload_bytes_discarded"] = t.payload_bytes_discarded;
    j["completes"] = t.completes;
    j["timeouts"] = t.timeouts;
    j["jumbled"] = t.jumbled;
    j["malformed"] = t.malformed;
    j["decode_errors"] = t.decode_errors;
    return j;
}

}  // namespace

void write_report_csv(std::ostream& out, const EmulationReport& report)
{
    out << "subframe,offered_bits,dl_bits,ul_bits,completes,timeouts,jumbled\n";
    for (const auto& r : report.series) {
        out << r.subframe << ',' << r.offered_bits << ',' << r.dl_bits << ',' << r.ul_bits << ','
            << r.completes << ',' << r.timeouts << ',' << r.jumbled << '\n';
    }
}

std::string report_summary_json(const EmulationReport& report)
{
    nlohmann::ordered_json j;
    j["complete"] = report.complete;
    if (!report.error.empty()) j["error"] = report.error;
    j["seed"] = report.seed;
    j["subframes"] = report.series.size();
    j["goodput_bps"] = report.goodput_bps;
    j["offered_bits"] = report.offered_bits;
    j["dropped_bits"] = report.dropped_bits;
    j["mean_offered_bps"] = report.mean_offered_bps();
    j["downlink"] = link_json(report.dl, report.mean_dl_bps());
    j["uplink"] = link_json(report.ul, report.mean_ul_bps());

    const std::uint64_t data_subframes = report.dl.messages_sent + report.ul.messages_sent;
    const std::uint64_t timeouts = report.dl.timeouts + report.ul.timeouts;
    j["timeout_fraction"] =
        data_subframes == 0 ? 0.0 : static_cast<double>(timeouts) / static_cast<double>(data_subframes);
    return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, std::span<const EmulationReport> reports)
{
    out << "goodput_bps,offered_mbps,dl_mbps,ul_mbps,timeouts,jumbled\n";
    for (const auto& r : reports) {
        out << r.goodput_bps << ',' << fixed(r.mean_offered_bps() / 1e6, 6) << ','
            << fixed(r.mean_dl_bps() / 1e6, 6) << ',' << fixed(r.mean_ul_bps() / 1e6, 6) << ','
            << r.dl.timeouts + r.ul.timeouts << ',' << r.dl.jumbled + r.ul.jumbled << '\n';
    }
}

}  // namespace fhsplit
