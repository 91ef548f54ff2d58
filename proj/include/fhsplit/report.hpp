// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "fhsplit/emulation.hpp"

namespace fhsplit {

/// Columns: subframe,offered_bits,dl_bits,ul_bits,completes,timeouts,jumbled
void write_report_csv(std::ostream& out, const EmulationReport& report);

/// Aggregate rates and per-direction totals as a JSON object.
std::string report_summary_json(const EmulationReport& report);

/// Plot data, one row per run: goodput_bps,offered_mbps,dl_mbps,ul_mbps,
/// timeouts,jumbled.
void write_sweep_csv(std::ostream& out, std::span<const EmulationReport> reports);

}  // namespace fhsplit
