// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "fhsplit/channel.hpp"
#include "fhsplit/config.hpp"
#include "fhsplit/emulation.hpp"

namespace fhsplit {

enum class ChannelMode { Simulated, Socket };

/// An emulation run or goodput sweep described in the key = value format.
/// Cell keys (and "preset") are shared with cell profiles.
struct Scenario {
    CellConfig cell{CellParams{}};
    TrafficProfile traffic;
    // Non-empty for a sweep; traffic.goodput_bps is then ignored.
    std::vector<std::uint64_t> goodput_sweep;
    Impairments impairments;
    EmulationOptions options;
    ChannelMode mode = ChannelMode::Simulated;
    UdpEndpoints endpoints;
    std::optional<std::uint64_t> seed;
};

/// Throws ConfigError on malformed values and unknown keys.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

ChannelMode parse_mode(std::string_view text);

}  // namespace fhsplit
