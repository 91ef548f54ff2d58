// SPDX-License-Identifier: Apache-2.0
//
// Plain-text configuration: one "key = value" pair per line, '#' starts a
// comment, blank lines are ignored. The same format serves cell profiles
// and emulation scenarios; see README.md for the key list.
#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fhsplit/split_models.hpp"

namespace fhsplit {

/// Parsed key/value pairs with bookkeeping for unknown-key detection.
class KeyValues {
public:
    /// Throws ConfigError("line N", ...) on a malformed or duplicate line.
    static KeyValues parse(std::string_view text);
    static KeyValues load(const std::filesystem::path& path);

    bool contains(std::string_view key) const;
    /// Marks the key as consumed. Returns nullptr when absent.
    const std::string* take(std::string_view key);

    std::uint64_t take_uint(std::string_view key, std::uint64_t fallback);
    double take_double(std::string_view key, double fallback);
    std::string take_string(std::string_view key, std::string fallback);

    /// Throws ConfigError for the first key nobody consumed.
    void reject_unconsumed() const;

    const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, std::string, std::less<>> entries_;
    std::set<std::string, std::less<>> consumed_;
};

std::vector<std::string> preset_names();
/// Built-in profile text; throws ConfigError for an unknown name.
std::string_view preset_text(std::string_view name);

/// Applies the cell keys found in kv over base, honoring a "preset" key
/// as the starting point when present. Consumes only cell keys.
CellParams take_cell_params(KeyValues& kv, CellParams base = {});

CellConfig preset_config(std::string_view name);
/// Loads a cell profile file; unknown keys are an error.
CellConfig load_cell_config(const std::filesystem::path& path);
CellConfig parse_cell_config(std::string_view text);

/// Canonical key = value rendering of a configuration.
std::string to_key_values(const CellConfig& cfg);

}  // namespace fhsplit
