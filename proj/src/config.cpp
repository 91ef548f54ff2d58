// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace fhsplit {
namespace {

constexpr std::string_view kLte10 = R"(# LTE FDD 10 MHz: 50 PRB, 2 layers, 4 antenna ports, 16-QAM
bw_mhz = 10
n_sc = 600
n_layers = 2
n_ant = 4
mod_order = 4
iq_component_bits = 16
soft_bit_width = 8
symbols_per_second = 14000
oversampling_factor = 1.71
)";

constexpr std::string_view kLte20 = R"(# LTE FDD 20 MHz: 100 PRB, 2 layers, 4 antenna ports, 16-QAM
bw_mhz = 20
n_sc = 1200
n_layers = 2
n_ant = 4
mod_order = 4
iq_component_bits = 16
soft_bit_width = 8
symbols_per_second = 14000
oversampling_factor = 1.71
)";

// Peak-rate 100 MHz carrier. n_sc * symbols_per_second is calibrated to
// 84.375e6 resource elements per second per layer, which puts split 7.2 at
// 21.6 Gbit/s and uplink 7.3 (64-QAM, 5-bit soft bits) at 20.25 Gbit/s.
constexpr std::string_view kWorst100 = R"(# Worst case 100 MHz: 8 layers, 32 antenna ports, 64-QAM uplink, 5-bit soft bits
bw_mhz = 100
n_sc = 3000
n_layers = 8
n_ant = 32
mod_order = 6
iq_component_bits = 16
soft_bit_width = 5
symbols_per_second = 28125
oversampling_factor = 1.71
)";

std::string_view trim(std::string_view s)
{
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::uint32_t narrow32(std::uint64_t v, const char* field)
{
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw ConfigError(field, "out of range");
    }
    return static_cast<std::uint32_t>(v);
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text)
{
    KeyValues kv;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        std::string where = "line " + std::to_string(line_no);
        if (eq == std::string_view::npos) {
            throw ConfigError(where, "expected key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError(where, "empty key");
        }
        if (!kv.entries_.emplace(key, value).second) {
            throw ConfigError(where, "duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool KeyValues::contains(std::string_view key) const
{
    return entries_.find(key) != entries_.end();
}

const std::string* KeyValues::take(std::string_view key)
{
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    consumed_.emplace(it->first);
    return &it->second;
}

std::uint64_t KeyValues::take_uint(std::string_view key, std::uint64_t fallback)
{
    const std::string* v = take(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (v->empty() || ec != std::errc{} || ptr != v->data() + v->size()) {
        throw ConfigError(std::string(key), "expected a non-negative integer, got '" + *v + "'");
    }
    return out;
}

double KeyValues::take_double(std::string_view key, double fallback)
{
    const std::string* v = take(key);
    if (!v) return fallback;
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(*v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v->size()) {
        throw ConfigError(std::string(key), "expected a number, got '" + *v + "'");
    }
    return out;
}

std::string KeyValues::take_string(std::string_view key, std::string fallback)
{
    const std::string* v = take(key);
    return v ? *v : std::move(fallback);
}

void KeyValues::reject_unconsumed() const
{
    for (const auto& [key, value] : entries_) {
        if (!consumed_.contains(key)) {
            throw ConfigError(key, "unknown key");
        }
    }
}

std::vector<std::string> preset_names()
{
    return {"lte10", "lte20", "worst100"};
}

std::string_view preset_text(std::string_view name)
{
    if (name == "lte10") return kLte10;
    if (name == "lte20") return kLte20;
    if (name == "worst100") return kWorst100;
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

CellParams take_cell_params(KeyValues& kv, CellParams base)
{
    if (const std::string* name = kv.take("preset")) {
        KeyValues preset = KeyValues::parse(preset_text(*name));
        base = take_cell_params(preset, base);
    }
    CellParams p = base;
    p.bw_mhz = kv.take_double("bw_mhz", p.bw_mhz);
    p.n_sc = narrow32(kv.take_uint("n_sc", p.n_sc), "n_sc");
    p.n_layers = narrow32(kv.take_uint("n_layers", p.n_layers), "n_layers");
    p.n_ant = narrow32(kv.take_uint("n_ant", p.n_ant), "n_ant");
    p.mod_order = narrow32(kv.take_uint("mod_order", p.mod_order), "mod_order");
    p.iq_component_bits =
        narrow32(kv.take_uint("iq_component_bits", p.iq_component_bits), "iq_component_bits");
    p.soft_bit_width = narrow32(kv.take_uint("soft_bit_width", p.soft_bit_width), "soft_bit_width");
    p.symbols_per_second = kv.take_uint("symbols_per_second", p.symbols_per_second);
    if (const std::string* f = kv.take("oversampling_factor")) {
        try {
            p.oversampling_factor = Rational::parse(*f);
        } catch (const std::exception& e) {
            throw ConfigError("oversampling_factor", e.what());
        }
    }
    if (kv.contains("n_fft")) {
        p.n_fft = narrow32(kv.take_uint("n_fft", 0), "n_fft");
    }
    return p;
}

CellConfig preset_config(std::string_view name)
{
    return parse_cell_config(preset_text(name));
}

CellConfig parse_cell_config(std::string_view text)
{
    KeyValues kv = KeyValues::parse(text);
    CellParams p = take_cell_params(kv);
    kv.reject_unconsumed();
    return CellConfig(p);
}

CellConfig load_cell_config(const std::filesystem::path& path)
{
    KeyValues kv = KeyValues::load(path);
    CellParams p = take_cell_params(kv);
    kv.reject_unconsumed();
    return CellConfig(p);
}

std::string to_key_values(const CellConfig& cfg)
{
    std::ostringstream out;
    out << "bw_mhz = " << cfg.bw_mhz() << '\n'
        << "n_sc = " << cfg.n_sc() << '\n'
        << "n_layers = " << cfg.n_layers() << '\n'
        << "n_ant = " << cfg.n_ant() << '\n'
        << "mod_order = " << cfg.mod_order() << '\n'
        << "iq_component_bits = " << cfg.iq_component_bits() << '\n'
        << "soft_bit_width = " << cfg.soft_bit_width() << '\n'
        << "symbols_per_second = " << cfg.symbols_per_second() << '\n';
    if (cfg.n_fft()) {
        out << "n_fft = " << *cfg.n_fft() << '\n';
    } else {
        out << "oversampling_factor = " << cfg.oversampling_factor().to_string() << '\n';
    }
    return out.str();
}

}  // namespace fhsplit
