// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/split_models.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace fhsplit {
namespace {

// Throws std::overflow_error when the product leaves 64 bits.
Rational product(std::initializer_list<std::uint64_t> factors)
{
    std::uint64_t acc = 1;
    for (std::uint64_t f : factors) {
        if (__builtin_mul_overflow(acc, f, &acc)) {
            throw std::overflow_error("bit rate exceeds 64 bits");
        }
    }
    return Rational(acc);
}

}  // namespace

std::string_view to_string(Direction d)
{
    return d == Direction::Downlink ? "DL" : "UL";
}

Direction parse_direction(std::string_view text)
{
    if (text == "DL" || text == "dl" || text == "downlink") return Direction::Downlink;
    if (text == "UL" || text == "ul" || text == "uplink") return Direction::Uplink;
    throw ConfigError("direction", "expected DL or UL, got '" + std::string(text) + "'");
}

std::string_view scheme_name(Modulation m)
{
    switch (m) {
    case Modulation::Qpsk: return "QPSK";
    case Modulation::Qam16: return "16QAM";
    case Modulation::Qam64: return "64QAM";
    case Modulation::Qam256: return "256QAM";
    }
    return "?";
}

Modulation modulation_from_order(unsigned order)
{
    switch (order) {
    case 2: return Modulation::Qpsk;
    case 4: return Modulation::Qam16;
    case 6: return Modulation::Qam64;
    case 8: return Modulation::Qam256;
    default:
        throw ConfigError("mod_order", "must be one of 2, 4, 6, 8 (got " + std::to_string(order) + ")");
    }
}

CellConfig::CellConfig(const CellParams& params)
    : p_(params), modulation_(modulation_from_order(params.mod_order))
{
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ConfigError(field, what);
    };
    require(std::isfinite(p_.bw_mhz) && p_.bw_mhz > 0, "bw_mhz", "must be positive");
    require(p_.n_sc > 0, "n_sc", "must be positive");
    require(p_.n_layers >= 1, "n_layers", "must be at least 1");
    require(p_.n_ant >= 1, "n_ant", "must be at least 1");
    require(p_.iq_component_bits >= 1, "iq_component_bits", "must be at least 1");
    require(p_.soft_bit_width >= 1, "soft_bit_width", "must be at least 1");
    require(p_.symbols_per_second > 0, "symbols_per_second", "must be positive");
    if (p_.n_fft) {
        require(*p_.n_fft > 0, "n_fft", "must be positive");
        oversampling_ = Rational(*p_.n_fft, p_.n_sc);
        require(oversampling_ >= Rational(1), "n_fft", "must be at least n_sc");
    } else {
        oversampling_ = p_.oversampling_factor;
        require(oversampling_ >= Rational(1), "oversampling_factor", "must be at least 1");
    }
    try {
        (void)rate_option8(*this);
        (void)rate_73_ul(*this);
    } catch (const std::overflow_error&) {
        throw ConfigError("n_sc", "cell dimensions overflow the 64-bit rate range");
    }
}

std::string BitRate::mbps_display() const
{
    std::uint64_t tenths = mbps_tenths();
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string_view split_label(SplitOption s)
{
    switch (s) {
    case SplitOption::Option8: return "8";
    case SplitOption::Option71: return "7.1";
    case SplitOption::Option72: return "7.2";
    case SplitOption::Option73DL:
    case SplitOption::Option73UL: return "7.3";
    }
    return "?";
}

std::string_view split_direction(SplitOption s)
{
    switch (s) {
    case SplitOption::Option73DL: return "DL";
    case SplitOption::Option73UL: return "UL";
    default: return "both";
    }
}

BitRate rate_71(const CellConfig& cfg)
{
    return BitRate(product({2, cfg.iq_component_bits(), cfg.n_sc(), cfg.n_ant(), cfg.n_layers(),
                            cfg.symbols_per_second()}));
}

BitRate rate_option8(const CellConfig& cfg)
{
    return BitRate(rate_71(cfg).exact() * cfg.oversampling_factor());
}

BitRate rate_72(const CellConfig& cfg)
{
    return BitRate(product(
        {2, cfg.iq_component_bits(), cfg.n_sc(), cfg.n_layers(), cfg.symbols_per_second()}));
}

BitRate rate_73_dl(const CellConfig& cfg)
{
    return BitRate(
        product({cfg.n_sc(), cfg.n_layers(), cfg.mod_order(), cfg.symbols_per_second()}));
}

BitRate rate_73_ul(const CellConfig& cfg)
{
    return BitRate(rate_73_dl(cfg).exact() * Rational(cfg.soft_bit_width()));
}

BitRate split_rate(const CellConfig& cfg, SplitOption split)
{
    switch (split) {
    case SplitOption::Option8: return rate_option8(cfg);
    case SplitOption::Option71: return rate_71(cfg);
    case SplitOption::Option72: return rate_72(cfg);
    case SplitOption::Option73DL: return rate_73_dl(cfg);
    case SplitOption::Option73UL: return rate_73_ul(cfg);
    }
    throw std::logic_error("unknown split option");
}

Rational efficiency_ratio(Direction direction, Modulation modulation,
                          std::uint32_t soft_bit_width, std::uint32_t iq_component_bits)
{
    if (iq_component_bits == 0) {
        throw std::invalid_argument("iq_component_bits must be positive");
    }
    std::uint64_t bits_per_re = bits_per_symbol(modulation);
    if (direction == Direction::Uplink) {
        if (soft_bit_width == 0) {
            throw std::invalid_argument("soft_bit_width must be positive");
        }
        bits_per_re *= soft_bit_width;
    }
    return Rational(2ULL * iq_component_bits, bits_per_re);
}

double expected_efficiency(std::span<const ModulationShare> mix, Direction direction,
                           std::uint32_t soft_bit_width, std::uint32_t iq_component_bits)
{
    if (mix.empty()) {
        throw std::invalid_argument("modulation mix is empty");
    }
    double total = 0.0;
    double weighted = 0.0;
    for (const auto& share : mix) {
        if (!(share.fraction >= 0.0)) {
            throw std::invalid_argument("modulation share must be non-negative");
        }
        total += share.fraction;
        weighted += share.fraction *
                    efficiency_ratio(direction, share.modulation, soft_bit_width, iq_component_bits)
                        .to_double();
    }
    // Allow for the rounding in percentages that add up to exactly 100.
    if (total > 1.0 + 1e-9) {
        throw std::invalid_argument("modulation shares sum above 1");
    }
    if (total <= 0.0) {
        throw std::invalid_argument("modulation shares sum to zero");
    }
    return weighted / total;
}

void LinkBudget::validate() const
{
    auto positive = [](double v, const char* field) {
        if (!(std::isfinite(v) && v > 0)) throw ConfigError(field, "must be positive");
    };
    positive(harq_rtt_ms, "harq_rtt_ms");
    positive(dl_processing_ms, "dl_processing_ms");
    positive(ul_processing_ms, "ul_processing_ms");
    positive(propagation_us_per_km, "propagation_us_per_km");
    if (dl_processing_ms > harq_rtt_ms) {
        throw ConfigError("dl_processing_ms", "exceeds the HARQ round trip");
    }
    if (ul_processing_ms > harq_rtt_ms) {
        throw ConfigError("ul_processing_ms", "exceeds the HARQ round trip");
    }
}

double max_fronthaul_distance_km(const LinkBudget& budget, Direction direction,
                                 double processing_ms)
{
    budget.validate();
    double deadline = budget.deadline_ms(direction);
    if (!(processing_ms >= 0.0)) {
        throw std::domain_error("processing time must be non-negative");
    }
    if (processing_ms > deadline) {
        throw std::domain_error("processing time " + std::to_string(processing_ms) +
                                " ms exceeds the " + std::string(to_string(direction)) +
                                " deadline of " + std::to_string(deadline) + " ms");
    }
    return (deadline - processing_ms) * 1000.0 / budget.propagation_us_per_km;
}

double propagation_delay_us(const LinkBudget& budget, double fibre_km)
{
    if (!(fibre_km >= 0.0)) {
        throw std::domain_error("fibre length must be non-negative");
    }
    return fibre_km * budget.propagation_us_per_km;
}

}  // namespace fhsplit
