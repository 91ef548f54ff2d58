// SPDX-License-Identifier: Apache-2.0
//
// Closed-form fronthaul bandwidth models for functional splits 8, 7.1, 7.2
// and 7.3 (downlink hard bits, uplink soft bits), the 7.2-vs-7.3 efficiency
// ratios, and the HARQ-driven fronthaul distance budget.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fhsplit/rational.hpp"

namespace fhsplit {

enum class Direction { Downlink, Uplink };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

/// Bits per constellation symbol.
enum class Modulation : std::uint8_t { Qpsk = 2, Qam16 = 4, Qam64 = 6, Qam256 = 8 };

constexpr unsigned bits_per_symbol(Modulation m) { return static_cast<unsigned>(m); }
std::string_view scheme_name(Modulation m);
/// Throws ConfigError unless order is 2, 4, 6 or 8.
Modulation modulation_from_order(unsigned order);

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Raw cell parameters. Every field has the LTE 10 MHz default.
struct CellParams {
    double bw_mhz = 10.0;
    std::uint32_t n_sc = 600;
    std::uint32_t n_layers = 2;
    std::uint32_t n_ant = 4;
    std::uint32_t mod_order = 4;
    std::uint32_t iq_component_bits = 16;
    std::uint32_t soft_bit_width = 8;
    // 7 symbols per 0.5 ms slot with normal cyclic prefix.
    std::uint64_t symbols_per_second = 14'000;
    Rational oversampling_factor{171, 100};
    // When set, the oversampling factor becomes n_fft / n_sc.
    std::optional<std::uint32_t> n_fft;
};

/// Validated, immutable cell configuration.
class CellConfig {
public:
    /// Throws ConfigError naming the first offending field.
    explicit CellConfig(const CellParams& params);

    double bw_mhz() const { return p_.bw_mhz; }
    std::uint64_t n_sc() const { return p_.n_sc; }
    std::uint64_t n_layers() const { return p_.n_layers; }
    std::uint64_t n_ant() const { return p_.n_ant; }
    Modulation modulation() const { return modulation_; }
    std::uint64_t mod_order() const { return p_.mod_order; }
    std::uint64_t iq_component_bits() const { return p_.iq_component_bits; }
    std::uint64_t soft_bit_width() const { return p_.soft_bit_width; }
    std::uint64_t symbols_per_second() const { return p_.symbols_per_second; }
    std::optional<std::uint32_t> n_fft() const { return p_.n_fft; }
    const Rational& oversampling_factor() const { return oversampling_; }
    const CellParams& params() const { return p_; }

private:
    CellParams p_;
    Modulation modulation_;
    Rational oversampling_;
};

/// A bit rate in bit/s, held exactly.
class BitRate {
public:
    explicit BitRate(Rational bps) : bps_(bps) {}
    const Rational& exact() const { return bps_; }
    double bps() const { return bps_.to_double(); }
    double mbps() const { return bps_.to_double() / 1e6; }
    double gbps() const { return bps_.to_double() / 1e9; }
    /// Mbit/s rounded half-up to one decimal, returned in tenths.
    std::uint64_t mbps_tenths() const { return bps_.round_half_up(100'000); }
    /// Same as mbps_tenths(), formatted as "7354.4".
    std::string mbps_display() const;

    friend bool operator==(const BitRate&, const BitRate&) = default;
    friend auto operator<=>(const BitRate& a, const BitRate& b) { return a.bps_ <=> b.bps_; }

private:
    Rational bps_;
};

enum class SplitOption { Option8, Option71, Option72, Option73DL, Option73UL };

inline constexpr SplitOption kAllSplits[] = {SplitOption::Option8, SplitOption::Option71,
                                             SplitOption::Option72, SplitOption::Option73DL,
                                             SplitOption::Option73UL};

/// "8", "7.1", "7.2", "7.3", "7.3"
std::string_view split_label(SplitOption s);
/// "both" for the symmetric I/Q splits, otherwise "DL" / "UL".
std::string_view split_direction(SplitOption s);

/// Time-domain I/Q: rate_71 scaled by the oversampling factor.
BitRate rate_option8(const CellConfig& cfg);
/// Frequency-domain I/Q per antenna port: 2 * IQ * Nsc * Nant * Nlayers / Ts.
BitRate rate_71(const CellConfig& cfg);
/// Frequency-domain I/Q after port combining: 2 * IQ * Nsc * Nlayers / Ts.
BitRate rate_72(const CellConfig& cfg);
/// Downlink hard bits: Nsc * Nlayers * Om / Ts.
BitRate rate_73_dl(const CellConfig& cfg);
/// Uplink soft bits: Nsc * Nlayers * Om * Sbw / Ts.
BitRate rate_73_ul(const CellConfig& cfg);

BitRate split_rate(const CellConfig& cfg, SplitOption split);

/// rate_72 / rate_73 for one modulation, exact.
/// Downlink: 2*IQ / Om. Uplink: 2*IQ / (Om * Sbw). soft_bit_width is
/// ignored for the downlink.
Rational efficiency_ratio(Direction direction, Modulation modulation,
                          std::uint32_t soft_bit_width, std::uint32_t iq_component_bits = 16);

struct ModulationShare {
    Modulation modulation;
    double fraction;
};

/// Usage-weighted mean of efficiency_ratio over a modulation mix.
///
/// Fractions need not sum to one: the unreported remainder is excluded
/// and the reported shares are renormalized. Throws std::invalid_argument
/// on an empty mix, a negative fraction, a total above one, or a total of
/// zero.
double expected_efficiency(std::span<const ModulationShare> mix, Direction direction,
                           std::uint32_t soft_bit_width, std::uint32_t iq_component_bits = 16);

/// Timing budget of the HARQ loop.
struct LinkBudget {
    double harq_rtt_ms = 3.0;
    double dl_processing_ms = 1.0;
    double ul_processing_ms = 2.0;
    // Light in fibre at ~200 000 km/s.
    double propagation_us_per_km = 5.0;

    /// Throws ConfigError if a value is non-positive or a deadline exceeds
    /// the round trip.
    void validate() const;
    double deadline_ms(Direction d) const {
        return d == Direction::Downlink ? dl_processing_ms : ul_processing_ms;
    }
};

/// Fibre length the remaining time budget can cover once baseband
/// processing is done. The one-way propagation delay is charged once
/// against the direction's deadline.
///
/// Throws std::domain_error when processing_ms is negative or exceeds the
/// deadline.
double max_fronthaul_distance_km(const LinkBudget& budget, Direction direction,
                                 double processing_ms);

/// One-way propagation delay over fibre_km.
double propagation_delay_us(const LinkBudget& budget, double fibre_km);

}  // namespace fhsplit
