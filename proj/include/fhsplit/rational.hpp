// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fhsplit {

/// Non-negative exact fraction, always kept in lowest terms.
///
/// Rates in this project are products of small integers, with the
/// oversampling factor as the only non-integral term. Keeping them exact
/// lets the model identities (rate_71 == rate_72 * n_ant and friends) be
/// checked with operator== instead of a tolerance.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::uint64_t numerator, std::uint64_t denominator = 1);

    /// Parses "3", "1.71" or "2048/1200". Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    std::uint64_t numerator() const { return num_; }
    std::uint64_t denominator() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Round-half-up of value / scale to an integer.
    std::uint64_t round_half_up(std::uint64_t scale = 1) const;

    std::string to_string() const;

    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator+(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 1;
};

}  // namespace fhsplit
