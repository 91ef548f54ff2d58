// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fhsplit {
namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t narrow(u128 v)
{
    if (v > std::numeric_limits<std::uint64_t>::max()) {
        throw std::overflow_error("rational overflow");
    }
    return static_cast<std::uint64_t>(v);
}

u128 gcd128(u128 a, u128 b)
{
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational reduce(u128 num, u128 den)
{
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    u128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num), narrow(den));
}

std::uint64_t parse_digits(std::string_view s, std::string_view whole)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a non-negative decimal: '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

Rational::Rational(std::uint64_t numerator, std::uint64_t denominator)
{
    if (denominator == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    std::uint64_t g = std::gcd(numerator, denominator);
    num_ = numerator / (g ? g : 1);
    den_ = denominator / (g ? g : 1);
}

Rational Rational::parse(std::string_view text)
{
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return Rational(parse_digits(text.substr(0, slash), text),
                        parse_digits(text.substr(slash + 1), text));
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        return Rational(parse_digits(text, text));
    }
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() > 18) {
        throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
    }
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) {
        scale *= 10;
    }
    std::uint64_t ip = int_part.empty() ? 0 : parse_digits(int_part, text);
    std::uint64_t fp = frac_part.empty() ? 0 : parse_digits(frac_part, text);
    return reduce(static_cast<u128>(ip) * scale + fp, scale);
}

std::uint64_t Rational::round_half_up(std::uint64_t scale) const
{
    u128 den = static_cast<u128>(den_) * scale;
    return narrow((2 * static_cast<u128>(num_) + den) / (2 * den));
}

std::string Rational::to_string() const
{
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator*(const Rational& a, const Rational& b)
{
    return reduce(static_cast<u128>(a.num_) * b.num_, static_cast<u128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b.num_ == 0) {
        throw std::domain_error("rational division by zero");
    }
    return reduce(static_cast<u128>(a.num_) * b.den_, static_cast<u128>(a.den_) * b.num_);
}

Rational operator+(const Rational& a, const Rational& b)
{
    return reduce(static_cast<u128>(a.num_) * b.den_ + static_cast<u128>(b.num_) * a.den_,
                  static_cast<u128>(a.den_) * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    u128 lhs = static_cast<u128>(a.num_) * b.den_;
    u128 rhs = static_cast<u128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace fhsplit
