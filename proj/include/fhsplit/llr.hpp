// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fhsplit {

/// Uniform symmetric quantizer for soft bits (log-likelihood ratios).
///
/// LLRs are clamped to [-clip, +clip] and mapped to signed codes in
/// [-max_code, +max_code], max_code = 2^(bit_width-1) - 1. The most
/// negative two's-complement value is never produced, so the code set is
/// symmetric and 0 is exact.
class LlrQuantizer {
public:
    /// Throws std::invalid_argument unless 2 <= bit_width <= 16 and clip > 0.
    explicit LlrQuantizer(unsigned bit_width, double clip = 8.0);

    unsigned bit_width() const { return bit_width_; }
    double clip() const { return clip_; }
    std::int32_t max_code() const { return max_code_; }
    double step() const { return step_; }

    /// Single-value reference used by the kernels.
    std::int16_t quantize_one(double v) const;

private:
    unsigned bit_width_;
    double clip_;
    std::int32_t max_code_;
    double step_;
};

/// Throws std::domain_error on NaN input.
std::vector<std::int16_t> quantize_llr(std::span<const float> values, const LlrQuantizer& q);

/// code * step. Throws std::out_of_range for a code beyond +-max_code.
std::vector<double> dequantize_llr(std::span<const std::int16_t> codes, const LlrQuantizer& q);

/// Bytes needed to pack count codes of width bits each.
constexpr std::size_t packed_size(std::size_t count, unsigned width)
{
    return (count * width + 7) / 8;
}

/// Packs codes MSB-first as width-bit two's-complement fields.
std::vector<std::uint8_t> pack_soft_bits(std::span<const std::int16_t> codes, unsigned width);
std::vector<std::int16_t> unpack_soft_bits(std::span<const std::uint8_t> bytes, std::size_t count,
                                           unsigned width);

}  // namespace fhsplit
