// SPDX-License-Identifier: Apache-2.0
#include "fhsplit/llr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fhsplit/kernels.hpp"

namespace fhsplit {

LlrQuantizer::LlrQuantizer(unsigned bit_width, double clip) : bit_width_(bit_width), clip_(clip)
{
    if (bit_width < 2 || bit_width > 16) {
        throw std::invalid_argument("soft-bit width must be in [2, 16], got " +
                                    std::to_string(bit_width));
    }
    if (!(std::isfinite(clip) && clip > 0.0)) {
        throw std::invalid_argument("LLR clip must be positive and finite");
    }
    max_code_ = (std::int32_t{1} << (bit_width - 1)) - 1;
    step_ = clip / max_code_;
}

std::int16_t LlrQuantizer::quantize_one(double v) const
{
    if (std::isnan(v)) {
        throw std::domain_error("NaN LLR");
    }
    double clamped = std::clamp(v, -clip_, clip_);
    long code = std::lround(clamped / step_);
    code = std::clamp<long>(code, -max_code_, max_code_);
    return static_cast<std::int16_t>(code);
}

std::vector<std::int16_t> quantize_llr(std::span<const float> values, const LlrQuantizer& q)
{
    std::vector<std::int16_t> codes(values.size());
    kernels::omp::quantize(values, q, codes);
    return codes;
}

std::vector<double> dequantize_llr(std::span<const std::int16_t> codes, const LlrQuantizer& q)
{
    std::vector<double> out;
    out.reserve(codes.size());
    for (std::int16_t c : codes) {
        if (c > q.max_code() || c < -q.max_code()) {
            throw std::out_of_range("code " + std::to_string(c) + " outside +-" +
                                    std::to_string(q.max_code()));
        }
        out.push_back(c * q.step());
    }
    return out;
}

std::vector<std::uint8_t> pack_soft_bits(std::span<const std::int16_t> codes, unsigned width)
{
    std::vector<std::uint8_t> out(packed_size(codes.size(), width));
    kernels::omp::pack_codes(codes, width, out);
    return out;
}

std::vector<std::int16_t> unpack_soft_bits(std::span<const std::uint8_t> bytes, std::size_t count,
                                           unsigned width)
{
    std::vector<std::int16_t> out(count);
    kernels::omp::unpack_codes(bytes, width, out);
    return out;
}

}  // namespace fhsplit
