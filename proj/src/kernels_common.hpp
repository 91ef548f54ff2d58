// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>

#include "fhsplit/kernels.hpp"

namespace fhsplit::kernels::detail {

inline float llr_at(std::uint64_t key, std::uint64_t index, float scale)
{
    // 24 random bits give a float in [0, 1) exactly.
    auto bits = static_cast<std::uint32_t>(mix64(key + index) >> 40);
    float unit = static_cast<float>(bits) * (1.0f / 16777216.0f);
    return scale * (2.0f * unit - 1.0f);
}

inline void check_width(unsigned width)
{
    if (width < 1 || width > 16) {
        throw std::invalid_argument("soft-bit field width must be in [1, 16]");
    }
}

inline void check_sizes(bool ok)
{
    if (!ok) {
        throw std::invalid_argument("kernel buffer sizes do not match");
    }
}

inline std::int16_t sign_extend(std::uint32_t field, unsigned width)
{
    std::uint32_t sign = 1u << (width - 1);
    return static_cast<std::int16_t>(static_cast<std::int32_t>(field ^ sign) -
                                     static_cast<std::int32_t>(sign));
}

}  // namespace fhsplit::kernels::detail
