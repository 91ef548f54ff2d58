// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Straight loops, one element at a time; the packing
// routines go bit by bit so they share no code path with omp::.
#include <algorithm>

#include "kernels_common.hpp"

namespace fhsplit::kernels::serial {

void generate_llrs(std::uint64_t seed, std::uint64_t stream, std::span<float> out, float scale)
{
    const std::uint64_t key = stream_key(seed, stream);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = detail::llr_at(key, i, scale);
    }
}

void quantize(std::span<const float> in, const LlrQuantizer& q, std::span<std::int16_t> out)
{
    detail::check_sizes(in.size() == out.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = q.quantize_one(in[i]);
    }
}

void pack_codes(std::span<const std::int16_t> in, unsigned width, std::span<std::uint8_t> out)
{
    detail::check_width(width);
    detail::check_sizes(out.size() == packed_size(in.size(), width));
    std::fill(out.begin(), out.end(), std::uint8_t{0});
    std::size_t bit = 0;
    for (std::int16_t code : in) {
        auto field = static_cast<std::uint16_t>(code);
        for (unsigned b = width; b-- > 0; ++bit) {
            if ((field >> b) & 1u) {
                out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
            }
        }
    }
}

void unpack_codes(std::span<const std::uint8_t> in, unsigned width, std::span<std::int16_t> out)
{
    detail::check_width(width);
    detail::check_sizes(in.size() >= packed_size(out.size(), width));
    std::size_t bit = 0;
    for (auto& code : out) {
        std::uint32_t field = 0;
        for (unsigned b = 0; b < width; ++b, ++bit) {
            field = (field << 1) | ((in[bit / 8] >> (7 - bit % 8)) & 1u);
        }
        code = detail::sign_extend(field, width);
    }
}

void fill_bytes(std::uint64_t seed, std::uint64_t stream, std::span<std::uint8_t> out)
{
    const std::uint64_t key = stream_key(seed, stream);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t word = mix64(key + i / 8);
        out[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
    }
}

}  // namespace fhsplit::kernels::serial
