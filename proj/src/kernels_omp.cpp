// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <algorithm>

#include "kernels_common.hpp"

namespace fhsplit::kernels::omp {
namespace {

__extension__ using u128 = unsigned __int128;

using i64 = std::int64_t;

// Eight codes of width w bits fill exactly w bytes, so groups of eight can
// be packed independently.
constexpr std::size_t kGroup = 8;

void pack_group(const std::int16_t* codes, std::size_t n, unsigned width, std::uint8_t* out,
                std::size_t out_bytes)
{
    u128 acc = 0;
    const std::uint32_t mask = (1u << width) - 1;
    for (std::size_t k = 0; k < kGroup; ++k) {
        std::uint32_t field = k < n ? (static_cast<std::uint16_t>(codes[k]) & mask) : 0u;
        acc = (acc << width) | field;
    }
    // acc holds 8 * width bits, i.e. width bytes, MSB first.
    for (std::size_t b = 0; b < out_bytes; ++b) {
        out[b] = static_cast<std::uint8_t>(acc >> (8 * (width - 1 - b)));
    }
}

void unpack_group(const std::uint8_t* in, std::size_t in_bytes, unsigned width,
                  std::int16_t* codes, std::size_t n)
{
    u128 acc = 0;
    for (std::size_t b = 0; b < width; ++b) {
        acc = (acc << 8) | (b < in_bytes ? in[b] : 0u);
    }
    const std::uint32_t mask = (1u << width) - 1;
    for (std::size_t k = 0; k < n; ++k) {
        auto field = static_cast<std::uint32_t>(acc >> (width * (kGroup - 1 - k))) & mask;
        codes[k] = detail::sign_extend(field, width);
    }
}

}  // namespace

void generate_llrs(std::uint64_t seed, std::uint64_t stream, std::span<float> out, float scale)
{
    const std::uint64_t key = stream_key(seed, stream);
    const i64 n = static_cast<i64>(out.size());
    float* dst = out.data();
#pragma omp parallel for schedule(static)
    for (i64 i = 0; i < n; ++i) {
        dst[i] = detail::llr_at(key, static_cast<std::uint64_t>(i), scale);
    }
}

void quantize(std::span<const float> in, const LlrQuantizer& q, std::span<std::int16_t> out)
{
    detail::check_sizes(in.size() == out.size());
    const i64 n = static_cast<i64>(in.size());
    const float* src = in.data();
    std::int16_t* dst = out.data();
    const double clip = q.clip();
    const double step = q.step();
    const long max_code = q.max_code();
    bool saw_nan = false;
#pragma omp parallel for schedule(static) reduction(|| : saw_nan)
    for (i64 i = 0; i < n; ++i) {
        double v = src[i];
        if (std::isnan(v)) {
            saw_nan = true;
            dst[i] = 0;
            continue;
        }
        v = v < -clip ? -clip : (v > clip ? clip : v);
        long code = std::lround(v / step);
        code = code < -max_code ? -max_code : (code > max_code ? max_code : code);
        dst[i] = static_cast<std::int16_t>(code);
    }
    if (saw_nan) {
        throw std::domain_error("NaN LLR");
    }
}

void pack_codes(std::span<const std::int16_t> in, unsigned width, std::span<std::uint8_t> out)
{
    detail::check_width(width);
    detail::check_sizes(out.size() == packed_size(in.size(), width));
    const i64 groups = static_cast<i64>((in.size() + kGroup - 1) / kGroup);
    const std::size_t n = in.size();
#pragma omp parallel for schedule(static)
    for (i64 g = 0; g < groups; ++g) {
        std::size_t first = static_cast<std::size_t>(g) * kGroup;
        std::size_t count = std::min(kGroup, n - first);
        std::size_t offset = static_cast<std::size_t>(g) * width;
        std::size_t bytes = std::min<std::size_t>(width, out.size() - offset);
        pack_group(in.data() + first, count, width, out.data() + offset, bytes);
    }
}

void unpack_codes(std::span<const std::uint8_t> in, unsigned width, std::span<std::int16_t> out)
{
    detail::check_width(width);
    detail::check_sizes(in.size() >= packed_size(out.size(), width));
    const i64 groups = static_cast<i64>((out.size() + kGroup - 1) / kGroup);
    const std::size_t n = out.size();
#pragma omp parallel for schedule(static)
    for (i64 g = 0; g < groups; ++g) {
        std::size_t first = static_cast<std::size_t>(g) * kGroup;
        std::size_t count = std::min(kGroup, n - first);
        std::size_t offset = static_cast<std::size_t>(g) * width;
        std::size_t bytes = std::min<std::size_t>(width, in.size() - offset);
        unpack_group(in.data() + offset, bytes, width, out.data() + first, count);
    }
}

void fill_bytes(std::uint64_t seed, std::uint64_t stream, std::span<std::uint8_t> out)
{
    const std::uint64_t key = stream_key(seed, stream);
    const i64 words = static_cast<i64>(out.size() / 8);
    std::uint8_t* dst = out.data();
#pragma omp parallel for schedule(static)
    for (i64 w = 0; w < words; ++w) {
        std::uint64_t word = mix64(key + static_cast<std::uint64_t>(w));
        for (int b = 0; b < 8; ++b) {
            dst[w * 8 + b] = static_cast<std::uint8_t>(word >> (8 * b));
        }
    }
    if (std::size_t tail = out.size() % 8) {
        std::uint64_t word = mix64(key + out.size() / 8);
        for (std::size_t b = 0; b < tail; ++b) {
            dst[out.size() - tail + b] = static_cast<std::uint8_t>(word >> (8 * b));
        }
    }
}

}  // namespace fhsplit::kernels::omp
