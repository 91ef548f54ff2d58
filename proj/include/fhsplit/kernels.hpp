// SPDX-License-Identifier: Apache-2.0
//
// Bulk kernels of the soft-bit and payload path. Each kernel exists twice:
// serial:: is the reference, omp:: is the OpenMP version used at runtime.
// Both must produce identical output for identical input; the pseudorandom
// generators are counter based so the result does not depend on the
// thread count.
#pragma once

#include <cstdint>
#include <span>

#include "fhsplit/llr.hpp"

namespace fhsplit::kernels {

/// Stateless 64-bit mix of a counter (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream)
{
    return mix64(seed ^ mix64(stream));
}

namespace serial {

/// out[i] is uniform in [-scale, +scale) and depends on (seed, stream, i) only.
void generate_llrs(std::uint64_t seed, std::uint64_t stream, std::span<float> out, float scale);
/// out.size() must equal in.size(). Throws std::domain_error on NaN.
void quantize(std::span<const float> in, const LlrQuantizer& q, std::span<std::int16_t> out);
/// out.size() must equal packed_size(in.size(), width).
void pack_codes(std::span<const std::int16_t> in, unsigned width, std::span<std::uint8_t> out);
void unpack_codes(std::span<const std::uint8_t> in, unsigned width, std::span<std::int16_t> out);
void fill_bytes(std::uint64_t seed, std::uint64_t stream, std::span<std::uint8_t> out);

}  // namespace serial

namespace omp {

void generate_llrs(std::uint64_t seed, std::uint64_t stream, std::span<float> out, float scale);
void quantize(std::span<const float> in, const LlrQuantizer& q, std::span<std::int16_t> out);
void pack_codes(std::span<const std::int16_t> in, unsigned width, std::span<std::uint8_t> out);
void unpack_codes(std::span<const std::uint8_t> in, unsigned width, std::span<std::int16_t> out);
void fill_bytes(std::uint64_t seed, std::uint64_t stream, std::span<std::uint8_t> out);

}  // namespace omp

}  // namespace fhsplit::kernels
