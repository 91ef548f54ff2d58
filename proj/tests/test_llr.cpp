// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fhsplit/llr.hpp"

using namespace fhsplit;

TEST_CASE("quantizer geometry")
{
    LlrQuantizer q8(8, 8.0);
    CHECK(q8.max_code() == 127);
    CHECK(q8.step() == doctest::Approx(8.0 / 127));
    LlrQuantizer q4(4, 2.0);
    CHECK(q4.max_code() == 7);
    CHECK(LlrQuantizer(2).max_code() == 1);
    CHECK(LlrQuantizer(16).max_code() == 32767);
    CHECK_THROWS_AS(LlrQuantizer(1), std::invalid_argument);
    CHECK_THROWS_AS(LlrQuantizer(17), std::invalid_argument);
    CHECK_THROWS_AS(LlrQuantizer(8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LlrQuantizer(8, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("quantize single values")
{
    LlrQuantizer q(4, 7.0);  // step 1
    CHECK(q.quantize_one(0.0) == 0);
    CHECK(q.quantize_one(-0.0) == 0);
    CHECK(q.quantize_one(0.49) == 0);
    CHECK(q.quantize_one(0.5) == 1);
    CHECK(q.quantize_one(-0.5) == -1);
    CHECK(q.quantize_one(3.2) == 3);
    CHECK(q.quantize_one(7.0) == 7);
    CHECK(q.quantize_one(100.0) == 7);
    CHECK(q.quantize_one(-100.0) == -7);
    CHECK(q.quantize_one(std::numeric_limits<double>::infinity()) == 7);
    CHECK_THROWS_AS(q.quantize_one(std::nan("")), std::domain_error);
}

TEST_CASE("round trip error is at most half a step")
{
    std::mt19937_64 rng(5);
    for (unsigned width : {4u, 5u, 8u}) {
        LlrQuantizer q(width, 8.0);
        std::uniform_real_distribution<float> dist(-12.0f, 12.0f);
        std::vector<float> llrs(10'000);
        for (auto& v : llrs) v = dist(rng);
        llrs[0] = 0.0f;
        auto codes = quantize_llr(llrs, q);
        auto back = dequantize_llr(codes, q);
        for (std::size_t i = 0; i < llrs.size(); ++i) {
            CHECK(std::abs(codes[i]) <= q.max_code());
            double clamped = std::clamp<double>(llrs[i], -8.0, 8.0);
            CHECK(std::abs(back[i] - clamped) <= q.step() / 2 + 1e-12);
            CHECK(codes[i] == q.quantize_one(llrs[i]));
        }
        CHECK(codes[0] == 0);
    }
}

TEST_CASE("quantization is monotone and odd")
{
    LlrQuantizer q(5, 8.0);
    std::int16_t prev = -q.max_code();
    for (double v = -9.0; v <= 9.0; v += 0.01) {
        std::int16_t c = q.quantize_one(v);
        CHECK(c >= prev);
        CHECK(q.quantize_one(-v) == -c);
        prev = c;
    }
}

TEST_CASE("vector quantize rejects NaN")
{
    LlrQuantizer q(8);
    std::vector<float> v{1.0f, std::nanf(""), 2.0f};
    CHECK_THROWS_AS(quantize_llr(v, q), std::domain_error);
}

TEST_CASE("dequantize range check")
{
    LlrQuantizer q(4);
    std::vector<std::int16_t> ok{-7, 0, 7};
    CHECK(dequantize_llr(ok, q).size() == 3);
    std::vector<std::int16_t> bad{8};
    CHECK_THROWS_AS(dequantize_llr(bad, q), std::out_of_range);
    std::vector<std::int16_t> neg{-8};
    CHECK_THROWS_AS(dequantize_llr(neg, q), std::out_of_range);
}

TEST_CASE("pack layout is MSB first two's complement")
{
    // 4-bit fields: 1, -1, 7, -8 -> 0001 1111 0111 1000
    std::vector<std::int16_t> codes{1, -1, 7, -8};
    auto packed = pack_soft_bits(codes, 4);
    CHECK(packed == std::vector<std::uint8_t>{0x1F, 0x78});
    // 5-bit fields: 3, -2 -> 00011 11110 (000000 pad)
    std::vector<std::int16_t> five{3, -2};
    CHECK(pack_soft_bits(five, 5) == std::vector<std::uint8_t>{0x1F, 0x80});
    CHECK(unpack_soft_bits(pack_soft_bits(five, 5), 2, 5) == five);
    CHECK(packed_size(3, 5) == 2);
    CHECK(packed_size(0, 8) == 0);
    CHECK(packed_size(8, 5) == 5);
}

TEST_CASE("pack and unpack round trip")
{
    std::mt19937_64 rng(6);
    for (unsigned width = 2; width <= 16; ++width) {
        const std::int32_t max = (1 << (width - 1)) - 1;
        for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 63u, 1000u}) {
            std::vector<std::int16_t> codes(n);
            for (auto& c : codes) c = static_cast<std::int16_t>(static_cast<std::int32_t>(rng() % (2 * max + 1)) - max);
            auto packed = pack_soft_bits(codes, width);
            CHECK(packed.size() == packed_size(n, width));
            CHECK(unpack_soft_bits(packed, n, width) == codes);
        }
    }
    std::vector<std::uint8_t> short_buf(1);
    CHECK_THROWS_AS(unpack_soft_bits(short_buf, 3, 8), std::invalid_argument);
}
