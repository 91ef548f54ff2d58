// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "fhsplit/kernels.hpp"

using namespace fhsplit;
namespace serial = fhsplit::kernels::serial;
namespace par = fhsplit::kernels::omp;

namespace {

// Bit-string model of the packed layout.
std::vector<std::uint8_t> pack_oracle(const std::vector<std::int16_t>& codes, unsigned width)
{
    std::string bits;
    for (std::int16_t c : codes) {
        auto u = static_cast<std::uint16_t>(c);
        for (int b = static_cast<int>(width) - 1; b >= 0; --b) bits.push_back((u >> b) & 1 ? '1' : '0');
    }
    while (bits.size() % 8) bits.push_back('0');
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < bits.size(); i += 8) {
        out.push_back(static_cast<std::uint8_t>(std::stoul(bits.substr(i, 8), nullptr, 2)));
    }
    return out;
}

std::int16_t sign_extend(std::uint32_t field, unsigned width)
{
    std::int32_t v = static_cast<std::int32_t>(field);
    if (field & (1u << (width - 1))) v -= static_cast<std::int32_t>(1u << width);
    return static_cast<std::int16_t>(v);
}

const std::size_t kSizes[] = {0, 1, 5, 8, 15, 16, 17, 1000, 4099, 100'003};

}  // namespace

TEST_CASE("mix64 is a fixed function")
{
    // splitmix64 outputs for seed 0, first two steps.
    CHECK(kernels::mix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(kernels::mix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
    CHECK(kernels::stream_key(1, 2) != kernels::stream_key(2, 1));
}

TEST_CASE("generate_llrs: serial equals omp and stays in range")
{
    for (std::size_t n : kSizes) {
        std::vector<float> a(n), b(n);
        serial::generate_llrs(42, 7, a, 12.0f);
        par::generate_llrs(42, 7, b, 12.0f);
        CHECK(a == b);
        for (float v : a) {
            CHECK(v >= -12.0f);
            CHECK(v < 12.0f);
        }
    }
    std::vector<float> s1(64), s2(64);
    serial::generate_llrs(42, 7, s1, 1.0f);
    serial::generate_llrs(42, 8, s2, 1.0f);
    CHECK(s1 != s2);
    // A prefix does not depend on the length.
    std::vector<float> shorter(10);
    serial::generate_llrs(42, 7, shorter, 1.0f);
    CHECK(std::equal(shorter.begin(), shorter.end(), s1.begin()));
}

TEST_CASE("generate_llrs is roughly uniform")
{
    std::vector<float> v(200'000);
    par::generate_llrs(3, 3, v, 1.0f);
    double sum = 0;
    int positive = 0;
    for (float x : v) {
        sum += x;
        positive += x > 0;
    }
    CHECK(std::abs(sum / v.size()) < 0.01);
    CHECK(std::abs(positive / double(v.size()) - 0.5) < 0.01);
}

TEST_CASE("quantize: serial equals omp")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<float> dist(-20.0f, 20.0f);
    for (unsigned width : {2u, 4u, 5u, 8u, 12u, 16u}) {
        LlrQuantizer q(width, 8.0);
        for (std::size_t n : kSizes) {
            std::vector<float> in(n);
            for (auto& x : in) x = dist(rng);
            std::vector<std::int16_t> a(n), b(n);
            serial::quantize(in, q, a);
            par::quantize(in, q, b);
            CHECK(a == b);
            for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == q.quantize_one(in[i]));
        }
    }
    LlrQuantizer q(8);
    std::vector<float> nan_in(1000, 1.0f);
    nan_in[777] = std::nanf("");
    std::vector<std::int16_t> out(1000);
    CHECK_THROWS_AS(serial::quantize(nan_in, q, out), std::domain_error);
    CHECK_THROWS_AS(par::quantize(nan_in, q, out), std::domain_error);
    std::vector<std::int16_t> wrong(3);
    CHECK_THROWS_AS(par::quantize(nan_in, q, wrong), std::invalid_argument);
}

TEST_CASE("pack/unpack: serial equals omp equals the bit-string model")
{
    std::mt19937_64 rng(9);
    for (unsigned width = 1; width <= 16; ++width) {
        for (std::size_t n : kSizes) {
            if (n > 5000 && width % 3) continue;
            std::vector<std::int16_t> codes(n);
            for (auto& c : codes) {
                auto field = static_cast<std::uint32_t>(rng()) & ((1u << width) - 1);
                c = sign_extend(field, width);
            }
            std::vector<std::uint8_t> a(packed_size(n, width)), b(a.size());
            serial::pack_codes(codes, width, a);
            par::pack_codes(codes, width, b);
            CHECK(a == b);
            if (n <= 5000) CHECK(a == pack_oracle(codes, width));
            std::vector<std::int16_t> ua(n), ub(n);
            serial::unpack_codes(a, width, ua);
            par::unpack_codes(a, width, ub);
            CHECK(ua == codes);
            CHECK(ub == codes);
        }
    }
    std::vector<std::int16_t> codes(10);
    std::vector<std::uint8_t> small(3);
    CHECK_THROWS_AS(par::pack_codes(codes, 8, small), std::invalid_argument);
    CHECK_THROWS_AS(serial::pack_codes(codes, 0, small), std::invalid_argument);
    CHECK_THROWS_AS(par::unpack_codes(small, 17, codes), std::invalid_argument);
}

TEST_CASE("fill_bytes: serial equals omp")
{
    for (std::size_t n : kSizes) {
        std::vector<std::uint8_t> a(n), b(n);
        serial::fill_bytes(5, 6, a);
        par::fill_bytes(5, 6, b);
        CHECK(a == b);
    }
    std::vector<std::uint8_t> x(100), y(100);
    serial::fill_bytes(5, 6, x);
    serial::fill_bytes(5, 7, y);
    CHECK(x != y);
}

TEST_CASE("omp kernels do not depend on the thread count")
{
    std::vector<std::uint8_t> ref(50'001);
    std::vector<float> llr_ref(50'001);
    omp_set_num_threads(1);
    par::fill_bytes(1, 2, ref);
    par::generate_llrs(1, 2, llr_ref, 3.0f);
    for (int threads : {2, 3, 8}) {
        omp_set_num_threads(threads);
        std::vector<std::uint8_t> got(ref.size());
        std::vector<float> llr(llr_ref.size());
        par::fill_bytes(1, 2, got);
        par::generate_llrs(1, 2, llr, 3.0f);
        CHECK(got == ref);
        CHECK(llr == llr_ref);
    }
}
