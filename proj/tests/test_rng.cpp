#include <doctest.h>

#include <cmath>
#include <vector>

#include "fractalwave/rng.hpp"

using namespace fractalwave::rng;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Random123 reference test vectors (kat_vectors)
    {
        const Counter out = philox4x32_10({{0, 0, 0, 0}}, {{0, 0}});
        CHECK(out.v[0] == 0x6627e8d5u);
        CHECK(out.v[1] == 0xe169c58du);
        CHECK(out.v[2] == 0xbc57ac4cu);
        CHECK(out.v[3] == 0x9b00dbd8u);
    }
    {
        const Counter out = philox4x32_10({{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}},
                                          {{0xffffffffu, 0xffffffffu}});
        CHECK(out.v[0] == 0x408f276du);
        CHECK(out.v[1] == 0x41c83b0eu);
        CHECK(out.v[2] == 0xa20bc7c6u);
        CHECK(out.v[3] == 0x6d5451fdu);
    }
    {
        const Counter out = philox4x32_10({{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}},
                                          {{0xa4093822u, 0x299f31d0u}});
        CHECK(out.v[0] == 0xd16cfe09u);
        CHECK(out.v[1] == 0x94fdccebu);
        CHECK(out.v[2] == 0x5001e420u);
        CHECK(out.v[3] == 0x24126ea1u);
    }
}

TEST_CASE("unit doubles stay strictly inside (0,1)") {
    CHECK(to_unit_double(0u, 0u) > 0.0);
    CHECK(to_unit_double(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("normal pairs are reproducible and stream-separated") {
    const auto a = normal_pair(42, 3, 7, 0);
    const auto b = normal_pair(42, 3, 7, 0);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(normal_pair(42, 4, 7, 0) != a);
    CHECK(normal_pair(42, 3, 8, 0) != a);
    CHECK(normal_pair(42, 3, 7, 1) != a);
    CHECK(normal_pair(43, 3, 7, 0) != a);
}

TEST_CASE("normal pairs pass coarse moment checks") {
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto [z1, z2] = normal_pair(2024, static_cast<uint32_t>(i), 0, 0);
        for (double z : {z1, z2}) {
            sum += z;
            sum2 += z * z;
            sum4 += z * z * z * z;
        }
    }
    const double count = 2.0 * n;
    CHECK(std::abs(sum / count) < 4.0 / std::sqrt(count));
    CHECK(sum2 / count == doctest::Approx(1.0).epsilon(0.01));
    CHECK(sum4 / count == doctest::Approx(3.0).epsilon(0.05));
}
