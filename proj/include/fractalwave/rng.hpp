#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace fractalwave::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// Stateless: output is a pure function of (counter, key), which is what makes
// the per-mode noise streams order-independent and reproducible.

struct Counter {
    uint32_t v[4] = {0, 0, 0, 0};
};

struct Key {
    uint32_t v[2] = {0, 0};
};

namespace detail {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

inline Counter round_once(Counter c, Key k) {
    constexpr uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(m0, c.v[0], hi0, lo0);
    mulhilo(m1, c.v[2], hi1, lo1);
    return Counter{{hi1 ^ c.v[1] ^ k.v[0], lo1, hi0 ^ c.v[3] ^ k.v[1], lo0}};
}

inline Key bump(Key k) {
    return Key{{k.v[0] + 0x9E3779B9u, k.v[1] + 0xBB67AE85u}};
}

} // namespace detail

inline Counter philox4x32_10(Counter c, Key k) {
    c = detail::round_once(c, k);
    for (int round = 1; round < 10; ++round) {
        k = detail::bump(k);
        c = detail::round_once(c, k);
    }
    return c;
}

/// Uniform double in (0,1), never hitting either endpoint. 52 bits keep the
/// +0.5 offset exactly representable at the top of the range.
inline double to_unit_double(uint32_t hi, uint32_t lo) {
    const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Exactly two standard normals per (seed, mode, step, replica) via one
/// Philox block and a Box-Muller transform.
inline std::pair<double, double> normal_pair(uint64_t seed, uint32_t mode, uint64_t step,
                                             uint32_t replica) {
    const Counter c{{mode, static_cast<uint32_t>(step), replica,
                     static_cast<uint32_t>(step >> 32)}};
    const Key k{{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)}};
    const Counter out = philox4x32_10(c, k);
    const double u1 = to_unit_double(out.v[0], out.v[1]);
    const double u2 = to_unit_double(out.v[2], out.v[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace fractalwave::rng
