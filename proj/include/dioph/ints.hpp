#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dioph {

using Int = long long;
using Wide = __int128;

class overflow_error : public std::runtime_error {
public:
    explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

inline Wide wide_add(Wide a, Wide b) {
    Wide r;
    if (__builtin_add_overflow(a, b, &r))
        throw overflow_error("128-bit addition overflow");
    return r;
}

inline Wide wide_mul(Wide a, Wide b) {
    Wide r;
    if (__builtin_mul_overflow(a, b, &r))
        throw overflow_error("128-bit multiplication overflow");
    return r;
}

/// base^exp with overflow checking; exp >= 0.
inline Wide wide_pow(Wide base, uint32_t exp) {
    Wide r = 1;
    for (uint32_t i = 0; i < exp; ++i)
        r = wide_mul(r, base);
    return r;
}

inline Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

/// Number of bits needed to represent v >= 0, i.e. ceil(log2(v+1)); 0 -> 0.
inline uint32_t bit_length(Wide v) {
    uint32_t bits = 0;
    while (v > 0) {
        ++bits;
        v >>= 1;
    }
    return bits;
}

/// ceil(log2 v) for v >= 1.
inline uint32_t ceil_log2(Wide v) {
    uint32_t b = bit_length(v - 1);
    return b;
}

inline std::string wide_to_string(Wide v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

} // namespace dioph
