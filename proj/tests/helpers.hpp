#pragma once

#include <string>

#include "dioph/encoding.hpp"
#include "dioph/poly.hpp"

namespace dioph::test {

inline DiophantineSystem three_quadrics() {
    return parse_system("vars x y z\n"
                        "bits 3\n"
                        "eq 3 x^2 + 2 y^2 + 5 z^2 = 40\n"
                        "eq 2 x y - 4 y z + 3 x z = 13\n"
                        "eq -x^2 + 5 y - 7 z = -6\n");
}

inline DiophantineSystem one_var(const std::string& body, uint32_t bits) {
    return parse_system("vars x\nbits " + std::to_string(bits) + "\n" + body + "\n");
}

/// Signed value held in a register window of a basis state.
inline Int window_value(uint64_t state, Span span) {
    uint64_t mask = span.width == 64 ? ~uint64_t(0) : (uint64_t(1) << span.width) - 1;
    uint64_t u = (state >> span.offset) & mask;
    if (span.width < 64 && ((u >> (span.width - 1)) & 1))
        return static_cast<Int>(u) - (Int(1) << span.width);
    return static_cast<Int>(u);
}

/// Writes a signed value into a register window of a basis state.
inline uint64_t set_window(uint64_t state, Span span, Int value) {
    uint64_t mask = span.width == 64 ? ~uint64_t(0) : (uint64_t(1) << span.width) - 1;
    uint64_t u = static_cast<uint64_t>(value) & mask;
    state &= ~(mask << span.offset);
    return state | (u << span.offset);
}

} // namespace dioph::test
