#pragma once

#include <cstdint>

#include "memwall/errors.hpp"

namespace memwall {

// Overflow-checked u64 arithmetic. FLOP/MOP totals reach 1e12+ at desk
// scale and grow with S^2, so every count multiplication goes through here.

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw OverflowError("count addition overflowed 64 bits");
    }
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw OverflowError("count multiplication overflowed 64 bits");
    }
    return r;
}

template <typename... Rest>
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, Rest... rest) {
    return checked_mul(checked_mul(a, b), static_cast<std::uint64_t>(rest)...);
}

template <typename... Rest>
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, Rest... rest) {
    return checked_add(checked_add(a, b), static_cast<std::uint64_t>(rest)...);
}

}  // namespace memwall
