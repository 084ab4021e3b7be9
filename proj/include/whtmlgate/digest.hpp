#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace whtmlgate {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ULL;

/// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
    std::uint64_t h = kFnvOffsetBasis;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= kFnvPrime;
    }
    return h;
}

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = kFnvOffsetBasis;
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= kFnvPrime;
    }
    return h;
}

/// Sixteen lowercase hex digits, zero padded.
std::string to_hex16(std::uint64_t value);

}  // namespace whtmlgate
