// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace chain2
{
/// 256-bit unsigned integer. Every arithmetic operator wraps modulo 2^256.
class Word256
{
public:
    /// Little-endian 64-bit limbs: limbs[0] is the least significant.
    std::array<uint64_t, 4> limbs{};

    constexpr Word256() noexcept = default;
    constexpr Word256(uint64_t v) noexcept : limbs{v, 0, 0, 0} {}  // NOLINT(google-explicit-constructor)
    constexpr Word256(uint64_t l3, uint64_t l2, uint64_t l1, uint64_t l0) noexcept
      : limbs{l0, l1, l2, l3}
    {}

    static constexpr Word256 max() noexcept { return {~0ULL, ~0ULL, ~0ULL, ~0ULL}; }

    /// 2^n for n < 256; zero otherwise.
    static Word256 pow2(unsigned n) noexcept;

    constexpr bool is_zero() const noexcept
    {
        return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0;
    }
    constexpr explicit operator bool() const noexcept { return !is_zero(); }

    /// True when the value fits in 64 bits.
    constexpr bool fits_u64() const noexcept { return (limbs[1] | limbs[2] | limbs[3]) == 0; }
    constexpr uint64_t low64() const noexcept { return limbs[0]; }

    /// Index of the highest set bit plus one; 0 for zero.
    unsigned bit_length() const noexcept;
    bool bit(unsigned n) const noexcept { return n < 256 && ((limbs[n / 64] >> (n % 64)) & 1) != 0; }

    friend constexpr bool operator==(const Word256&, const Word256&) noexcept = default;
    friend constexpr std::strong_ordering operator<=>(const Word256& a, const Word256& b) noexcept
    {
        for (int i = 3; i >= 0; --i)
            if (a.limbs[i] != b.limbs[i])
                return a.limbs[i] <=> b.limbs[i];
        return std::strong_ordering::equal;
    }

    friend Word256 operator+(const Word256& a, const Word256& b) noexcept;
    friend Word256 operator-(const Word256& a, const Word256& b) noexcept;
    friend Word256 operator*(const Word256& a, const Word256& b) noexcept;
    /// Division by zero yields zero.
    friend Word256 operator/(const Word256& a, const Word256& b) noexcept;
    /// Modulo by zero yields zero.
    friend Word256 operator%(const Word256& a, const Word256& b) noexcept;

    friend Word256 operator&(const Word256& a, const Word256& b) noexcept;
    friend Word256 operator|(const Word256& a, const Word256& b) noexcept;
    friend Word256 operator~(const Word256& a) noexcept;
    friend Word256 operator<<(const Word256& a, unsigned n) noexcept;
    friend Word256 operator>>(const Word256& a, unsigned n) noexcept;

    Word256& operator+=(const Word256& o) noexcept { return *this = *this + o; }
    Word256& operator-=(const Word256& o) noexcept { return *this = *this - o; }

    /// Exactly 32 bytes, big-endian.
    std::array<uint8_t, 32> to_be_bytes() const noexcept;
    static Word256 from_be_bytes(BytesView bytes);  ///< At most 32 bytes, right-aligned.

    /// Word holding the address in its low 20 bytes.
    static Word256 from_address(const Address& a) noexcept;
    /// The low 20 bytes.
    Address to_address() const noexcept;
    Hash32 to_hash() const noexcept;
    static Word256 from_hash(const Hash32& h) noexcept;

    /// 0x-prefixed lowercase hex without leading zeros ("0x0" for zero).
    std::string hex() const;
    std::string decimal() const;

    /// Decimal, or hex when prefixed with 0x. Out-of-range input throws ParseError.
    static Word256 parse(std::string_view text);
};

/// Quotient and remainder in one pass; both zero when the divisor is zero.
std::pair<Word256, Word256> divmod(const Word256& a, const Word256& b) noexcept;

/// Arithmetic that reports overflow instead of wrapping.
std::optional<Word256> checked_add(const Word256& a, const Word256& b) noexcept;
std::optional<Word256> checked_sub(const Word256& a, const Word256& b) noexcept;
std::optional<Word256> checked_mul(const Word256& a, const Word256& b) noexcept;

}  // namespace chain2
