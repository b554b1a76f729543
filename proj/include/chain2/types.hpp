// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chain2
{
using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

/// Raised when a textual hex/decimal rendering cannot be parsed.
class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Lowercase hex with a 0x prefix.
std::string to_hex(BytesView bytes);

/// Accepts an optional 0x prefix; odd-length or non-hex input throws ParseError.
Bytes from_hex(std::string_view hex);

template <size_t N>
struct FixedBytes
{
    std::array<uint8_t, N> bytes{};

    static constexpr size_t size = N;

    friend constexpr bool operator==(const FixedBytes& a, const FixedBytes& b) noexcept { return a.bytes == b.bytes; }
    friend constexpr std::strong_ordering operator<=>(const FixedBytes& a, const FixedBytes& b) noexcept
    {
        return std::lexicographical_compare_three_way(a.bytes.begin(), a.bytes.end(), b.bytes.begin(), b.bytes.end());
    }

    BytesView view() const noexcept { return {bytes.data(), N}; }
    std::string hex() const { return to_hex(view()); }
    bool is_zero() const noexcept
    {
        for (auto b : bytes)
            if (b != 0)
                return false;
        return true;
    }

    static FixedBytes from_view(BytesView v)
    {
        if (v.size() != N)
            throw ParseError("expected " + std::to_string(N) + " bytes, got " + std::to_string(v.size()));
        FixedBytes out;
        std::copy(v.begin(), v.end(), out.bytes.begin());
        return out;
    }

    static FixedBytes from_hex(std::string_view hex) { return from_view(chain2::from_hex(hex)); }
};

/// 20-byte account identifier. The zero address marks contract creation in a transaction.
struct Address : FixedBytes<20>
{
    static Address from_view(BytesView v) { return {FixedBytes<20>::from_view(v)}; }
    static Address from_hex(std::string_view hex) { return {FixedBytes<20>::from_hex(hex)}; }

    /// Address whose last 8 bytes hold `id` big-endian; handy for readable fixtures.
    static Address from_id(uint64_t id) noexcept;
};

struct Hash32 : FixedBytes<32>
{
    static Hash32 from_view(BytesView v) { return {FixedBytes<32>::from_view(v)}; }
    static Hash32 from_hex(std::string_view hex) { return {FixedBytes<32>::from_hex(hex)}; }
};

void append_be64(Bytes& out, uint64_t v);
void append(Bytes& out, BytesView v);

}  // namespace chain2
