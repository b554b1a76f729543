// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/word256.hpp>

#include <algorithm>
#include <bit>

namespace chain2
{
namespace
{
using u128 = unsigned __int128;

struct AddResult
{
    Word256 value;
    bool carry;
};

AddResult add_with_carry(const Word256& a, const Word256& b) noexcept
{
    Word256 r;
    uint64_t carry = 0;
    for (size_t i = 0; i < 4; ++i)
    {
        const u128 s = u128{a.limbs[i]} + b.limbs[i] + carry;
        r.limbs[i] = static_cast<uint64_t>(s);
        carry = static_cast<uint64_t>(s >> 64);
    }
    return {r, carry != 0};
}

AddResult sub_with_borrow(const Word256& a, const Word256& b) noexcept
{
    Word256 r;
    uint64_t borrow = 0;
    for (size_t i = 0; i < 4; ++i)
    {
        const u128 d = u128{a.limbs[i]} - b.limbs[i] - borrow;
        r.limbs[i] = static_cast<uint64_t>(d);
        borrow = static_cast<uint64_t>(d >> 64) & 1;
    }
    return {r, borrow != 0};
}

/// Full 512-bit product split into low and high halves.
std::pair<Word256, Word256> mul_full(const Word256& a, const Word256& b) noexcept
{
    std::array<uint64_t, 8> r{};
    for (size_t i = 0; i < 4; ++i)
    {
        uint64_t carry = 0;
        for (size_t j = 0; j < 4; ++j)
        {
            const u128 t = u128{a.limbs[i]} * b.limbs[j] + r[i + j] + carry;
            r[i + j] = static_cast<uint64_t>(t);
            carry = static_cast<uint64_t>(t >> 64);
        }
        r[i + 4] = carry;
    }
    Word256 lo, hi;
    std::copy_n(r.begin(), 4, lo.limbs.begin());
    std::copy_n(r.begin() + 4, 4, hi.limbs.begin());
    return {lo, hi};
}
}  // namespace

Word256 Word256::pow2(unsigned n) noexcept
{
    Word256 r;
    if (n < 256)
        r.limbs[n / 64] = uint64_t{1} << (n % 64);
    return r;
}

unsigned Word256::bit_length() const noexcept
{
    for (int i = 3; i >= 0; --i)
        if (limbs[i] != 0)
            return static_cast<unsigned>(i) * 64 + static_cast<unsigned>(std::bit_width(limbs[i]));
    return 0;
}

Word256 operator+(const Word256& a, const Word256& b) noexcept
{
    return add_with_carry(a, b).value;
}

Word256 operator-(const Word256& a, const Word256& b) noexcept
{
    return sub_with_borrow(a, b).value;
}

Word256 operator*(const Word256& a, const Word256& b) noexcept
{
    return mul_full(a, b).first;
}

std::pair<Word256, Word256> divmod(const Word256& a, const Word256& b) noexcept
{
    if (b.is_zero())
        return {};
    if (a < b)
        return {Word256{}, a};

    if (b.fits_u64())
    {
        // Schoolbook division by a single limb.
        Word256 q;
        u128 rem = 0;
        for (int i = 3; i >= 0; --i)
        {
            const u128 cur = (rem << 64) | a.limbs[static_cast<size_t>(i)];
            q.limbs[static_cast<size_t>(i)] = static_cast<uint64_t>(cur / b.low64());
            rem = cur % b.low64();
        }
        return {q, Word256{static_cast<uint64_t>(rem)}};
    }

    // Shift-subtract over the bit-length difference.
    const unsigned shift = a.bit_length() - b.bit_length();
    Word256 d = b << shift;
    Word256 r = a;
    Word256 q;
    for (int i = static_cast<int>(shift); i >= 0; --i)
    {
        if (r >= d)
        {
            r = r - d;
            q.limbs[static_cast<size_t>(i) / 64] |= uint64_t{1} << (static_cast<unsigned>(i) % 64);
        }
        d = d >> 1;
    }
    return {q, r};
}

Word256 operator/(const Word256& a, const Word256& b) noexcept
{
    return divmod(a, b).first;
}

Word256 operator%(const Word256& a, const Word256& b) noexcept
{
    return divmod(a, b).second;
}

Word256 operator&(const Word256& a, const Word256& b) noexcept
{
    Word256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs[i] = a.limbs[i] & b.limbs[i];
    return r;
}

Word256 operator|(const Word256& a, const Word256& b) noexcept
{
    Word256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs[i] = a.limbs[i] | b.limbs[i];
    return r;
}

Word256 operator~(const Word256& a) noexcept
{
    Word256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs[i] = ~a.limbs[i];
    return r;
}

Word256 operator<<(const Word256& a, unsigned n) noexcept
{
    if (n >= 256)
        return {};
    Word256 r;
    const unsigned limb_shift = n / 64;
    const unsigned bit_shift = n % 64;
    for (unsigned i = 3; i < 4 && i >= limb_shift; --i)
    {
        uint64_t v = a.limbs[i - limb_shift] << bit_shift;
        if (bit_shift != 0 && i > limb_shift)
            v |= a.limbs[i - limb_shift - 1] >> (64 - bit_shift);
        r.limbs[i] = v;
    }
    return r;
}

Word256 operator>>(const Word256& a, unsigned n) noexcept
{
    if (n >= 256)
        return {};
    Word256 r;
    const unsigned limb_shift = n / 64;
    const unsigned bit_shift = n % 64;
    for (unsigned i = 0; i + limb_shift < 4; ++i)
    {
        uint64_t v = a.limbs[i + limb_shift] >> bit_shift;
        if (bit_shift != 0 && i + limb_shift + 1 < 4)
            v |= a.limbs[i + limb_shift + 1] << (64 - bit_shift);
        r.limbs[i] = v;
    }
    return r;
}

std::array<uint8_t, 32> Word256::to_be_bytes() const noexcept
{
    std::array<uint8_t, 32> out{};
    for (size_t i = 0; i < 32; ++i)
        out[31 - i] = static_cast<uint8_t>(limbs[i / 8] >> (8 * (i % 8)));
    return out;
}

Word256 Word256::from_be_bytes(BytesView bytes)
{
    if (bytes.size() > 32)
        throw ParseError("word wider than 32 bytes");
    Word256 r;
    const size_t n = bytes.size();
    for (size_t i = 0; i < n; ++i)
        r.limbs[i / 8] |= uint64_t{bytes[n - 1 - i]} << (8 * (i % 8));
    return r;
}

Word256 Word256::from_address(const Address& a) noexcept
{
    return from_be_bytes(a.view());
}

Address Word256::to_address() const noexcept
{
    const auto be = to_be_bytes();
    Address a;
    std::copy(be.begin() + 12, be.end(), a.bytes.begin());
    return a;
}

Hash32 Word256::to_hash() const noexcept
{
    return Hash32{{to_be_bytes()}};
}

Word256 Word256::from_hash(const Hash32& h) noexcept
{
    return from_be_bytes(h.view());
}

std::string Word256::hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    if (is_zero())
        return "0x0";
    std::string s;
    for (int i = static_cast<int>((bit_length() + 3) / 4) - 1; i >= 0; --i)
        s.push_back(digits[(limbs[static_cast<size_t>(i) / 16] >> (4 * (static_cast<size_t>(i) % 16))) & 0xf]);
    return "0x" + s;
}

std::string Word256::decimal() const
{
    if (is_zero())
        return "0";
    std::string s;
    Word256 v = *this;
    static const Word256 chunk{10'000'000'000'000'000'000ULL};  // 10^19
    while (!v.is_zero())
    {
        auto [q, r] = divmod(v, chunk);
        auto part = std::to_string(r.low64());
        if (!q.is_zero())
            part.insert(0, 19 - part.size(), '0');
        s.insert(0, part);
        v = q;
    }
    return s;
}

Word256 Word256::parse(std::string_view text)
{
    if (text.empty())
        throw ParseError("empty number");
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    {
        auto digits = text.substr(2);
        while (digits.size() > 1 && digits.front() == '0')
            digits.remove_prefix(1);
        if (digits.size() > 64)
            throw ParseError("hex literal exceeds 256 bits: " + std::string(text));
        Word256 r;
        for (char c : digits)
        {
            unsigned d;
            if (c >= '0' && c <= '9')
                d = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f')
                d = static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                d = static_cast<unsigned>(c - 'A' + 10);
            else
                throw ParseError("invalid hex digit in " + std::string(text));
            r = (r << 4) | Word256{d};
        }
        return r;
    }

    Word256 r;
    for (char c : text)
    {
        if (c < '0' || c > '9')
            throw ParseError("invalid decimal literal: " + std::string(text));
        auto scaled = checked_mul(r, Word256{10});
        auto next = scaled ? checked_add(*scaled, Word256{static_cast<uint64_t>(c - '0')}) : std::nullopt;
        if (!next)
            throw ParseError("decimal literal exceeds 256 bits: " + std::string(text));
        r = *next;
    }
    return r;
}

std::optional<Word256> checked_add(const Word256& a, const Word256& b) noexcept
{
    const auto [v, carry] = add_with_carry(a, b);
    if (carry)
        return std::nullopt;
    return v;
}

std::optional<Word256> checked_sub(const Word256& a, const Word256& b) noexcept
{
    const auto [v, borrow] = sub_with_borrow(a, b);
    if (borrow)
        return std::nullopt;
    return v;
}

std::optional<Word256> checked_mul(const Word256& a, const Word256& b) noexcept
{
    const auto [lo, hi] = mul_full(a, b);
    if (!hi.is_zero())
        return std::nullopt;
    return lo;
}

}  // namespace chain2
