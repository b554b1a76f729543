// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Arbitrary-precision reference for Word256 arithmetic. Test-only.

#include <chain2/word256.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <random>

namespace chain2::test
{
using BigInt = boost::multiprecision::cpp_int;

inline const BigInt& two_256()
{
    static const BigInt v = BigInt{1} << 256;
    return v;
}

inline BigInt to_big(const Word256& w)
{
    BigInt r = 0;
    for (int i = 3; i >= 0; --i)
        r = (r << 64) | BigInt{w.limbs[static_cast<size_t>(i)]};
    return r;
}

inline Word256 from_big(BigInt v)
{
    v %= two_256();
    if (v < 0)
        v += two_256();
    Word256 w;
    for (size_t i = 0; i < 4; ++i)
    {
        w.limbs[i] = static_cast<uint64_t>(v & BigInt{0xffffffffffffffffULL});
        v >>= 64;
    }
    return w;
}

/// Words biased towards edge shapes: small, near 2^256, powers of two, dense.
inline Word256 random_word(std::mt19937_64& rng)
{
    Word256 w;
    switch (rng() % 6)
    {
    case 0:
        w = Word256{rng() % 16};
        break;
    case 1:
        w = Word256::max() - Word256{rng() % 16};
        break;
    case 2:
        w = Word256::pow2(static_cast<unsigned>(rng() % 256));
        break;
    case 3:
        w = Word256{rng()};
        break;
    default:
        for (auto& l : w.limbs)
            l = rng();
        const unsigned bits = static_cast<unsigned>(rng() % 257);
        w = bits == 256 ? w : (w & (Word256::pow2(bits) - Word256{1}));
        break;
    }
    return w;
}

}  // namespace chain2::test
