// Copyright 2026 The shaplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shaplab/rng.h"

namespace shaplab {

/// Cyclic shift amount. Validated against the string length at use.
struct ShiftIndex {
    std::size_t value = 0;

    constexpr ShiftIndex() = default;
    constexpr explicit ShiftIndex(std::size_t v) : value(v) {}
    friend constexpr bool operator==(ShiftIndex, ShiftIndex) = default;
};

/// Fixed-length binary string, packed into 64-bit words.
///
/// Positions are 1-indexed at the public surface (`get`, `set`, `restrict`);
/// internally position p lives at bit (p-1) % 64 of word (p-1) / 64. Bits past
/// the length in the last word are kept zero.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t n);

    /// Parses a string of '0'/'1' characters, position 1 first.
    static BitString from_string(std::string_view bits);
    /// Parses the big-endian hex form produced by `to_hex`.
    static BitString from_hex(std::size_t n, std::string_view hex);
    /// Low n bits of `value`, position j holding bit (j-1).
    static BitString from_word(std::size_t n, std::uint64_t value);
    static BitString random(std::size_t n, Rng& rng);
    /// Takes packed words directly; bits past n are cleared.
    static BitString from_words(std::size_t n, std::vector<std::uint64_t> words);

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t pos) const;
    void set(std::size_t pos, bool v);
    void flip(std::size_t pos);

    /// 0-indexed access for hot loops inside the library.
    bool bit0(std::size_t p) const { return (words_[p >> 6] >> (p & 63)) & 1U; }
    void set_bit0(std::size_t p, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (p & 63);
        if (v) {
            words_[p >> 6] |= m;
        } else {
            words_[p >> 6] &= ~m;
        }
    }

    std::size_t weight() const;
    std::span<const std::uint64_t> words() const { return words_; }
    /// First 64 positions as an integer (position j at bit j-1).
    std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

    BitString& operator^=(const BitString& o);
    friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }
    BitString operator~() const;
    friend bool operator==(const BitString&, const BitString&) = default;

    std::string to_string() const;
    /// ceil(n/4) lowercase hex digits of sum_j x_j 2^(n-j); position 1 is the
    /// most significant bit.
    std::string to_hex() const;

private:
    void clear_tail();

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// sigma_i(x): output position sigma_i(j) holds x_j, where
/// sigma_i(j) = i + j if i + j <= n and i + j - n otherwise. O(n/64).
BitString cyclic_shift(const BitString& x, ShiftIndex i);

/// Hamming weight of x XOR y.
std::size_t xor_weight(const BitString& x, const BitString& y);

/// x XOR Z with Z having independent Bernoulli(delta) bits, delta in [0, 1/2].
BitString noise_sample(const BitString& x, double delta, Rng& rng);

/// x_S: the bits of x at the 1-indexed positions in S, in increasing order.
BitString restrict(const BitString& x, std::span<const std::size_t> positions);

/// An arbitrary permutation tau of {1..n}, stored 0-indexed as a position map:
/// tau(x) places x_p at position tau(p).
class Permutation {
public:
    explicit Permutation(std::vector<std::size_t> map);

    static Permutation identity(std::size_t n);
    static Permutation cyclic(std::size_t n, ShiftIndex i);
    static Permutation random(std::size_t n, Rng& rng);

    std::size_t size() const { return map_.size(); }
    /// Image of 0-indexed position p.
    std::size_t operator()(std::size_t p) const { return map_[p]; }

    BitString apply(const BitString& x) const;
    Permutation inverse() const;
    /// (*this) after `first`.
    Permutation after(const Permutation& first) const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> map_;
};

}  // namespace shaplab
