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


#include "shaplab/bits.h"

#include <algorithm>
#include <bit>
#include <numeric>

#include "shaplab/errors.h"

namespace shaplab {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

// Moves every bit s positions towards higher indices; bits pushed past the
// end of the buffer are dropped.
std::vector<std::uint64_t> shift_up(std::span<const std::uint64_t> w, std::size_t s) {
    std::vector<std::uint64_t> r(w.size(), 0);
    const std::size_t ws = s / kWordBits;
    const std::size_t bs = s % kWordBits;
    for (std::size_t k = ws; k < w.size(); ++k) {
        std::uint64_t v = w[k - ws] << bs;
        if (bs != 0 && k > ws) {
            v |= w[k - ws - 1] >> (kWordBits - bs);
        }
        r[k] = v;
    }
    return r;
}

std::vector<std::uint64_t> shift_down(std::span<const std::uint64_t> w, std::size_t s) {
    std::vector<std::uint64_t> r(w.size(), 0);
    const std::size_t ws = s / kWordBits;
    const std::size_t bs = s % kWordBits;
    for (std::size_t k = 0; k + ws < w.size(); ++k) {
        std::uint64_t v = w[k + ws] >> bs;
        if (bs != 0 && k + ws + 1 < w.size()) {
            v |= w[k + ws + 1] << (kWordBits - bs);
        }
        r[k] = v;
    }
    return r;
}

void check_same_length(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw DomainError("bit string length mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    }
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitString::BitString(std::size_t n) : n_(n), words_(word_count(n), 0) {}

BitString BitString::from_string(std::string_view bits) {
    BitString x(bits.size());
    for (std::size_t p = 0; p < bits.size(); ++p) {
        if (bits[p] != '0' && bits[p] != '1') {
            throw DomainError("bit string may only contain '0' and '1'");
        }
        x.set_bit0(p, bits[p] == '1');
    }
    return x;
}

BitString BitString::from_hex(std::size_t n, std::string_view hex) {
    const std::size_t digits = (n + 3) / 4;
    if (hex.size() != digits) {
        throw DomainError("hex form of a " + std::to_string(n) + "-bit string needs " +
                          std::to_string(digits) + " digits, got " + std::to_string(hex.size()));
    }
    BitString x(n);
    for (std::size_t d = 0; d < digits; ++d) {
        const int v = hex_value(hex[d]);
        if (v < 0) {
            throw DomainError("invalid hex digit '" + std::string(1, hex[d]) + "'");
        }
        for (int k = 3; k >= 0; --k) {
            // Value bit b (0 = least significant) belongs to position n - b.
            const std::size_t b = 4 * (digits - 1 - d) + static_cast<std::size_t>(k);
            const bool on = (v >> k) & 1;
            if (b >= n) {
                if (on) throw DomainError("hex value has bits beyond the string length");
                continue;
            }
            x.set_bit0(n - 1 - b, on);
        }
    }
    return x;
}

BitString BitString::from_word(std::size_t n, std::uint64_t value) {
    if (n > kWordBits) throw DomainError("from_word supports at most 64 bits");
    BitString x(n);
    if (n > 0) {
        x.words_[0] = value;
        x.clear_tail();
    }
    return x;
}

BitString BitString::from_words(std::size_t n, std::vector<std::uint64_t> words) {
    if (words.size() != word_count(n)) throw DomainError("word count does not match string length");
    BitString x;
    x.n_ = n;
    x.words_ = std::move(words);
    x.clear_tail();
    return x;
}

BitString BitString::random(std::size_t n, Rng& rng) {
    BitString x(n);
    for (auto& w : x.words_) w = rng.next_u64();
    x.clear_tail();
    return x;
}

bool BitString::get(std::size_t pos) const {
    if (pos < 1 || pos > n_) throw DomainError("position " + std::to_string(pos) + " outside 1.." + std::to_string(n_));
    return bit0(pos - 1);
}

void BitString::set(std::size_t pos, bool v) {
    if (pos < 1 || pos > n_) throw DomainError("position " + std::to_string(pos) + " outside 1.." + std::to_string(n_));
    set_bit0(pos - 1, v);
}

void BitString::flip(std::size_t pos) { set(pos, !get(pos)); }

std::size_t BitString::weight() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

BitString& BitString::operator^=(const BitString& o) {
    check_same_length(*this, o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
}

BitString BitString::operator~() const {
    BitString r = *this;
    for (auto& w : r.words_) w = ~w;
    r.clear_tail();
    return r;
}

std::string BitString::to_string() const {
    std::string s(n_, '0');
    for (std::size_t p = 0; p < n_; ++p) {
        if (bit0(p)) s[p] = '1';
    }
    return s;
}

std::string BitString::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t digits = (n_ + 3) / 4;
    std::string s(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
        int v = 0;
        for (int k = 3; k >= 0; --k) {
            const std::size_t b = 4 * (digits - 1 - d) + static_cast<std::size_t>(k);
            if (b < n_ && bit0(n_ - 1 - b)) v |= 1 << k;
        }
        s[d] = kDigits[v];
    }
    return s;
}

void BitString::clear_tail() {
    const std::size_t rem = n_ % kWordBits;
    if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

BitString cyclic_shift(const BitString& x, ShiftIndex i) {
    const std::size_t n = x.size();
    if (i.value >= n) {
        throw DomainError("shift index " + std::to_string(i.value) + " outside [0," + std::to_string(n) + ")");
    }
    if (i.value == 0) return x;
    // 0-indexed: position p moves to (p + i) mod n.
    auto hi = shift_up(x.words(), i.value);
    auto lo = shift_down(x.words(), n - i.value);
    for (std::size_t k = 0; k < hi.size(); ++k) hi[k] |= lo[k];
    return BitString::from_words(n, std::move(hi));
}

std::size_t xor_weight(const BitString& x, const BitString& y) {
    check_same_length(x, y);
    std::size_t c = 0;
    const auto a = x.words();
    const auto b = y.words();
    for (std::size_t k = 0; k < a.size(); ++k) c += static_cast<std::size_t>(std::popcount(a[k] ^ b[k]));
    return c;
}

BitString noise_sample(const BitString& x, double delta, Rng& rng) {
    if (!(delta >= 0.0 && delta <= 0.5)) {
        throw DomainError("noise rate must lie in [0, 1/2]");
    }
    if (delta == 0.0) return x;
    BitString z = delta == 0.5 ? BitString::random(x.size(), rng) : BitString(x.size());
    if (delta < 0.5) {
        for (std::size_t p = 0; p < x.size(); ++p) {
            if (rng.bernoulli(delta)) z.set_bit0(p, true);
        }
    }
    return x ^ z;
}

BitString restrict(const BitString& x, std::span<const std::size_t> positions) {
    std::vector<std::size_t> sorted(positions.begin(), positions.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw DomainError("restriction set contains a repeated position");
    }
    BitString out(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        out.set_bit0(k, x.get(sorted[k]));
    }
    return out;
}

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (auto v : map_) {
        if (v >= map_.size() || seen[v]) throw DomainError("position map is not a permutation");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return Permutation(std::move(m));
}

Permutation Permutation::cyclic(std::size_t n, ShiftIndex i) {
    if (i.value >= n) throw DomainError("shift index outside [0, n)");
    std::vector<std::size_t> m(n);
    for (std::size_t p = 0; p < n; ++p) m[p] = (p + i.value) % n;
    return Permutation(std::move(m));
}

Permutation Permutation::random(std::size_t n, Rng& rng) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    for (std::size_t k = n; k > 1; --k) {
        std::swap(m[k - 1], m[rng.below(k)]);
    }
    return Permutation(std::move(m));
}

BitString Permutation::apply(const BitString& x) const {
    if (x.size() != map_.size()) throw DomainError("permutation size does not match string length");
    BitString out(x.size());
    for (std::size_t p = 0; p < map_.size(); ++p) {
        if (x.bit0(p)) out.set_bit0(map_[p], true);
    }
    return out;
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> m(map_.size());
    for (std::size_t p = 0; p < map_.size(); ++p) m[map_[p]] = p;
    return Permutation(std::move(m));
}

Permutation Permutation::after(const Permutation& first) const {
    if (first.size() != size()) throw DomainError("permutation size mismatch");
    std::vector<std::size_t> m(map_.size());
    for (std::size_t p = 0; p < map_.size(); ++p) m[p] = map_[first.map_[p]];
    return Permutation(std::move(m));
}

}  // namespace shaplab
