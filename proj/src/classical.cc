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


#include "shaplab/classical.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "shaplab/errors.h"

namespace shaplab {

std::size_t SamplingConfig::sample_count() const {
    if (k) return std::min(*k, n);
    if (n <= 1) return n;
    const double nn = static_cast<double>(n);
    const auto kk = static_cast<std::size_t>(std::ceil(c * std::sqrt(nn * std::log(nn))));
    return std::clamp<std::size_t>(kk, 1, n);
}

void SamplingConfig::validate() const {
    if (n == 0) throw DomainError("sampling protocol needs n >= 1");
    if (k && (*k == 0 || *k > n)) throw DomainError("sample count k must lie in [1, n]");
    if (!k && !(c > 0.0)) throw DomainError("sample multiplier c must be positive");
    if (!(theta > 0.4 && theta < 7.0 / 15.0)) throw DomainError("threshold theta must lie in (2/5, 7/15)");
}

std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw DomainError("subset larger than ground set");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t b = a + static_cast<std::size_t>(rng.below(n - a));
        std::swap(idx[a], idx[b]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

SamplingOutcome run_sampling_protocol(const ShapInstance& inst, const SamplingConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::size_t n = cfg.n;
    if (inst.size() != n) throw DomainError("instance length differs from config n");
    const std::size_t k = cfg.sample_count();
    const auto s1 = sample_subset(n, k, rng);
    const auto s2 = sample_subset(n, k, rng);

    // Alice's message: x1 on S1, x2 on S2. Bob folds in his own bits.
    std::vector<std::int8_t> a_bit(n, -1);  // x1 ^ y1 where known
    for (auto j : s1) a_bit[j] = static_cast<std::int8_t>(inst.x1.bit0(j) ^ inst.y1.bit0(j));
    std::vector<std::uint8_t> b_bit(k);
    for (std::size_t q = 0; q < k; ++q) b_bit[q] = static_cast<std::uint8_t>(inst.x2.bit0(s2[q]) ^ inst.y2.bit0(s2[q]));

    SamplingOutcome out;
    out.cost_bits = 2ULL * k;
    out.min_estimate = 1.0;
    bool any_accept = false;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t hits = 0, ones = 0;
        for (std::size_t q = 0; q < k; ++q) {
            const std::size_t src = (s2[q] + n - i) % n;
            if (a_bit[src] < 0) continue;
            ++hits;
            ones += static_cast<std::size_t>(a_bit[src]) ^ b_bit[q];
        }
        const double est = hits == 0 ? 0.5 : static_cast<double>(ones) / static_cast<double>(hits);
        out.min_estimate = std::min(out.min_estimate, est);
        if (hits > 0 && static_cast<double>(ones) <= cfg.theta * static_cast<double>(hits) + 1e-12) any_accept = true;
    }
    out.answer = any_accept ? 1 : 0;
    return out;
}

double expected_collisions(std::size_t n, std::size_t k) {
    if (k > n) throw DomainError("k must not exceed n");
    if (n == 0) return 0.0;
    return static_cast<double>(k) * static_cast<double>(k) / static_cast<double>(n);
}

std::string sampling_csv_header() { return "n,k,theta,true_class,answer,min_west,cost_bits"; }

std::string sampling_csv_row(const SamplingConfig& cfg, PromiseClass true_class, const SamplingOutcome& out) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%s,%d,%.17g,%llu", cfg.n, cfg.sample_count(), cfg.theta,
                  to_string(true_class), out.answer, out.min_estimate,
                  static_cast<unsigned long long>(out.cost_bits));
    return buf;
}

}  // namespace shaplab
