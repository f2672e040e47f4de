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
#include <optional>
#include <string>
#include <vector>

#include "shaplab/rng.h"
#include "shaplab/shap.h"

namespace shaplab {

/// Shared-randomness one-way sampling protocol settings.
struct SamplingConfig {
    std::size_t n = 0;
    /// Positions sampled from each of x1 and x2. Derived from `c` when unset.
    std::optional<std::size_t> k;
    /// Answer 1 iff the smallest per-shift estimate is at most theta.
    double theta = 13.0 / 30.0;
    /// k = ceil(c * sqrt(n ln n)) when k is unset.
    double c = 6.0;

    static SamplingConfig for_n(std::size_t n) {
        SamplingConfig s;
        s.n = n;
        return s;
    }

    /// Effective k, clamped to n.
    std::size_t sample_count() const;
    void validate() const;
};

struct SamplingOutcome {
    int answer = 0;
    double min_estimate = 0.5;
    /// 2k: Alice's message; Bob sends nothing.
    std::uint64_t cost_bits = 0;
};

/// Alice sends x1 on a uniform k-subset S1 and x2 on a uniform k-subset S2
/// (chosen with shared randomness). For each shift i Bob averages
/// x1(j - i) ^ x2(j) ^ y1(j - i) ^ y2(j) over C_i = {j in S2 : j - i in S1},
/// using 1/2 for an empty C_i.
SamplingOutcome run_sampling_protocol(const ShapInstance& inst, const SamplingConfig& cfg, Rng& rng);

/// E|C_i| = k^2 / n for independent uniform k-subsets.
double expected_collisions(std::size_t n, std::size_t k);

/// Uniform k-subset of {0..n-1}, sorted.
std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, Rng& rng);

/// Header and row for the per-trial CSV: n,k,theta,true_class,answer,min_west,cost_bits
std::string sampling_csv_header();
std::string sampling_csv_row(const SamplingConfig& cfg, PromiseClass true_class, const SamplingOutcome& out);

}  // namespace shaplab
