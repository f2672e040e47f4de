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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "shaplab/bits.h"
#include "shaplab/rng.h"

namespace shaplab {

/// One ShAp input: Alice holds (x1, x2), Bob holds (y1, y2).
struct ShapInstance {
    BitString x1, x2, y1, y2;

    ShapInstance() = default;
    ShapInstance(BitString x1_, BitString x2_, BitString y1_, BitString y2_);

    static ShapInstance zeros(std::size_t n);

    std::size_t size() const { return x1.size(); }

    /// `n=<int> x1=<hex> x2=<hex> y1=<hex> y2=<hex>`
    std::string to_text() const;
    static ShapInstance from_text(std::string_view line);

    friend bool operator==(const ShapInstance&, const ShapInstance&) = default;
};

enum class PromiseClass { Zero, One, Undefined };

const char* to_string(PromiseClass c);

/// |sigma_i(x1) ^ x2 ^ sigma_i(y1) ^ y2|
std::size_t shift_xor_weight(const ShapInstance& inst, ShiftIndex i);

/// Weights at every shift 0..n-1.
std::vector<std::size_t> shift_weights(const ShapInstance& inst);

/// Per-shift promise class: One when 15w <= 6n, Zero when 7n <= 15w <= 8n.
PromiseClass classify_weight(std::size_t w, std::size_t n);

/// ShAp_i for a single shift.
PromiseClass classify_shift(const ShapInstance& inst, ShiftIndex i);

/// ShAp: One if some shift is close, Zero if every shift is in the far band.
PromiseClass classify(const ShapInstance& inst);

/// Noise applied to the planted x1 in the mu1 samplers.
inline constexpr double kPlantedNoise = 3.0 / 8.0;

struct DistributionSpec {
    enum class Kind { Mu0, Mu1AtShift, Mu1, Mu };

    Kind kind = Kind::Mu;
    std::size_t n = 0;
    /// Only meaningful for Mu1AtShift.
    ShiftIndex shift{};
    /// Noise on x1 after planting. 3/8 by default; tests set 0 to get
    /// noiseless planted instances.
    double planted_noise = kPlantedNoise;

    static DistributionSpec mu0(std::size_t n) { return {Kind::Mu0, n, {}, kPlantedNoise}; }
    static DistributionSpec mu1_at_shift(std::size_t n, ShiftIndex i) { return {Kind::Mu1AtShift, n, i, kPlantedNoise}; }
    static DistributionSpec mu1(std::size_t n) { return {Kind::Mu1, n, {}, kPlantedNoise}; }
    static DistributionSpec mu(std::size_t n) { return {Kind::Mu, n, {}, kPlantedNoise}; }

    /// Parses "mu0", "mu1", "mu", "mu1@<i>".
    static DistributionSpec parse(std::string_view name, std::size_t n);
    std::string name() const;
};

ShapInstance sample(const DistributionSpec& spec, Rng& rng);

/// Noiseless planted instance: weight 0 at shift i.
ShapInstance sample_planted_noiseless(std::size_t n, ShiftIndex i, Rng& rng);

/// Exact density of the noisy planted distribution at shift i:
/// 2^(-3n) (3/8)^w (5/8)^(n-w), w = shift_xor_weight(inst, i).
mpq_class mu1_tilde_density(const ShapInstance& inst, ShiftIndex i);

/// Same density from its two-noise form: Pr[Z1 ^ Z2 = d] / 2^(3n) with
/// Z1, Z2 ~ T_{1/4} independent, d = sigma_i(x1)^x2^sigma_i(y1)^y2,
/// evaluated by summing over all (Z1, Z2). Exponential in n; n <= 10.
mpq_class mu1_tilde_density_two_noise(const ShapInstance& inst, ShiftIndex i);

/// Exact (3/8)^w (5/8)^(n-w) / 2^(3n) as a rational, by weight.
mpq_class mu1_tilde_density_by_weight(std::size_t n, std::size_t w);

}  // namespace shaplab
