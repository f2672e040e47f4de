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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.h"
#include "shaplab/analysis.h"
#include "shaplab/errors.h"
#include "shaplab/shap.h"

using namespace shaplab;

namespace {

std::vector<double> chi(std::size_t m, std::uint32_t s) {
    std::vector<double> f(std::size_t{1} << m);
    for (std::size_t x = 0; x < f.size(); ++x) f[x] = std::popcount(x & s) % 2 ? -1.0 : 1.0;
    return f;
}

// Direct O(4^m) convolution with the noise kernel.
std::vector<double> convolve(const DenseDistribution& d, double delta) {
    const std::size_t m = d.bits();
    std::vector<double> out(d.size(), 0.0);
    for (std::size_t y = 0; y < d.size(); ++y)
        for (std::size_t x = 0; x < d.size(); ++x) {
            const auto k = std::popcount(x ^ y);
            out[y] += d[x] * std::pow(delta, k) * std::pow(1 - delta, static_cast<double>(m) - k);
        }
    return out;
}

std::vector<std::uint64_t> even_parity_set(std::size_t bits) {
    std::vector<std::uint64_t> s;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << bits); ++x) {
        if (std::popcount(x) % 2 == 0) s.push_back(x);
    }
    return s;
}

}  // namespace

TEST(Distribution, Validation) {
    EXPECT_THROW(DenseDistribution(2, {0.5, 0.5}), DomainError);
    EXPECT_THROW(DenseDistribution(1, {1.5, -0.5}), DomainError);
    EXPECT_THROW(DenseDistribution(1, {0.4, 0.4}), DomainError);
    EXPECT_THROW(DenseDistribution::uniform(25), ResourceError);
}

TEST(Entropy, Examples) {
    EXPECT_DOUBLE_EQ(entropy(DenseDistribution::uniform(6)), 6.0);
    EXPECT_DOUBLE_EQ(min_entropy(DenseDistribution::uniform(6)), 6.0);
    EXPECT_DOUBLE_EQ(entropy(DenseDistribution::point_mass(4, 3)), 0.0);
    EXPECT_DOUBLE_EQ(min_entropy(DenseDistribution::point_mass(4, 3)), 0.0);
    const DenseDistribution d(1, {0.75, 0.25});
    EXPECT_NEAR(entropy(d), 0.8112781244591328, 1e-15);
    EXPECT_NEAR(min_entropy(d), std::log2(4.0 / 3.0), 1e-15);
}

TEST(Entropy, MinEntropyAtMostShannon) {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_distribution(1 + rng.below(8), rng, trial % 2);
        ASSERT_LE(min_entropy(d), entropy(d) + 1e-12);
    }
}

TEST(Conditioning, MarginalAndCondition) {
    // x = (b0, b1) with b1 = b0: p(00) = p(11) = 1/2.
    const DenseDistribution d(2, {0.5, 0.0, 0.0, 0.5});
    EXPECT_DOUBLE_EQ(entropy(marginal(d, 0b01)), 1.0);
    EXPECT_DOUBLE_EQ(conditional_entropy(d, 0b01), 0.0);
    const auto c = condition(d, 0b01, 1);
    EXPECT_DOUBLE_EQ(c[1], 1.0);
    EXPECT_DOUBLE_EQ(conditional_min_entropy(d, 0b01, 0), 0.0);
    EXPECT_THROW(condition(DenseDistribution(2, {1.0, 0.0, 0.0, 0.0}), 0b01, 1), DomainError);
}

TEST(Conditioning, ChainRuleAndSubsets) {
    Rng rng(2);
    const auto d = random_distribution(6, rng);
    const auto tau = Permutation::random(6, rng);
    EXPECT_NEAR(prefix_chain_entropy(d, tau, 6), entropy(d), 1e-12);
    EXPECT_NEAR(subset_entropy_average(d, 6), entropy(d), 1e-12);
    EXPECT_NEAR(subset_entropy_average(DenseDistribution::uniform(6), 3), 3.0, 1e-12);
}

TEST(Wht, Examples) {
    const std::vector<double> one(256, 1.0);
    const auto s = wht(one);
    EXPECT_DOUBLE_EQ(s.at(0), 1.0);
    for (std::size_t k = 1; k < 256; ++k) ASSERT_DOUBLE_EQ(s.at(k), 0.0);
    const auto c = wht(chi(8, 0b10110001));
    for (std::size_t k = 0; k < 256; ++k) ASSERT_DOUBLE_EQ(c.at(k), k == 0b10110001 ? 1.0 : 0.0);
    EXPECT_THROW(wht(std::vector<double>(3, 1.0)), DomainError);
}

TEST(Wht, ParsevalAndInverse) {
    Rng rng(3);
    const auto f = random_function(10, rng);
    const auto s = wht(f);
    double e = 0.0;
    for (double v : f) e += v * v;
    EXPECT_NEAR(s.energy(), e / f.size(), 1e-9);
    const auto back = inverse_wht(s);
    for (std::size_t x = 0; x < f.size(); ++x) ASSERT_NEAR(back[x], f[x], 1e-12);
}

TEST(Noise, Endpoints) {
    Rng rng(4);
    const auto d = random_distribution(5, rng);
    const auto u = apply_noise(d, 0.5);
    for (std::size_t x = 0; x < u.size(); ++x) ASSERT_NEAR(u[x], 1.0 / 32, 1e-15);
    const auto same = apply_noise(d, 0.0);
    for (std::size_t x = 0; x < d.size(); ++x) ASSERT_EQ(same[x], d[x]);
    EXPECT_THROW(apply_noise(d, 0.6), DomainError);
}

TEST(Noise, MultiplierMatchesConvolution) {
    Rng rng(5);
    for (std::size_t m = 1; m <= 10; ++m) {
        const auto d = random_distribution(m, rng, m % 2);
        const double delta = 0.5 * rng.uniform();
        const auto a = apply_noise(d, delta);
        const auto b = convolve(d, delta);
        for (std::size_t x = 0; x < d.size(); ++x) ASSERT_NEAR(a[x], b[x], 1e-12);
    }
}

TEST(Noise, CompositionLaw) {
    Rng rng(6);
    const auto d = random_distribution(8, rng);
    const auto twice = apply_noise(apply_noise(d, 0.25), 0.25);
    const auto once = apply_noise(d, 0.375);
    for (std::size_t x = 0; x < d.size(); ++x) ASSERT_NEAR(twice[x], once[x], 1e-12);
}

TEST(Verifiers, ReportJsonRoundTrip) {
    const auto r = VerifierReport::make("x", 1.0, 2.5, {{"m", 3}});
    EXPECT_DOUBLE_EQ(r.slack, 1.5);
    EXPECT_TRUE(r.holds);
    const auto back = VerifierReport::from_json(nlohmann::ordered_json::parse(r.to_json_line()));
    EXPECT_EQ(back.name, "x");
    EXPECT_EQ(back.slack, r.slack);
    EXPECT_EQ(back.params, r.params);
    EXPECT_EQ(r.to_json_line(), R"({"name":"x","lhs":1.0,"rhs":2.5,"slack":1.5,"holds":true,"params":{"m":3}})");
    EXPECT_FALSE(VerifierReport::make("y", 1.0, 1.0 - 2e-9).holds);
    EXPECT_TRUE(VerifierReport::make("y", 1.0, 1.0 - 5e-10).holds);
}

TEST(Verifiers, MinEntropyChainExamples) {
    // Uniform on A x B with |A| = 4 (2 bits), |B| = 8 (3 bits).
    const auto u = DenseDistribution::uniform(5);
    const auto r = verify_minentropy_chain(u, 2, 0.0);
    EXPECT_NEAR(r[0].lhs, 3.0, 1e-12);
    EXPECT_NEAR(r[0].rhs, 3.0, 1e-12);
    EXPECT_TRUE(r[0].holds);
    EXPECT_TRUE(r[1].holds);
    const auto p = verify_minentropy_chain(DenseDistribution::point_mass(4, 9), 2, 1.0);
    EXPECT_DOUBLE_EQ(p[0].lhs, 0.0);
    EXPECT_DOUBLE_EQ(p[0].rhs, 0.0);
    EXPECT_TRUE(p[1].holds);
}

TEST(Verifiers, L1EntropyExamples) {
    Rng rng(7);
    const auto d = random_distribution(4, rng);
    EXPECT_DOUBLE_EQ(verify_l1_entropy(d, d).lhs, 0.0);
    const auto r = verify_l1_entropy(DenseDistribution::uniform(4), DenseDistribution::point_mass(4, 0));
    EXPECT_NEAR(r.lhs, 3.515625, 1e-12);
    EXPECT_NEAR(r.rhs, 8 * std::numbers::ln2 * 4, 1e-12);
    EXPECT_TRUE(r.holds);
}

TEST(Verifiers, HypercontractiveExamples) {
    const std::vector<double> c(64, -0.7);
    const auto r = verify_hypercontractive(c, 1.5, 3.0);
    EXPECT_NEAR(r.lhs, 0.7, 1e-12);
    EXPECT_NEAR(r.rhs, 0.7, 1e-12);
    const auto s = verify_hypercontractive(chi(6, 0b000111), 2.0, 4.0);
    EXPECT_NEAR(s.lhs, std::pow(1.0 / 3.0, 1.5), 1e-12);
    EXPECT_NEAR(s.rhs, 1.0, 1e-12);
    EXPECT_TRUE(s.holds);
    EXPECT_THROW(verify_hypercontractive(c, 3.0, 2.0), DomainError);
}

TEST(Verifiers, KklExamples) {
    // Constant-sign f: delta = 0 gives f^(0)^2 = beta^2, equality.
    std::vector<double> f(256, 0.0);
    for (std::size_t x = 0; x < 256; ++x) f[x] = (x & 3) == 0 ? 1.0 : 0.0;
    const auto r = verify_kkl(f, 0.0, 2.0);
    EXPECT_NEAR(r[0].lhs, r[0].rhs, 1e-12);
    // Scaled +-1 indicator of a codimension-2 subcube.
    for (std::size_t x = 0; x < 256; ++x) f[x] = (x & 3) == 0 ? ((x >> 2) & 1 ? -1.0 : 1.0) : 0.0;
    for (double d : {0.0, 0.25, 0.5, 1.0}) {
        const auto k = verify_kkl(f, d, 2.0);
        EXPECT_TRUE(k[0].holds);
        EXPECT_TRUE(k[1].holds);
    }
    EXPECT_THROW(verify_kkl(std::vector<double>(8, 0.0), 0.5, 2.0), DomainError);
}

TEST(Verifiers, KklSecondBoundSkippedWhenTLarge) {
    const std::vector<double> c(16, 1.0);  // alpha = beta, ln(alpha/beta) = 0
    const auto r = verify_kkl(c, 0.5, 2.0);
    EXPECT_TRUE(r[1].holds);
    EXPECT_TRUE(r[1].params.value("skipped", false));
}

TEST(Verifiers, NdistExamples) {
    const auto u = verify_ndist(DenseDistribution::uniform(9));
    EXPECT_NEAR(u[0].params["delta"].get<double>(), 0.0, 1e-12);
    EXPECT_TRUE(u[0].holds);
    const auto p = verify_ndist(DenseDistribution::even_parity(8));
    const double delta = p[0].params["delta"].get<double>();
    EXPECT_GT(delta, 0.0);
    EXPECT_LT(delta, std::exp2(-8.0));
    EXPECT_TRUE(p[0].holds);
    EXPECT_TRUE(p[1].holds);
}

TEST(Verifiers, LhypExamples) {
    const auto u = verify_lhyp(DenseDistribution::uniform(6));
    EXPECT_NEAR(u[0].lhs, 0.0, 1e-12);
    EXPECT_NEAR(u[0].rhs, 0.0, 1e-12);
    EXPECT_TRUE(u[0].holds);
    const auto p = verify_lhyp(DenseDistribution::point_mass(6, 21));
    EXPECT_NEAR(p[0].lhs, 1.0, 1e-12);
    EXPECT_NEAR(p[0].rhs, 45.0, 1e-12);
    EXPECT_TRUE(p[1].holds);
}

TEST(PairwiseXorDeficit, Examples) {
    EXPECT_NEAR(pairwise_xor_deficit(DenseDistribution::uniform(6), 0b111100, 0b000011), 0.0, 1e-12);
    EXPECT_NEAR(pairwise_xor_deficit(DenseDistribution::point_mass(6, 5), 0b111111, 0), 1.0, 1e-12);
    EXPECT_NEAR(pairwise_xor_deficit(DenseDistribution::even_parity(6), 0b111111, 0), 0.0, 1e-12);
    EXPECT_THROW(pairwise_xor_deficit(DenseDistribution::uniform(4), 0b0001, 0), DomainError);
    EXPECT_THROW(pairwise_xor_deficit(DenseDistribution::uniform(4), 0b0011, 0b0010), DomainError);
}

TEST(ShiftXor, RotateMatchesBitString) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const auto x = BitString::random(n, rng);
        const std::size_t i = rng.below(n);
        ASSERT_EQ(rotate_index(x.low_word(), i, n), cyclic_shift(x, ShiftIndex{i}).low_word());
    }
}

TEST(Rectangle, FullRectangleHasRatioOne) {
    const std::size_t n = 3;
    RectanglePair rect{n, {}, {}};
    for (std::uint64_t x = 0; x < 64; ++x) {
        rect.a.push_back(x);
        rect.b.push_back(x);
    }
    const auto b = rectangle_bias(rect);
    EXPECT_EQ(b.mu0_mass, 1);
    EXPECT_EQ(b.mu1_mass, 1);
    EXPECT_EQ(b.ratio, 1);
}

TEST(Rectangle, SingletonAtZero) {
    const auto b = rectangle_bias({3, {0}, {0}});
    mpq_class mu0(1, 4096);
    EXPECT_EQ(b.mu0_mass, mu0);
    // 2^-9 (5/8)^3, identical at every shift.
    mpq_class mu1(125, 512 * 512);
    mu1.canonicalize();
    EXPECT_EQ(b.mu1_mass, mu1);
    EXPECT_THROW(rectangle_bias({7, {0}, {0}}), ResourceError);
    EXPECT_THROW(rectangle_bias({3, {}, {0}}), DomainError);
}

TEST(Rectangle, MassMatchesBruteForceDensitySum) {
    Rng rng(9);
    const std::size_t n = 3;
    RectanglePair rect{n, {}, {}};
    for (int k = 0; k < 20; ++k) rect.a.push_back(rng.below(64));
    for (int k = 0; k < 15; ++k) rect.b.push_back(rng.below(64));
    const auto b = rectangle_bias(rect);
    std::sort(rect.a.begin(), rect.a.end());
    rect.a.erase(std::unique(rect.a.begin(), rect.a.end()), rect.a.end());
    std::sort(rect.b.begin(), rect.b.end());
    rect.b.erase(std::unique(rect.b.begin(), rect.b.end()), rect.b.end());
    mpq_class sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto mass = oracle::planted_pushforward(n, i);
        for (auto a : rect.a)
            for (auto bb : rect.b) sum += mass.at(oracle::Key{a & 7, a >> 3, bb & 7, bb >> 3});
    }
    sum /= 3;
    EXPECT_EQ(b.mu1_mass, sum);
}

TEST(Rectangle, EntropyConditionExamples) {
    for (std::size_t n : {4, 5, 6}) {
        std::vector<std::uint64_t> full(std::size_t{1} << (2 * n));
        std::iota(full.begin(), full.end(), 0);
        EXPECT_NEAR(rectangle_entropy_condition(full, n), static_cast<double>(n), 1e-12);
        const double parity = rectangle_entropy_condition(even_parity_set(2 * n), n);
        EXPECT_LE(static_cast<double>(n) - parity, std::exp2(-static_cast<double>(n)));
    }
}

TEST(Rectangle, LiteralPrefixFixingHasNoDeficit) {
    // Fixing x2's first ceil(sqrt(9)) = 3 bits leaves x1 uniform, so the XOR
    // stays uniform at every shift.
    const std::size_t n = 9;
    std::vector<std::uint64_t> a;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << 18); ++x) {
        if (((x >> n) & 0b111) == 0) a.push_back(x);
    }
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(entropy(apply_noise(shift_xor_distribution(a, n, i), 0.25)), 9.0, 1e-9);
    }
}

TEST(Rectangle, DifferenceCoverFixingHasDeficitAtEveryShift) {
    // x1 fixed on {1,2,3} and x2 fixed on {1,4,7}: every shift maps some
    // fixed x1 position onto a fixed x2 position, so one XOR bit is constant
    // before noise and biased 1/2 after it.
    const std::size_t n = 9;
    const std::uint64_t m1 = 0b000000111, m2 = 0b001001001;
    std::vector<std::uint64_t> a;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << 18); ++x) {
        if ((x & m1) == 0 && ((x >> n) & m2) == 0) a.push_back(x);
    }
    const double floor = 1.0 - binary_entropy(0.25);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = entropy(apply_noise(shift_xor_distribution(a, n, i), 0.25));
        EXPECT_GE(9.0 - h, floor - 1e-9) << i;
    }
}

TEST(Lbound, Examples) {
    const auto u = lbound_evaluator(DenseDistribution::uniform(8));
    EXPECT_NEAR(u.delta, 0.0, 1e-12);
    EXPECT_TRUE(u.consistent);
    const auto p = lbound_evaluator(DenseDistribution::even_parity(12));
    EXPECT_LT(p.delta, std::exp2(-6.0));
    EXPECT_TRUE(p.consistent);
    for (std::size_t s = 1; s <= 4; ++s) {
        std::vector<std::uint64_t> support;
        // Fix the first s coordinates of both X1 and X2: shift 0 sees a
        // constant XOR on them.
        const std::uint64_t low = (std::uint64_t{1} << s) - 1;
        const std::uint64_t fixed = low | low << 4;
        for (std::uint64_t x = 0; x < 256; ++x) {
            if ((x & fixed) == 0) support.push_back(x);
        }
        const auto ev = lbound_evaluator(DenseDistribution::uniform_on(8, support));
        EXPECT_TRUE(ev.condition_met);
        EXPECT_TRUE(ev.consistent);
        EXPECT_NEAR(ev.min_entropy, 8.0 - 2.0 * s, 1e-12);
    }
}
