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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "shaplab/bits.h"
#include "shaplab/rng.h"

namespace shaplab {

// Coordinate convention for everything on the Boolean cube {0,1}^m: a point
// is an integer index x in [0, 2^m) and coordinate j (1-indexed) is bit j-1
// of x. Coordinate sets are bit masks. A bipartite distribution on
// {0,1}^(n+n) keeps X1 in the low n bits and X2 in the high n bits.

inline constexpr std::size_t kMaxCubeBits = 24;
inline constexpr double kVerifierTolerance = 1e-9;

/// Exact probability vector over {0,1}^m.
class DenseDistribution {
public:
    /// Validates m <= 24, length 2^m, non-negative entries summing to 1.
    DenseDistribution(std::size_t m, std::vector<double> p);

    static DenseDistribution uniform(std::size_t m);
    static DenseDistribution point_mass(std::size_t m, std::uint64_t x);
    /// Uniform over strings of even Hamming weight.
    static DenseDistribution even_parity(std::size_t m);
    /// Uniform over the given (distinct) support points.
    static DenseDistribution uniform_on(std::size_t m, std::span<const std::uint64_t> support);
    /// Normalizes non-negative weights.
    static DenseDistribution from_weights(std::size_t m, std::vector<double> w);

    std::size_t bits() const { return m_; }
    std::size_t size() const { return p_.size(); }
    double operator[](std::uint64_t x) const { return p_[x]; }
    std::span<const double> probs() const { return p_; }

private:
    std::size_t m_;
    std::vector<double> p_;
};

double binary_entropy(double p);

/// Shannon entropy in bits.
double entropy(const DenseDistribution& d);
/// -log2 max_x d(x).
double min_entropy(const DenseDistribution& d);

/// Distribution of the coordinates in `mask`, packed in increasing order.
DenseDistribution marginal(const DenseDistribution& d, std::uint32_t mask);
/// Distribution of the coordinates outside `fixed_mask` given the event that
/// the fixed coordinates equal `value` (read from the same bit positions).
/// Throws DomainError on a zero-probability event.
DenseDistribution condition(const DenseDistribution& d, std::uint32_t fixed_mask, std::uint64_t value);
/// H(X_rest | X_given).
double conditional_entropy(const DenseDistribution& d, std::uint32_t given_mask);
/// H_min(X_rest | X_fixed = value): min-entropy conditions on events only.
double conditional_min_entropy(const DenseDistribution& d, std::uint32_t fixed_mask, std::uint64_t value);

/// E over uniformly random size-k coordinate sets S of H(X_S), by full
/// enumeration of the C(m, k) sets.
double subset_entropy_average(const DenseDistribution& d, std::size_t k);

/// sum_{r<k} H(X_{tau(r)} | X_{tau(0)}, ..., X_{tau(r-1)}).
double prefix_chain_entropy(const DenseDistribution& d, const Permutation& tau, std::size_t k);

/// Fourier coefficients under the expectation inner product:
/// coeff[s] = E_x f(x) chi_s(x), chi_s(x) = (-1)^|x & s|.
struct FourierSpectrum {
    std::size_t m = 0;
    std::vector<double> coeff;

    double at(std::uint32_t s) const { return coeff[s]; }
    /// sum_s coeff[s]^2, equal to E f^2 by Parseval.
    double energy() const;
};

/// Fast Walsh-Hadamard transform, m 2^m operations.
FourierSpectrum wht(std::span<const double> f);
/// f(x) = sum_s coeff[s] chi_s(x).
std::vector<double> inverse_wht(const FourierSpectrum& spec);

/// (E_x |f(x)|^p)^(1/p); p = infinity gives max |f|.
double expectation_norm(std::span<const double> f, double p);
/// sum_x |a(x) - b(x)|, i.e. twice the total variation distance.
double l1_distance(const DenseDistribution& a, const DenseDistribution& b);

/// Distribution of X ^ Z with Z ~ T_delta, computed by damping the density's
/// Fourier coefficient at s by (1 - 2 delta)^|s|.
DenseDistribution apply_noise(const DenseDistribution& d, double delta);

/// Outcome of one numeric inequality check lhs <= rhs.
struct VerifierReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = true;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();

    static VerifierReport make(std::string name, double lhs, double rhs,
                               nlohmann::ordered_json params = nlohmann::ordered_json::object());

    nlohmann::ordered_json to_json() const;
    static VerifierReport from_json(const nlohmann::ordered_json& j);
    /// `{"name":..., "lhs":..., "rhs":..., "slack":..., "holds":..., "params":{...}}`
    std::string to_json_line() const;
};

/// Weak min-entropy chain rule on nu over (X1 = low `first_bits`, X2 = rest):
/// [0] H_min(nu) - H(X1) <= E_{Y1~nu} H_min(X2 | X1 = Y1)
/// [1] Pr_{Y1}[H_min(X2 | X1 = Y1) <= H_min(nu) - log|A| - Delta] <= 2^-Delta,
///     A = support of X1.
std::array<VerifierReport, 2> verify_minentropy_chain(const DenseDistribution& nu, std::size_t first_bits,
                                                      double big_delta);

/// |nu1 - nu2|_1^2 <= 8 ln 2 (m - min(H(nu1), H(nu2))).
VerifierReport verify_l1_entropy(const DenseDistribution& nu1, const DenseDistribution& nu2);

/// | sum_s ((p-1)/(q-1))^(|s|/2) f^(s) chi_s |_q <= |f|_p, 1 <= p <= q.
VerifierReport verify_hypercontractive(std::span<const double> f, double p, double q);

/// [0] sum_s delta^|s| f^(s)^2 <= alpha^2 (beta/alpha)^(2/(1+delta))
/// [1] sum_{|s|<=t} f^(s)^2 <= beta^2 (2e ln(alpha/beta) / t)^t, reported as
///     skipped (holds, params.skipped) when t > 2 ln(alpha/beta).
std::array<VerifierReport, 2> verify_kkl(std::span<const double> f, double delta, double t);

/// Noise-to-projection step with delta = n - H(T_{1/4}(nu)), K = ceil(2n/3),
/// W ~ Bin(n, 1/2):
/// [0] (E_{|S|=K} H(X_S) + n - K)(1 - Pr[W > K]) <= n - delta
/// [1] E_{|S|=K} H(X_S) <= K - delta + n Pr[W > K]
std::array<VerifierReport, 2> verify_ndist(const DenseDistribution& nu);

/// [0] E_{j1 != j2} [1 - H(X_j1 ^ X_j2)] <= (45 / n^2)(n - H_min(rho))^2
/// [1] max_{j1<j2} | |Pr[X_j1 = X_j2] - 1/2| - 2^(n-1) |rho^({j1,j2})| | <= 1e-10
std::array<VerifierReport, 2> verify_lhyp(const DenseDistribution& rho);

/// E_{j1 != j2 in I} [1 - H(Y_j1 ^ Y_j2 | Y_cond)]. `cond_mask` must be
/// disjoint from `pair_mask`; |I| >= 2.
double pairwise_xor_deficit(const DenseDistribution& rho, std::uint32_t pair_mask, std::uint32_t cond_mask);

/// sigma_i on n-bit cube indices (coordinate p moves to p + i mod n).
std::uint64_t rotate_index(std::uint64_t u, std::size_t i, std::size_t n);

/// Packs (x1, x2) into a 2n-bit cube index (x1 low). n <= 32.
std::uint64_t pack_pair(const BitString& x1, const BitString& x2);

/// Distribution of sigma_i(X1) ^ X2 for (X1, X2) ~ nu on {0,1}^(n+n).
DenseDistribution shift_xor_distribution(const DenseDistribution& nu, std::size_t i);
/// Same, for (X1, X2) uniform on a support list of 2n-bit indices.
DenseDistribution shift_xor_distribution(std::span<const std::uint64_t> support, std::size_t n, std::size_t i);

/// A x B with A, B given as explicit lists of 2n-bit indices.
struct RectanglePair {
    std::size_t n = 0;
    std::vector<std::uint64_t> a;
    std::vector<std::uint64_t> b;
};

struct RectangleBias {
    mpq_class mu0_mass;
    mpq_class mu1_mass;
    /// mu1_mass / mu0_mass.
    mpq_class ratio;
};

/// Exact mu0 and mu1 masses of A x B; n <= 6.
RectangleBias rectangle_bias(const RectanglePair& rect);

/// E_i H(sigma_i(X1) ^ T_delta(X2)) for (X1, X2) uniform on A; n <= 14.
double rectangle_entropy_condition(std::span<const std::uint64_t> a, std::size_t n, double delta = 0.25);

struct LboundEvaluation {
    std::size_t n = 0;
    /// E_i H(sigma_i(X1) ^ T_{1/4}(X2)).
    double condition_value = 0.0;
    /// n - condition_value.
    double delta = 0.0;
    double min_entropy = 0.0;
    /// 2n - sqrt(delta n) / 29.
    double bound_rhs = 0.0;
    bool condition_met = false;
    bool conclusion_holds = false;
    /// False only for a counterexample: condition met, conclusion violated.
    bool consistent = true;
};

/// nu on {0,1}^(n+n), n <= 10.
LboundEvaluation lbound_evaluator(const DenseDistribution& nu);

/// Normalized independent exponential weights; `sparse` first draws a random
/// support size and zeroes everything else.
DenseDistribution random_distribution(std::size_t m, Rng& rng, bool sparse = false);

/// Independent uniform values in [-1, 1].
std::vector<double> random_function(std::size_t m, Rng& rng);

}  // namespace shaplab
