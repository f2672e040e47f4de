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


#include "shaplab/analysis.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "shaplab/errors.h"
#include "shaplab/shap.h"

namespace shaplab {

namespace {

std::uint64_t gather(std::uint64_t x, std::uint32_t mask) {
    std::uint64_t r = 0;
    int k = 0;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
        const int b = std::countr_zero(m);
        r |= ((x >> b) & 1U) << k++;
    }
    return r;
}

std::uint32_t full_mask(std::size_t m) {
    return m == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1;
}

void check_bits(std::size_t m) {
    if (m > kMaxCubeBits) {
        throw ResourceError("dense cube size 2^" + std::to_string(m) + " exceeds the 2^24 cap");
    }
}

void check_mask(const DenseDistribution& d, std::uint32_t mask) {
    if ((mask & ~full_mask(d.bits())) != 0) throw DomainError("coordinate mask outside the cube");
}

double entropy_of(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

std::size_t cube_bits_of(std::size_t len) {
    if (len == 0 || !std::has_single_bit(len)) throw DomainError("function length must be a power of two");
    const auto m = static_cast<std::size_t>(std::countr_zero(len));
    check_bits(m);
    return m;
}

// Exact Pr[Bin(n, 1/2) > k].
double half_binomial_tail_above(std::size_t n, std::size_t k) {
    mpz_class total = 0;
    mpz_class c = 1;  // C(n, j)
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > k) total += c;
        c = c * static_cast<unsigned long>(n - j) / static_cast<unsigned long>(j + 1);
    }
    mpq_class q(total, mpz_class(1) << static_cast<mp_bitcnt_t>(n));
    q.canonicalize();
    return q.get_d();
}

std::vector<std::uint64_t> dedupe(std::span<const std::uint64_t> v, std::size_t bits) {
    std::vector<std::uint64_t> out(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!out.empty() && bits < 64 && out.back() >= (std::uint64_t{1} << bits)) {
        throw DomainError("set element outside {0,1}^" + std::to_string(bits));
    }
    return out;
}

}  // namespace

DenseDistribution::DenseDistribution(std::size_t m, std::vector<double> p) : m_(m), p_(std::move(p)) {
    check_bits(m);
    if (p_.size() != (std::size_t{1} << m)) throw DomainError("probability vector must have 2^m entries");
    double s = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0)) throw DomainError("probabilities must be non-negative");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("probabilities must sum to 1");
}

DenseDistribution DenseDistribution::uniform(std::size_t m) {
    check_bits(m);
    const std::size_t sz = std::size_t{1} << m;
    return DenseDistribution(m, std::vector<double>(sz, 1.0 / static_cast<double>(sz)));
}

DenseDistribution DenseDistribution::point_mass(std::size_t m, std::uint64_t x) {
    check_bits(m);
    std::vector<double> p(std::size_t{1} << m, 0.0);
    if (x >= p.size()) throw DomainError("point outside the cube");
    p[x] = 1.0;
    return DenseDistribution(m, std::move(p));
}

DenseDistribution DenseDistribution::even_parity(std::size_t m) {
    check_bits(m);
    if (m == 0) return point_mass(0, 0);
    const std::size_t sz = std::size_t{1} << m;
    std::vector<double> p(sz, 0.0);
    const double v = 2.0 / static_cast<double>(sz);
    for (std::size_t x = 0; x < sz; ++x) {
        if (std::popcount(x) % 2 == 0) p[x] = v;
    }
    return DenseDistribution(m, std::move(p));
}

DenseDistribution DenseDistribution::uniform_on(std::size_t m, std::span<const std::uint64_t> support) {
    check_bits(m);
    const auto pts = dedupe(support, m);
    if (pts.empty()) throw DomainError("support must be non-empty");
    std::vector<double> p(std::size_t{1} << m, 0.0);
    const double v = 1.0 / static_cast<double>(pts.size());
    for (auto x : pts) p[x] = v;
    return DenseDistribution(m, std::move(p));
}

DenseDistribution DenseDistribution::from_weights(std::size_t m, std::vector<double> w) {
    double s = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) throw DomainError("weights must be non-negative");
        s += v;
    }
    if (!(s > 0.0)) throw DomainError("weights must have positive total");
    for (auto& v : w) v /= s;
    return DenseDistribution(m, std::move(w));
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy(const DenseDistribution& d) { return entropy_of(d.probs()); }

double min_entropy(const DenseDistribution& d) {
    const auto p = d.probs();
    return -std::log2(*std::max_element(p.begin(), p.end()));
}

DenseDistribution marginal(const DenseDistribution& d, std::uint32_t mask) {
    check_mask(d, mask);
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    std::vector<double> out(std::size_t{1} << k, 0.0);
    const auto p = d.probs();
    for (std::uint64_t x = 0; x < p.size(); ++x) out[gather(x, mask)] += p[x];
    return DenseDistribution::from_weights(k, std::move(out));
}

DenseDistribution condition(const DenseDistribution& d, std::uint32_t fixed_mask, std::uint64_t value) {
    check_mask(d, fixed_mask);
    const std::uint32_t rest = full_mask(d.bits()) & ~fixed_mask;
    const auto k = static_cast<std::size_t>(std::popcount(rest));
    std::vector<double> out(std::size_t{1} << k, 0.0);
    const auto p = d.probs();
    double total = 0.0;
    for (std::uint64_t x = 0; x < p.size(); ++x) {
        if ((x & fixed_mask) != (value & fixed_mask)) continue;
        out[gather(x, rest)] += p[x];
        total += p[x];
    }
    if (!(total > 0.0)) throw DomainError("conditioning on a zero-probability event");
    return DenseDistribution::from_weights(k, std::move(out));
}

double conditional_entropy(const DenseDistribution& d, std::uint32_t given_mask) {
    return entropy(d) - entropy(marginal(d, given_mask));
}

double conditional_min_entropy(const DenseDistribution& d, std::uint32_t fixed_mask, std::uint64_t value) {
    return min_entropy(condition(d, fixed_mask, value));
}

double subset_entropy_average(const DenseDistribution& d, std::size_t k) {
    const std::size_t m = d.bits();
    if (k > m) throw DomainError("subset size exceeds the number of coordinates");
    if (k == 0) return 0.0;
    double total = 0.0;
    std::size_t count = 0;
    // Gosper's hack over all k-subsets of m coordinates.
    std::uint32_t s = (std::uint32_t{1} << k) - 1;
    const std::uint32_t limit = std::uint32_t{1} << m;
    while (s < limit) {
        total += entropy(marginal(d, s));
        ++count;
        const std::uint32_t c = s & (~s + 1);
        const std::uint32_t r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    return total / static_cast<double>(count);
}

double prefix_chain_entropy(const DenseDistribution& d, const Permutation& tau, std::size_t k) {
    if (tau.size() != d.bits()) throw DomainError("permutation size differs from the number of coordinates");
    if (k > d.bits()) throw DomainError("prefix longer than the permutation");
    double sum = 0.0;
    std::uint32_t seen = 0;
    double h_seen = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        const std::uint32_t next = seen | (std::uint32_t{1} << tau(r));
        const double h_next = entropy(marginal(d, next));
        sum += h_next - h_seen;
        seen = next;
        h_seen = h_next;
    }
    return sum;
}

double FourierSpectrum::energy() const {
    double e = 0.0;
    for (double c : coeff) e += c * c;
    return e;
}

namespace {

void hadamard_in_place(std::vector<double>& v) {
    for (std::size_t len = 1; len < v.size(); len <<= 1) {
        for (std::size_t blk = 0; blk < v.size(); blk += 2 * len) {
            for (std::size_t j = blk; j < blk + len; ++j) {
                const double a = v[j];
                const double b = v[j + len];
                v[j] = a + b;
                v[j + len] = a - b;
            }
        }
    }
}

}  // namespace

FourierSpectrum wht(std::span<const double> f) {
    FourierSpectrum s;
    s.m = cube_bits_of(f.size());
    s.coeff.assign(f.begin(), f.end());
    hadamard_in_place(s.coeff);
    const double inv = 1.0 / static_cast<double>(f.size());
    for (auto& c : s.coeff) c *= inv;
    return s;
}

std::vector<double> inverse_wht(const FourierSpectrum& spec) {
    std::vector<double> f = spec.coeff;
    hadamard_in_place(f);
    return f;
}

double expectation_norm(std::span<const double> f, double p) {
    if (f.empty()) throw DomainError("norm of an empty function");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p > 0.0)) throw DomainError("norm exponent must be positive");
    double s = 0.0;
    for (double v : f) s += std::pow(std::abs(v), p);
    return std::pow(s / static_cast<double>(f.size()), 1.0 / p);
}

double l1_distance(const DenseDistribution& a, const DenseDistribution& b) {
    if (a.bits() != b.bits()) throw DomainError("distributions live on different cubes");
    double s = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) s += std::abs(a[x] - b[x]);
    return s;
}

DenseDistribution apply_noise(const DenseDistribution& d, double delta) {
    if (!(delta >= 0.0 && delta <= 0.5)) throw DomainError("noise rate must lie in [0, 1/2]");
    if (delta == 0.0) return d;
    FourierSpectrum spec = wht(d.probs());
    const double rho = 1.0 - 2.0 * delta;
    std::vector<double> damp(d.bits() + 1);
    for (std::size_t k = 0; k <= d.bits(); ++k) damp[k] = std::pow(rho, static_cast<double>(k));
    for (std::size_t s = 0; s < spec.coeff.size(); ++s) spec.coeff[s] *= damp[std::popcount(s)];
    std::vector<double> p = inverse_wht(spec);
    for (auto& v : p) v = std::max(v, 0.0);
    return DenseDistribution::from_weights(d.bits(), std::move(p));
}

VerifierReport VerifierReport::make(std::string name, double lhs, double rhs, nlohmann::ordered_json params) {
    VerifierReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.holds = r.slack >= -kVerifierTolerance;
    r.params = std::move(params);
    return r;
}

nlohmann::ordered_json VerifierReport::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["slack"] = slack;
    j["holds"] = holds;
    j["params"] = params;
    return j;
}

VerifierReport VerifierReport::from_json(const nlohmann::ordered_json& j) {
    VerifierReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.slack = j.at("slack").get<double>();
    r.holds = j.at("holds").get<bool>();
    r.params = j.value("params", nlohmann::ordered_json::object());
    return r;
}

std::string VerifierReport::to_json_line() const { return to_json().dump(); }

std::array<VerifierReport, 2> verify_minentropy_chain(const DenseDistribution& nu, std::size_t first_bits,
                                                      double big_delta) {
    const std::size_t m = nu.bits();
    if (first_bits > m) throw DomainError("split point exceeds the number of coordinates");
    if (!(big_delta >= 0.0)) throw DomainError("Delta must be non-negative");
    const std::uint32_t low = full_mask(first_bits);
    const std::size_t na = std::size_t{1} << first_bits;
    std::vector<double> pa(na, 0.0), pmax(na, 0.0);
    const auto p = nu.probs();
    for (std::uint64_t x = 0; x < p.size(); ++x) {
        const std::uint64_t a = x & low;
        pa[a] += p[x];
        pmax[a] = std::max(pmax[a], p[x]);
    }
    const double hmin = min_entropy(nu);
    const double h1 = entropy_of(pa);
    std::size_t support = 0;
    double expected = 0.0;
    std::vector<double> cond(na, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
        if (pa[a] <= 0.0) continue;
        ++support;
        cond[a] = -std::log2(pmax[a] / pa[a]);
        expected += pa[a] * cond[a];
    }
    const double log_a = std::log2(static_cast<double>(support));
    const double threshold = hmin - log_a - big_delta;
    double tail = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
        // Inclusive with a small margin so roundoff can only enlarge the event.
        if (pa[a] > 0.0 && cond[a] <= threshold + 1e-12) tail += pa[a];
    }
    nlohmann::ordered_json params = {{"m", m},          {"first_bits", first_bits}, {"hmin", hmin},
                                     {"h_first", h1},   {"log_support", log_a},     {"Delta", big_delta}};
    return {VerifierReport::make("minentropy_chain_expectation", hmin - h1, expected, params),
            VerifierReport::make("minentropy_chain_tail", tail, std::exp2(-big_delta), params)};
}

VerifierReport verify_l1_entropy(const DenseDistribution& nu1, const DenseDistribution& nu2) {
    const double l1 = l1_distance(nu1, nu2);
    const double h1 = entropy(nu1);
    const double h2 = entropy(nu2);
    const double m = static_cast<double>(nu1.bits());
    return VerifierReport::make("l1_entropy", l1 * l1, 8.0 * std::numbers::ln2 * (m - std::min(h1, h2)),
                                {{"m", nu1.bits()}, {"l1", l1}, {"h1", h1}, {"h2", h2}});
}

VerifierReport verify_hypercontractive(std::span<const double> f, double p, double q) {
    if (!(p >= 1.0 && p <= q)) throw DomainError("hypercontractive check needs 1 <= p <= q");
    FourierSpectrum spec = wht(f);
    const double r = q == 1.0 ? 1.0 : (p - 1.0) / (q - 1.0);
    for (std::size_t s = 0; s < spec.coeff.size(); ++s) {
        spec.coeff[s] *= std::pow(r, static_cast<double>(std::popcount(s)) / 2.0);
    }
    const std::vector<double> g = inverse_wht(spec);
    return VerifierReport::make("hypercontractive", expectation_norm(g, q), expectation_norm(f, p),
                                {{"m", spec.m}, {"p", p}, {"q", q}});
}

std::array<VerifierReport, 2> verify_kkl(std::span<const double> f, double delta, double t) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
    const double alpha = expectation_norm(f, std::numeric_limits<double>::infinity());
    const double beta = expectation_norm(f, 1.0);
    if (!(alpha > 0.0)) throw DomainError("KKL bounds need f not identically zero");
    const FourierSpectrum spec = wht(f);
    double damped = 0.0, low = 0.0;
    for (std::size_t s = 0; s < spec.coeff.size(); ++s) {
        const auto deg = static_cast<double>(std::popcount(s));
        const double c2 = spec.coeff[s] * spec.coeff[s];
        damped += std::pow(delta, deg) * c2;
        if (deg <= t) low += c2;
    }
    const double ratio = beta / alpha;
    nlohmann::ordered_json params = {{"m", spec.m}, {"delta", delta}, {"t", t}, {"alpha", alpha}, {"beta", beta}};
    auto first = VerifierReport::make("kkl_noise", damped, alpha * alpha * std::pow(ratio, 2.0 / (1.0 + delta)), params);
    const double log_ratio = std::log(alpha / beta);
    VerifierReport second;
    if (t > 2.0 * log_ratio || !(t > 0.0)) {
        auto skip = params;
        skip["skipped"] = true;
        second = VerifierReport::make("kkl_low_degree", low, std::numeric_limits<double>::infinity(), skip);
        second.slack = 0.0;
        second.rhs = 0.0;
        second.lhs = 0.0;
        second.holds = true;
    } else {
        second = VerifierReport::make("kkl_low_degree", low,
                                      beta * beta * std::pow(2.0 * std::numbers::e * log_ratio / t, t), params);
    }
    return {first, second};
}

std::array<VerifierReport, 2> verify_ndist(const DenseDistribution& nu) {
    const std::size_t n = nu.bits();
    if (n == 0 || n > 14) throw ResourceError("projection check enumerates subsets; needs 1 <= n <= 14");
    const std::size_t k = (2 * n + 2) / 3;
    const double noisy = entropy(apply_noise(nu, 0.25));
    const double delta = static_cast<double>(n) - noisy;
    const double avg = subset_entropy_average(nu, k);
    const double tail = half_binomial_tail_above(n, k);
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    nlohmann::ordered_json params = {{"n", n},       {"K", k},           {"delta", delta},
                                     {"avg_subset_entropy", avg}, {"tail", tail}};
    return {VerifierReport::make("ndist_proof", (avg + nn - kk) * (1.0 - tail), nn - delta, params),
            VerifierReport::make("ndist_statement", avg, kk - delta + nn * tail, params)};
}

std::array<VerifierReport, 2> verify_lhyp(const DenseDistribution& rho) {
    const std::size_t n = rho.bits();
    if (n < 2) throw DomainError("pairwise check needs n >= 2");
    std::vector<double> single(n, 0.0);
    std::vector<double> both(n * n, 0.0);
    const auto p = rho.probs();
    for (std::uint64_t x = 0; x < p.size(); ++x) {
        if (p[x] == 0.0) continue;
        for (std::uint64_t a_bits = x; a_bits != 0; a_bits &= a_bits - 1) {
            const auto a = static_cast<std::size_t>(std::countr_zero(a_bits));
            single[a] += p[x];
            for (std::uint64_t b_bits = a_bits & (a_bits - 1); b_bits != 0; b_bits &= b_bits - 1) {
                both[a * n + static_cast<std::size_t>(std::countr_zero(b_bits))] += p[x];
            }
        }
    }
    const FourierSpectrum spec = wht(p);
    double deficit = 0.0;
    double identity_err = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double differ = std::clamp(single[a] + single[b] - 2.0 * both[a * n + b], 0.0, 1.0);
            deficit += 1.0 - binary_entropy(differ);
            const double gap = std::abs((1.0 - differ) - 0.5);
            const double fourier = std::exp2(static_cast<double>(n) - 1.0) *
                                   std::abs(spec.coeff[(std::size_t{1} << a) | (std::size_t{1} << b)]);
            identity_err = std::max(identity_err, std::abs(gap - fourier));
            ++pairs;
        }
    }
    deficit /= static_cast<double>(pairs);
    const double hmin = min_entropy(rho);
    const double nn = static_cast<double>(n);
    nlohmann::ordered_json params = {{"n", n}, {"hmin", hmin}};
    return {VerifierReport::make("lhyp", deficit, 45.0 / (nn * nn) * (nn - hmin) * (nn - hmin), params),
            VerifierReport::make("lhyp_fourier_identity", identity_err, 1e-10, params)};
}

double pairwise_xor_deficit(const DenseDistribution& rho, std::uint32_t pair_mask, std::uint32_t cond_mask) {
    check_mask(rho, pair_mask);
    check_mask(rho, cond_mask);
    if ((pair_mask & cond_mask) != 0) throw DomainError("pair set and conditioning set must be disjoint");
    if (std::popcount(pair_mask) < 2) throw DomainError("pair set needs at least two coordinates");
    if (rho.bits() > 20) throw ResourceError("pairwise deficit supports m <= 20");
    const auto p = rho.probs();
    const std::size_t cond_size = std::size_t{1} << std::popcount(cond_mask);
    std::vector<double> cond_marg(cond_size, 0.0);
    for (std::uint64_t x = 0; x < p.size(); ++x) cond_marg[gather(x, cond_mask)] += p[x];
    const double h_cond = entropy_of(cond_marg);

    std::vector<std::size_t> coords;
    for (std::uint32_t m = pair_mask; m != 0; m &= m - 1) coords.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    double total = 0.0;
    std::size_t pairs = 0;
    std::vector<double> joint(2 * cond_size);
    for (std::size_t u = 0; u < coords.size(); ++u) {
        for (std::size_t v = u + 1; v < coords.size(); ++v) {
            std::fill(joint.begin(), joint.end(), 0.0);
            for (std::uint64_t x = 0; x < p.size(); ++x) {
                const std::uint64_t bit = ((x >> coords[u]) ^ (x >> coords[v])) & 1U;
                joint[(gather(x, cond_mask) << 1) | bit] += p[x];
            }
            total += 1.0 - (entropy_of(joint) - h_cond);
            ++pairs;
        }
    }
    return std::clamp(total / static_cast<double>(pairs), 0.0, 1.0);
}

std::uint64_t rotate_index(std::uint64_t u, std::size_t i, std::size_t n) {
    if (n == 0 || n > 63) throw DomainError("rotate_index supports 1 <= n <= 63");
    i %= n;
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    if (i == 0) return u & mask;
    return ((u << i) | (u >> (n - i))) & mask;
}

std::uint64_t pack_pair(const BitString& x1, const BitString& x2) {
    if (x1.size() != x2.size() || x1.size() > 32) throw DomainError("pack_pair needs equal lengths <= 32");
    return x1.low_word() | (x2.low_word() << x1.size());
}

DenseDistribution shift_xor_distribution(const DenseDistribution& nu, std::size_t i) {
    if (nu.bits() % 2 != 0 || nu.bits() == 0) throw DomainError("bipartite distribution needs an even number of bits");
    const std::size_t n = nu.bits() / 2;
    if (i >= n) throw DomainError("shift index outside [0, n)");
    const std::uint64_t low = (std::uint64_t{1} << n) - 1;
    std::vector<double> out(std::size_t{1} << n, 0.0);
    const auto p = nu.probs();
    for (std::uint64_t x = 0; x < p.size(); ++x) {
        if (p[x] == 0.0) continue;
        out[rotate_index(x & low, i, n) ^ (x >> n)] += p[x];
    }
    return DenseDistribution::from_weights(n, std::move(out));
}

DenseDistribution shift_xor_distribution(std::span<const std::uint64_t> support, std::size_t n, std::size_t i) {
    if (n == 0 || n > 14) throw ResourceError("support-based shift distribution supports 1 <= n <= 14");
    if (i >= n) throw DomainError("shift index outside [0, n)");
    const auto pts = dedupe(support, 2 * n);
    if (pts.empty()) throw DomainError("support must be non-empty");
    const std::uint64_t low = (std::uint64_t{1} << n) - 1;
    std::vector<double> out(std::size_t{1} << n, 0.0);
    for (auto x : pts) out[rotate_index(x & low, i, n) ^ (x >> n)] += 1.0;
    return DenseDistribution::from_weights(n, std::move(out));
}

RectangleBias rectangle_bias(const RectanglePair& rect) {
    const std::size_t n = rect.n;
    if (n == 0 || n > 6) throw ResourceError("exact rectangle masses support 1 <= n <= 6");
    const auto a = dedupe(rect.a, 2 * n);
    const auto b = dedupe(rect.b, 2 * n);
    if (a.empty() || b.empty()) throw DomainError("rectangle sides must be non-empty");
    const std::uint64_t low = (std::uint64_t{1} << n) - 1;
    const std::size_t cube = std::size_t{1} << n;
    std::vector<mpz_class> by_weight(n + 1, 0);
    std::vector<std::uint64_t> ha(cube), hb(cube);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(ha.begin(), ha.end(), 0);
        std::fill(hb.begin(), hb.end(), 0);
        for (auto x : a) ++ha[rotate_index(x & low, i, n) ^ (x >> n)];
        for (auto y : b) ++hb[rotate_index(y & low, i, n) ^ (y >> n)];
        std::vector<std::uint64_t> cnt(n + 1, 0);
        for (std::size_t u = 0; u < cube; ++u) {
            if (ha[u] == 0) continue;
            for (std::size_t v = 0; v < cube; ++v) {
                if (hb[v] != 0) cnt[std::popcount(u ^ v)] += ha[u] * hb[v];
            }
        }
        for (std::size_t w = 0; w <= n; ++w) by_weight[w] += mpz_class(static_cast<unsigned long>(cnt[w]));
    }
    RectangleBias res;
    mpq_class mu1 = 0;
    for (std::size_t w = 0; w <= n; ++w) mu1 += mpq_class(by_weight[w]) * mu1_tilde_density_by_weight(n, w);
    mu1 /= static_cast<unsigned long>(n);
    res.mu1_mass = mu1;
    res.mu0_mass = mpq_class(mpz_class(static_cast<unsigned long>(a.size())) * static_cast<unsigned long>(b.size()),
                             mpz_class(1) << static_cast<mp_bitcnt_t>(4 * n));
    res.mu0_mass.canonicalize();
    res.ratio = res.mu1_mass / res.mu0_mass;
    return res;
}

double rectangle_entropy_condition(std::span<const std::uint64_t> a, std::size_t n, double delta) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += entropy(apply_noise(shift_xor_distribution(a, n, i), delta));
    return total / static_cast<double>(n);
}

LboundEvaluation lbound_evaluator(const DenseDistribution& nu) {
    if (nu.bits() % 2 != 0 || nu.bits() == 0) throw DomainError("bipartite distribution needs an even number of bits");
    const std::size_t n = nu.bits() / 2;
    if (n > 10) throw ResourceError("lbound evaluation supports n <= 10");
    LboundEvaluation ev;
    ev.n = n;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += entropy(apply_noise(shift_xor_distribution(nu, i), 0.25));
    const double nn = static_cast<double>(n);
    ev.condition_value = total / nn;
    ev.delta = nn - ev.condition_value;
    ev.min_entropy = min_entropy(nu);
    ev.bound_rhs = 2.0 * nn - std::sqrt(std::max(ev.delta, 0.0) * nn) / 29.0;
    ev.condition_met = ev.delta > kVerifierTolerance;
    ev.conclusion_holds = ev.min_entropy <= ev.bound_rhs + kVerifierTolerance;
    ev.consistent = !ev.condition_met || ev.conclusion_holds;
    return ev;
}

DenseDistribution random_distribution(std::size_t m, Rng& rng, bool sparse) {
    check_bits(m);
    const std::size_t sz = std::size_t{1} << m;
    std::vector<double> w(sz, 0.0);
    if (!sparse) {
        for (auto& v : w) v = -std::log1p(-rng.uniform());
    } else {
        const std::size_t support = 1 + static_cast<std::size_t>(rng.below(sz));
        std::vector<std::size_t> idx(sz);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t a = 0; a < support; ++a) {
            std::swap(idx[a], idx[a + static_cast<std::size_t>(rng.below(sz - a))]);
            w[idx[a]] = -std::log1p(-rng.uniform());
        }
        // An all-zero draw is possible only with probability 0, but guard it.
        if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) w[idx[0]] = 1.0;
    }
    return DenseDistribution::from_weights(m, std::move(w));
}

std::vector<double> random_function(std::size_t m, Rng& rng) {
    check_bits(m);
    std::vector<double> f(std::size_t{1} << m);
    for (auto& v : f) v = 2.0 * rng.uniform() - 1.0;
    return f;
}

}  // namespace shaplab
