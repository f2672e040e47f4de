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


#include "shaplab/shap.h"

#include <bit>
#include <charconv>
#include <sstream>

#include "shaplab/errors.h"

namespace shaplab {

namespace {

mpz_class pow_ui(unsigned long base, unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

mpq_class pow2_neg(unsigned long exp) {
    mpq_class q(mpz_class(1), pow_ui(2, exp));
    q.canonicalize();
    return q;
}

}  // namespace

ShapInstance::ShapInstance(BitString x1_, BitString x2_, BitString y1_, BitString y2_)
    : x1(std::move(x1_)), x2(std::move(x2_)), y1(std::move(y1_)), y2(std::move(y2_)) {
    const std::size_t n = x1.size();
    if (x2.size() != n || y1.size() != n || y2.size() != n) {
        throw DomainError("instance parts must share one length");
    }
}

ShapInstance ShapInstance::zeros(std::size_t n) {
    return ShapInstance(BitString(n), BitString(n), BitString(n), BitString(n));
}

std::string ShapInstance::to_text() const {
    std::ostringstream os;
    os << "n=" << size() << " x1=" << x1.to_hex() << " x2=" << x2.to_hex() << " y1=" << y1.to_hex()
       << " y2=" << y2.to_hex();
    return os.str();
}

ShapInstance ShapInstance::from_text(std::string_view line) {
    std::istringstream is{std::string(line)};
    std::string tok;
    std::optional<std::size_t> n;
    std::string parts[4];
    bool have[4] = {false, false, false, false};
    static constexpr std::string_view kKeys[4] = {"x1", "x2", "y1", "y2"};
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DomainError("instance token without '=': " + tok);
        const std::string_view key = std::string_view(tok).substr(0, eq);
        const std::string_view val = std::string_view(tok).substr(eq + 1);
        if (key == "n") {
            std::size_t v = 0;
            auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
            if (ec != std::errc{} || p != val.data() + val.size() || v == 0) {
                throw DomainError("invalid length in instance text");
            }
            n = v;
            continue;
        }
        bool matched = false;
        for (int k = 0; k < 4; ++k) {
            if (key == kKeys[k]) {
                if (have[k]) throw DomainError("duplicate field " + std::string(key));
                parts[k] = std::string(val);
                have[k] = true;
                matched = true;
            }
        }
        if (!matched) throw DomainError("unknown instance field " + std::string(key));
    }
    if (!n) throw DomainError("instance text lacks n=");
    for (int k = 0; k < 4; ++k) {
        if (!have[k]) throw DomainError("instance text lacks " + std::string(kKeys[k]) + "=");
    }
    return ShapInstance(BitString::from_hex(*n, parts[0]), BitString::from_hex(*n, parts[1]),
                        BitString::from_hex(*n, parts[2]), BitString::from_hex(*n, parts[3]));
}

const char* to_string(PromiseClass c) {
    switch (c) {
        case PromiseClass::Zero:
            return "0";
        case PromiseClass::One:
            return "1";
        case PromiseClass::Undefined:
            return "undefined";
    }
    return "?";
}

std::size_t shift_xor_weight(const ShapInstance& inst, ShiftIndex i) {
    // sigma_i is linear over XOR, so shift the XOR of x1 and y1 once.
    return xor_weight(cyclic_shift(inst.x1 ^ inst.y1, i), inst.x2 ^ inst.y2);
}

std::vector<std::size_t> shift_weights(const ShapInstance& inst) {
    const std::size_t n = inst.size();
    const BitString a = inst.x1 ^ inst.y1;
    const BitString b = inst.x2 ^ inst.y2;
    std::vector<std::size_t> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = xor_weight(cyclic_shift(a, ShiftIndex{i}), b);
    return w;
}

PromiseClass classify_weight(std::size_t w, std::size_t n) {
    if (15 * w <= 6 * n) return PromiseClass::One;
    if (7 * n <= 15 * w && 15 * w <= 8 * n) return PromiseClass::Zero;
    return PromiseClass::Undefined;
}

PromiseClass classify_shift(const ShapInstance& inst, ShiftIndex i) {
    return classify_weight(shift_xor_weight(inst, i), inst.size());
}

PromiseClass classify(const ShapInstance& inst) {
    const std::size_t n = inst.size();
    bool all_far = true;
    for (auto w : shift_weights(inst)) {
        const auto c = classify_weight(w, n);
        if (c == PromiseClass::One) return PromiseClass::One;
        if (c != PromiseClass::Zero) all_far = false;
    }
    return all_far ? PromiseClass::Zero : PromiseClass::Undefined;
}

DistributionSpec DistributionSpec::parse(std::string_view name, std::size_t n) {
    if (name == "mu0") return mu0(n);
    if (name == "mu1") return mu1(n);
    if (name == "mu") return mu(n);
    if (name.starts_with("mu1@")) {
        const auto digits = name.substr(4);
        std::size_t i = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
        if (ec != std::errc{} || p != digits.data() + digits.size() || i >= n) {
            throw DomainError("invalid planted shift in distribution name");
        }
        return mu1_at_shift(n, ShiftIndex{i});
    }
    throw DomainError("unknown distribution '" + std::string(name) + "' (mu0, mu1, mu, mu1@<i>)");
}

std::string DistributionSpec::name() const {
    switch (kind) {
        case Kind::Mu0:
            return "mu0";
        case Kind::Mu1:
            return "mu1";
        case Kind::Mu:
            return "mu";
        case Kind::Mu1AtShift:
            return "mu1@" + std::to_string(shift.value);
    }
    return "?";
}

ShapInstance sample_planted_noiseless(std::size_t n, ShiftIndex i, Rng& rng) {
    if (i.value >= n) throw DomainError("planted shift outside [0, n)");
    BitString x1 = BitString::random(n, rng);
    BitString x2 = BitString::random(n, rng);
    BitString y1 = BitString::random(n, rng);
    BitString y2 = cyclic_shift(x1 ^ y1, i) ^ x2;
    return ShapInstance(std::move(x1), std::move(x2), std::move(y1), std::move(y2));
}

ShapInstance sample(const DistributionSpec& spec, Rng& rng) {
    const std::size_t n = spec.n;
    if (n == 0) throw DomainError("distribution length must be positive");
    switch (spec.kind) {
        case DistributionSpec::Kind::Mu0:
            return ShapInstance(BitString::random(n, rng), BitString::random(n, rng), BitString::random(n, rng),
                                BitString::random(n, rng));
        case DistributionSpec::Kind::Mu1AtShift: {
            ShapInstance inst = sample_planted_noiseless(n, spec.shift, rng);
            inst.x1 = noise_sample(inst.x1, spec.planted_noise, rng);
            return inst;
        }
        case DistributionSpec::Kind::Mu1: {
            DistributionSpec at = spec;
            at.kind = DistributionSpec::Kind::Mu1AtShift;
            at.shift = ShiftIndex{static_cast<std::size_t>(rng.below(n))};
            return sample(at, rng);
        }
        case DistributionSpec::Kind::Mu: {
            DistributionSpec branch = spec;
            branch.kind = rng.bernoulli(0.5) ? DistributionSpec::Kind::Mu1 : DistributionSpec::Kind::Mu0;
            return sample(branch, rng);
        }
    }
    throw DomainError("unknown distribution kind");
}

mpq_class mu1_tilde_density_by_weight(std::size_t n, std::size_t w) {
    if (w > n) throw DomainError("weight exceeds length");
    // 3^w 5^(n-w) / 8^n / 2^(3n)
    mpq_class q(pow_ui(3, w) * pow_ui(5, n - w), pow_ui(2, 6 * n));
    q.canonicalize();
    return q;
}

mpq_class mu1_tilde_density(const ShapInstance& inst, ShiftIndex i) {
    const std::size_t n = inst.size();
    if (n > 64) throw DomainError("exact density supports n <= 64");
    return mu1_tilde_density_by_weight(n, shift_xor_weight(inst, i));
}

mpq_class mu1_tilde_density_two_noise(const ShapInstance& inst, ShiftIndex i) {
    const std::size_t n = inst.size();
    if (n > 10) throw DomainError("two-noise density enumeration supports n <= 10");
    // sigma_i(x1) ^ T(x2) == sigma_i(y1) ^ T(y2)  <=>  Z1 ^ Z2 == d.
    const BitString d = cyclic_shift(inst.x1 ^ inst.y1, i) ^ inst.x2 ^ inst.y2;
    const std::uint64_t target = d.low_word();
    const std::uint64_t size = std::uint64_t{1} << n;
    // Pr[Z = z] = 3^|z| / 4^n for T_{1/4}.
    std::vector<mpz_class> weight(n + 1);
    for (std::size_t k = 0; k <= n; ++k) weight[k] = pow_ui(3, k);
    mpz_class total = 0;
    for (std::uint64_t z1 = 0; z1 < size; ++z1) {
        total += weight[std::popcount(z1)] * weight[std::popcount(z1 ^ target)];
    }
    mpq_class q(total, pow_ui(4, 2 * n));
    q.canonicalize();
    return q * pow2_neg(3 * n);
}

}  // namespace shaplab
