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


#include "shaplab/quantum.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "shaplab/errors.h"

namespace shaplab {

namespace {

constexpr double kEmptyOutcome = 1e-15;

double norm_sq_of(const std::vector<Amplitude>& v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

void check_unit(double norm_sq, const char* what) {
    if (std::abs(norm_sq - 1.0) > kNormTolerance) {
        throw IntegrityError(std::string(what) + ": squared norm drifted to " + std::to_string(norm_sq));
    }
}

void check_shift(std::size_t n, ShiftIndex i) {
    if (i.value >= n) throw DomainError("shift index outside [0, n)");
}

// out[...digit r = perm[a]...] = in[...digit r = a...]
void apply_axis_map(const std::vector<Amplitude>& in, std::vector<Amplitude>& out,
                    const std::vector<std::uint32_t>& perm, std::size_t stride) {
    const std::size_t d1 = perm.size();
    const std::size_t block = stride * d1;
    for (std::size_t hi = 0; hi < in.size(); hi += block) {
        for (std::size_t a = 0; a < d1; ++a) {
            const Amplitude* src = &in[hi + a * stride];
            Amplitude* dst = &out[hi + perm[a] * stride];
            std::copy(src, src + stride, dst);
        }
    }
}

std::size_t axis_stride(std::size_t n, std::size_t r) {
    std::size_t s = 1;
    for (std::size_t k = 0; k < r; ++k) s *= n * n;
    return s;
}

}  // namespace

double PairedState::norm_sq() const { return norm_sq_of(amp); }

double JointState::norm_sq() const { return norm_sq_of(amp); }

std::optional<std::uint64_t> joint_dimension(std::size_t n, std::size_t t) {
    std::uint64_t d = 1;
    for (std::size_t k = 0; k < 2 * t; ++k) {
        if (n != 0 && d > UINT64_MAX / n) return std::nullopt;
        d *= n;
    }
    return d;
}

JointState JointState::repeated(const PairedState& single, std::size_t t, std::uint64_t cap) {
    if (t == 0) throw DomainError("repetition count must be positive");
    const auto dim = joint_dimension(single.n, t);
    if (!dim || *dim > cap) {
        throw ResourceError("joint state dimension n^(2t) with n=" + std::to_string(single.n) +
                            ", t=" + std::to_string(t) + " exceeds cap " + std::to_string(cap));
    }
    JointState js;
    js.n = single.n;
    js.t = t;
    js.amp = single.amp;
    for (std::size_t r = 1; r < t; ++r) {
        std::vector<Amplitude> next(js.amp.size() * single.amp.size());
        // New repetition is the most significant digit.
        for (std::size_t a = 0; a < single.amp.size(); ++a) {
            for (std::size_t b = 0; b < js.amp.size(); ++b) {
                next[a * js.amp.size() + b] = single.amp[a] * js.amp[b];
            }
        }
        js.amp = std::move(next);
    }
    return js;
}

void ProtocolConfig::validate() const {
    if (n == 0) throw DomainError("protocol needs n >= 1");
    if (t == 0) throw DomainError("protocol needs t >= 1");
    if (!(tau > 0.5 && tau < 1.0)) throw DomainError("acceptance fraction tau must lie in (1/2, 1)");
    if (!shift_order.empty()) {
        std::vector<bool> seen(n, false);
        for (auto i : shift_order) {
            if (i >= n || seen[i]) throw DomainError("shift order must list distinct shifts in [0, n)");
            seen[i] = true;
        }
    }
    const auto dim = joint_dimension(n, t);
    if (!dim || *dim > cap) {
        throw ResourceError("n^(2t) for n=" + std::to_string(n) + ", t=" + std::to_string(t) + " exceeds cap " +
                            std::to_string(cap));
    }
}

std::size_t ProtocolConfig::accept_threshold() const {
    return static_cast<std::size_t>(std::ceil(tau * static_cast<double>(t)));
}

std::vector<std::size_t> ProtocolConfig::order() const {
    if (!shift_order.empty()) return shift_order;
    std::vector<std::size_t> o(n);
    std::iota(o.begin(), o.end(), std::size_t{0});
    return o;
}

double ProtocolConfig::eps_prime() const {
    const double nn = static_cast<double>(n);
    return eps * eps / (16.0 * nn * nn * nn * nn);
}

const char* to_string(Outcome o) { return o == Outcome::Accept ? "A" : "R"; }

PairedState prepare_initial(const ShapInstance& inst) {
    const std::size_t n = inst.size();
    const BitString a = inst.x1 ^ inst.y1;
    const BitString b = inst.x2 ^ inst.y2;
    PairedState s;
    s.n = n;
    s.amp.resize(n * n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double sk = a.bit0(k) ? -scale : scale;
        for (std::size_t j = 0; j < n; ++j) {
            s.amp[k * n + j] = b.bit0(j) ? -sk : sk;
        }
    }
    return s;
}

double inner_product_closed_form(const ShapInstance& inst, ShiftIndex i) {
    const double n = static_cast<double>(inst.size());
    return 1.0 - 2.0 * static_cast<double>(shift_xor_weight(inst, i)) / n;
}

double inner_product(const ShapInstance& inst, ShiftIndex i) {
    const std::size_t n = inst.size();
    check_shift(n, i);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> a1(n), b1(n), a2(n);
    for (std::size_t k = 0; k < n; ++k) {
        a1[k] = (inst.x1.bit0(k) != inst.y1.bit0(k)) ? -scale : scale;
        b1[k] = (inst.x2.bit0(k) != inst.y2.bit0(k)) ? -scale : scale;
    }
    // The referee's relabeling moves label k to k + i, matching sigma_i.
    for (std::size_t k = 0; k < n; ++k) a2[(k + i.value) % n] = a1[k];
    double ip = 0.0;
    for (std::size_t k = 0; k < n; ++k) ip += a2[k] * b1[k];
    const double closed = inner_product_closed_form(inst, i);
    if (std::abs(ip - closed) > 1e-12) {
        throw IntegrityError("amplitude inner product disagrees with 1 - 2w/n");
    }
    return ip;
}

std::vector<std::uint32_t> shift_swap_map(std::size_t n, ShiftIndex i) {
    check_shift(n, i);
    std::vector<std::uint32_t> m(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t k2 = (j + n - i.value) % n;
            const std::size_t j2 = (k + i.value) % n;
            m[k * n + j] = static_cast<std::uint32_t>(k2 * n + j2);
        }
    }
    return m;
}

PairedState shift_swap(const PairedState& state, ShiftIndex i) {
    const auto perm = shift_swap_map(state.n, i);
    PairedState out{state.n, std::vector<Amplitude>(state.amp.size())};
    apply_axis_map(state.amp, out.amp, perm, 1);
    return out;
}

JointState shift_swap(const JointState& state, ShiftIndex i, std::size_t repetition) {
    if (repetition >= state.t) throw DomainError("repetition index outside [0, t)");
    const auto perm = shift_swap_map(state.n, i);
    JointState out{state.n, state.t, std::vector<Amplitude>(state.amp.size())};
    apply_axis_map(state.amp, out.amp, perm, axis_stride(state.n, repetition));
    return out;
}

double swap_expectation(const PairedState& state, ShiftIndex i) {
    const auto perm = shift_swap_map(state.n, i);
    Amplitude s = 0.0;
    for (std::size_t a = 0; a < perm.size(); ++a) s += std::conj(state.amp[perm[a]]) * state.amp[a];
    return s.real();
}

double swap_accept_prob(const PairedState& state, ShiftIndex i) {
    check_unit(state.norm_sq(), "swap test input");
    return std::clamp((1.0 + swap_expectation(state, i)) / 2.0, 0.0, 1.0);
}

JointState project_accept(const JointState& state, ShiftIndex i, const ProtocolConfig& cfg) {
    const std::size_t m = cfg.accept_threshold();
    const auto perm = shift_swap_map(state.n, i);
    const std::size_t dim = state.amp.size();
    // comps[c]: component with c accepts so far; c == m absorbs "m or more".
    std::vector<std::vector<Amplitude>> comps(m + 1);
    comps[0] = state.amp;
    std::vector<Amplitude> swapped(dim);
    for (std::size_t r = 0; r < state.t; ++r) {
        const std::size_t stride = axis_stride(state.n, r);
        std::vector<std::vector<Amplitude>> next(m + 1);
        for (std::size_t c = 0; c <= m; ++c) {
            if (comps[c].empty()) continue;
            if (c == m) {
                if (next[m].empty()) next[m].assign(dim, 0.0);
                for (std::size_t a = 0; a < dim; ++a) next[m][a] += comps[m][a];
                continue;
            }
            apply_axis_map(comps[c], swapped, perm, stride);
            if (next[c].empty()) next[c].assign(dim, 0.0);
            if (next[c + 1].empty()) next[c + 1].assign(dim, 0.0);
            for (std::size_t a = 0; a < dim; ++a) {
                next[c][a] += 0.5 * (comps[c][a] - swapped[a]);
                next[c + 1][a] += 0.5 * (comps[c][a] + swapped[a]);
            }
        }
        comps = std::move(next);
    }
    JointState out{state.n, state.t, std::move(comps[m])};
    if (out.amp.empty()) out.amp.assign(dim, 0.0);
    return out;
}

RoundResult measure_round(const JointState& state, ShiftIndex i, const ProtocolConfig& cfg, Rng& rng) {
    check_shift(state.n, i);
    if (state.t != cfg.t) throw DomainError("joint state repetition count differs from config");
    check_unit(state.norm_sq(), "round input");
    JointState acc = project_accept(state, i, cfg);
    const double p_accept = std::clamp(acc.norm_sq(), 0.0, 1.0);
    RoundResult res;
    res.p_accept = p_accept;
    const bool accepted = rng.uniform() < p_accept;
    res.outcome = accepted ? Outcome::Accept : Outcome::Reject;
    const double p = accepted ? p_accept : 1.0 - p_accept;
    if (p < kEmptyOutcome) {
        throw IntegrityError("sampled a measurement outcome with probability " + std::to_string(p));
    }
    if (!accepted) {
        for (std::size_t a = 0; a < acc.amp.size(); ++a) acc.amp[a] = state.amp[a] - acc.amp[a];
        // |(I - Pi) psi|^2 must equal 1 - |Pi psi|^2 for a projector.
        if (std::abs(acc.norm_sq() - p) > kNormTolerance) {
            throw IntegrityError("projection leaked norm");
        }
    }
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : acc.amp) a *= inv;
    check_unit(acc.norm_sq(), "post-measurement state");
    res.post = std::move(acc);
    return res;
}

ProtocolRun run_protocol(const ShapInstance& inst, const ProtocolConfig& cfg, Rng& rng) {
    if (inst.size() != cfg.n) throw DomainError("instance length differs from config n");
    cfg.validate();
    JointState state = JointState::repeated(prepare_initial(inst), cfg.t, cfg.cap);
    ProtocolRun run;
    for (auto i : cfg.order()) {
        RoundResult r = measure_round(state, ShiftIndex{i}, cfg, rng);
        run.trace.push_back({i, r.p_accept, r.outcome});
        if (r.outcome == Outcome::Accept) {
            run.answer = 1;
            break;
        }
        state = std::move(r.post);
    }
    return run;
}

std::string format_trace(const std::vector<RoundRecord>& trace) {
    std::string out;
    char buf[96];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof buf, "round=%zu p_accept=%.17g outcome=%s\n", r.round, r.p_accept,
                      to_string(r.outcome));
        out += buf;
    }
    return out;
}

double exact_answer_prob(const ShapInstance& inst, const ProtocolConfig& cfg) {
    if (inst.size() != cfg.n) throw DomainError("instance length differs from config n");
    cfg.validate();
    JointState v = JointState::repeated(prepare_initial(inst), cfg.t, cfg.cap);
    for (auto i : cfg.order()) {
        JointState acc = project_accept(v, ShiftIndex{i}, cfg);
        for (std::size_t a = 0; a < v.amp.size(); ++a) v.amp[a] -= acc.amp[a];
        if (v.norm_sq() < 1e-300) return 1.0;
    }
    return std::clamp(1.0 - v.norm_sq(), 0.0, 1.0);
}

DisturbanceReport disturbance_report(const ShapInstance& inst, const ProtocolConfig& cfg) {
    if (inst.size() != cfg.n) throw DomainError("instance length differs from config n");
    cfg.validate();
    const std::size_t n = cfg.n;
    const JointState fresh = JointState::repeated(prepare_initial(inst), cfg.t, cfg.cap);
    JointState v = fresh;
    DisturbanceReport rep;
    for (auto i : cfg.order()) {
        DisturbanceRound dr;
        dr.round = i;
        dr.shift_class = classify_shift(inst, ShiftIndex{i});
        if (dr.shift_class == PromiseClass::Undefined) {
            rep.undefined_rounds.push_back(i);
            rep.rounds.push_back(dr);
            continue;
        }
        dr.right = dr.shift_class == PromiseClass::One ? Outcome::Accept : Outcome::Reject;
        const JointState fresh_acc = project_accept(fresh, ShiftIndex{i}, cfg);
        const double fresh_p = std::clamp(fresh_acc.norm_sq(), 0.0, 1.0);
        dr.p_right_fresh = *dr.right == Outcome::Accept ? fresh_p : 1.0 - fresh_p;

        const double before = v.norm_sq();
        if (before < 1e-300) throw IntegrityError("right-outcome path has vanishing probability");
        JointState acc = project_accept(v, ShiftIndex{i}, cfg);
        if (*dr.right == Outcome::Reject) {
            for (std::size_t a = 0; a < v.amp.size(); ++a) acc.amp[a] = v.amp[a] - acc.amp[a];
        }
        const double after = acc.norm_sq();
        dr.p_right_path = std::clamp(after / before, 0.0, 1.0);
        dr.eps_j = 1.0 - dr.p_right_path;
        dr.first_wrong = std::max(0.0, before - after);
        v = std::move(acc);
        rep.rounds.push_back(dr);
        rep.eps_prime_emp = std::max(rep.eps_prime_emp, 1.0 - dr.p_right_fresh);
    }
    const double nn = static_cast<double>(n);
    rep.per_round_bound = 4.0 * nn * std::sqrt(rep.eps_prime_emp);
    rep.total_bound = 4.0 * nn * nn * std::sqrt(rep.eps_prime_emp);
    rep.analytic_budget = 4.0 * nn * nn * std::sqrt(cfg.eps_prime());
    for (auto& dr : rep.rounds) {
        if (!dr.right) continue;
        rep.eps_sum += dr.eps_j;
        rep.cumulative_error += dr.first_wrong;
        dr.within_bound = dr.eps_j <= rep.per_round_bound + kNormTolerance;
        rep.holds = rep.holds && dr.within_bound;
    }
    rep.holds = rep.holds && rep.eps_sum <= rep.total_bound + kNormTolerance;
    return rep;
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t b = 0;
    while ((std::size_t{1} << b) < n) ++b;
    return b;
}

CostReport cost_report(const ProtocolConfig& cfg) {
    const std::uint64_t q = 4ULL * cfg.t * ceil_log2(cfg.n);
    return {q, q};
}

double round_accept_prob(std::size_t t, double tau, double overlap) {
    const double p = (1.0 + overlap * overlap) / 2.0;
    const auto m = static_cast<std::size_t>(std::ceil(tau * static_cast<double>(t)));
    double total = 0.0;
    for (std::size_t c = m; c <= t; ++c) {
        const double log_binom = std::lgamma(static_cast<double>(t) + 1) - std::lgamma(static_cast<double>(c) + 1) -
                                 std::lgamma(static_cast<double>(t - c) + 1);
        total += std::exp(log_binom + static_cast<double>(c) * std::log(p) +
                          (t - c == 0 ? 0.0 : static_cast<double>(t - c) * std::log1p(-p)));
    }
    return std::min(total, 1.0);
}

RepetitionChoice choose_repetitions(std::size_t n, double tau, std::uint64_t cap) {
    if (n == 0) throw DomainError("n must be positive");
    const double nn = static_cast<double>(n);
    // Smallest overlap on a One shift, largest |overlap| on a Zero shift.
    std::optional<double> one_c, zero_c;
    for (std::size_t w = 0; w <= n; ++w) {
        const double c = std::abs(1.0 - 2.0 * static_cast<double>(w) / nn);
        const auto cls = classify_weight(w, n);
        if (cls == PromiseClass::One) one_c = one_c ? std::min(*one_c, c) : c;
        if (cls == PromiseClass::Zero) zero_c = zero_c ? std::max(*zero_c, c) : c;
    }
    RepetitionChoice best;
    best.one_overlap = one_c.value_or(1.0);
    best.zero_overlap = zero_c.value_or(0.0);
    bool found = false;
    for (std::size_t t = 1;; ++t) {
        const auto dim = joint_dimension(n, t);
        if (!dim || *dim > cap) break;
        double err = 0.0;
        if (one_c) err = std::max(err, 1.0 - round_accept_prob(t, tau, *one_c));
        if (zero_c) err = std::max(err, round_accept_prob(t, tau, *zero_c));
        if (!found || err < best.round_error) {
            best.t = t;
            best.round_error = err;
            found = true;
        }
    }
    if (!found) throw ResourceError("no repetition count fits the dimension cap at this n");
    return best;
}

}  // namespace shaplab
