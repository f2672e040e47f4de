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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shaplab/bits.h"
#include "shaplab/rng.h"
#include "shaplab/shap.h"

namespace shaplab {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultDimensionCap = std::uint64_t{1} << 24;

/// One repetition of the referee's state in the compressed basis
/// |k,k>|j,j> ~ |k,j>, k indexing Alice/Bob's first shared pair and j the
/// second. amp[k * n + j].
struct PairedState {
    std::size_t n = 0;
    std::vector<Amplitude> amp;

    double norm_sq() const;
    Amplitude at(std::size_t k, std::size_t j) const { return amp[k * n + j]; }
};

/// t-fold tensor power of the paired space: repetition r is digit r of the
/// index in base n^2.
struct JointState {
    std::size_t n = 0;
    std::size_t t = 0;
    std::vector<Amplitude> amp;

    /// psi^{(x) t}; throws ResourceError when n^(2t) exceeds `cap`.
    static JointState repeated(const PairedState& single, std::size_t t, std::uint64_t cap = kDefaultDimensionCap);

    double norm_sq() const;
};

/// n^(2t), or nullopt if it overflows 64 bits.
std::optional<std::uint64_t> joint_dimension(std::size_t n, std::size_t t);

struct ProtocolConfig {
    std::size_t n = 0;
    /// Parallel repetitions per shift test.
    std::size_t t = 1;
    /// A round accepts when at least ceil(tau * t) repetitions accept.
    double tau = 0.511;
    /// Target overall error; only feeds eps_prime() and the analytic budget.
    double eps = 0.1;
    /// Empty means 0..n-1.
    std::vector<std::size_t> shift_order;
    std::uint64_t cap = kDefaultDimensionCap;

    static ProtocolConfig for_n(std::size_t n) {
        ProtocolConfig c;
        c.n = n;
        return c;
    }

    /// Throws DomainError / ResourceError on invalid settings.
    void validate() const;
    std::size_t accept_threshold() const;
    std::vector<std::size_t> order() const;
    /// eps^2 / (16 n^4): per-round error that makes the union over n rounds
    /// of the disturbance bound at most eps.
    double eps_prime() const;
};

enum class Outcome { Accept, Reject };

const char* to_string(Outcome o);

/// psi(k, j) = (1/n) (-1)^(x1(k)+y1(k)) (-1)^(x2(j)+y2(j)).
PairedState prepare_initial(const ShapInstance& inst);

/// <A2|B1> for round i, evaluated by summing amplitudes of the shifted A
/// register against B. Checked against 1 - 2w/n to 1e-12.
double inner_product(const ShapInstance& inst, ShiftIndex i);

/// 1 - 2 w / n.
double inner_product_closed_form(const ShapInstance& inst, ShiftIndex i);

/// Basis map of the conjugated swap W_i on one repetition:
/// |k, j> -> |j - i, k + i> (mod n), i.e. shift A's labels, exchange the two
/// message pairs, undo the shift. W_i is an involution.
std::vector<std::uint32_t> shift_swap_map(std::size_t n, ShiftIndex i);

PairedState shift_swap(const PairedState& state, ShiftIndex i);
/// W_i acting on repetition r of a joint state.
JointState shift_swap(const JointState& state, ShiftIndex i, std::size_t repetition);

/// <psi| W_i |psi>; real because W_i is a real permutation and symmetric.
double swap_expectation(const PairedState& state, ShiftIndex i);

/// (1 + <psi|W_i|psi>) / 2. Throws IntegrityError if |psi| drifted from 1.
double swap_accept_prob(const PairedState& state, ShiftIndex i);

/// Pi_i psi where Pi_i sums the outcome patterns of the t swap tests with at
/// least `cfg.accept_threshold()` accepts; each repetition's projectors are
/// (I +- W_i) / 2. Not renormalized.
JointState project_accept(const JointState& state, ShiftIndex i, const ProtocolConfig& cfg);

struct RoundResult {
    Outcome outcome = Outcome::Reject;
    JointState post;
    double p_accept = 0.0;
};

/// Samples (Pi_i, I - Pi_i) and returns the renormalized post-measurement
/// state. Throws IntegrityError when the sampled outcome is numerically empty
/// or the projection leaks norm.
RoundResult measure_round(const JointState& state, ShiftIndex i, const ProtocolConfig& cfg, Rng& rng);

struct RoundRecord {
    std::size_t round = 0;
    double p_accept = 0.0;
    Outcome outcome = Outcome::Reject;
};

struct ProtocolRun {
    int answer = 0;
    /// One record per measured round; the run stops at the first accept
    /// since the answer is fixed from then on.
    std::vector<RoundRecord> trace;
};

ProtocolRun run_protocol(const ShapInstance& inst, const ProtocolConfig& cfg, Rng& rng);

/// `round=<i> p_accept=<float17> outcome=<A|R>` lines.
std::string format_trace(const std::vector<RoundRecord>& trace);

/// Pr[answer = 1] = 1 - |(I - Pi_{last}) ... (I - Pi_first) psi|^2.
double exact_answer_prob(const ShapInstance& inst, const ProtocolConfig& cfg);

struct DisturbanceRound {
    std::size_t round = 0;
    PromiseClass shift_class = PromiseClass::Undefined;
    /// Unset for rounds whose ShAp_i is undefined; those rounds are skipped.
    std::optional<Outcome> right;
    /// Right-outcome probability on the untouched initial state.
    double p_right_fresh = 0.0;
    /// Right-outcome probability conditioned on every earlier round being right.
    double p_right_path = 0.0;
    /// 1 - p_right_path.
    double eps_j = 0.0;
    /// Probability that round j is the first wrong one.
    double first_wrong = 0.0;
    bool within_bound = true;
};

struct DisturbanceReport {
    std::vector<DisturbanceRound> rounds;
    std::vector<std::size_t> undefined_rounds;
    /// Largest single-round error measured on the fresh state.
    double eps_prime_emp = 0.0;
    /// 4 n sqrt(eps_prime_emp).
    double per_round_bound = 0.0;
    /// 4 n^2 sqrt(eps_prime_emp).
    double total_bound = 0.0;
    double eps_sum = 0.0;
    /// Sum of first-wrong probabilities: the protocol's error on this input.
    double cumulative_error = 0.0;
    /// 4 n^2 sqrt(cfg.eps_prime()), i.e. cfg.eps.
    double analytic_budget = 0.0;
    bool holds = true;
};

DisturbanceReport disturbance_report(const ShapInstance& inst, const ProtocolConfig& cfg);

struct CostReport {
    std::uint64_t qubits_sent = 0;
    std::uint64_t entanglement_bits = 0;
};

/// 4 t ceil(log2 n): each player sends t pairs of ceil(log2 n)-qubit registers.
CostReport cost_report(const ProtocolConfig& cfg);

std::size_t ceil_log2(std::size_t n);

/// Pr[at least ceil(tau t) of t independent swap tests accept] when every
/// test sees overlap c (accept probability (1 + c^2) / 2).
double round_accept_prob(std::size_t t, double tau, double overlap);

struct RepetitionChoice {
    std::size_t t = 1;
    /// max(miss on the weakest One shift, false accept on the strongest Zero shift).
    double round_error = 1.0;
    double one_overlap = 0.0;
    double zero_overlap = 0.0;
};

/// Picks the t with the smallest worst-case single-round error among those
/// whose joint dimension fits `cap`, using the exact promise extremes at n.
RepetitionChoice choose_repetitions(std::size_t n, double tau, std::uint64_t cap = kDefaultDimensionCap);

}  // namespace shaplab
