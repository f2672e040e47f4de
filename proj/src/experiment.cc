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


#include "shaplab/experiment.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shaplab/classical.h"
#include "shaplab/errors.h"
#include "shaplab/shap.h"

namespace shaplab {

using nlohmann::ordered_json;

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Quantum:
            return "quantum";
        case Mode::Classical:
            return "classical";
        case Mode::Verify:
            return "verify";
        case Mode::Rectangle:
            return "rectangle";
        case Mode::Sweep:
            return "sweep";
    }
    return "?";
}

Mode parse_mode(std::string_view s) {
    for (Mode m : {Mode::Quantum, Mode::Classical, Mode::Verify, Mode::Rectangle, Mode::Sweep}) {
        if (s == to_string(m)) return m;
    }
    throw DomainError("unknown mode '" + std::string(s) + "'");
}

const char* to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv:
            return "csv";
        case OutputFormat::Json:
            return "json";
        case OutputFormat::JsonLines:
            return "jsonl";
    }
    return "?";
}

OutputFormat parse_format(std::string_view s) {
    for (OutputFormat f : {OutputFormat::Csv, OutputFormat::Json, OutputFormat::JsonLines}) {
        if (s == to_string(f)) return f;
    }
    throw DomainError("unknown format '" + std::string(s) + "' (csv, json, jsonl)");
}

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {"minch", "l1en",  "bb",     "kkl",   "lhyp",
                                                   "ndist", "noise", "parity", "lbound"};
    return names;
}

void ExperimentConfig::validate() const {
    const bool stochastic = mode != Mode::Rectangle;
    if (stochastic && !seed) throw DomainError("--seed is required for " + std::string(to_string(mode)));
    if (threads == 0) throw DomainError("--threads must be at least 1");
    switch (mode) {
        case Mode::Quantum: {
            ProtocolConfig pc = ProtocolConfig::for_n(n);
            pc.t = t.value_or(1);
            pc.tau = tau;
            pc.eps = eps;
            pc.cap = cap;
            pc.validate();
            DistributionSpec::parse(dist, n);
            break;
        }
        case Mode::Classical: {
            SamplingConfig sc = SamplingConfig::for_n(n);
            sc.k = k;
            sc.c = c;
            sc.theta = theta;
            sc.validate();
            DistributionSpec::parse(dist, n);
            break;
        }
        case Mode::Verify: {
            if (suite != "all") {
                const auto& names = verify_suite_names();
                if (std::find(names.begin(), names.end(), suite) == names.end()) {
                    throw DomainError("unknown suite '" + suite + "'");
                }
            }
            if (n_max < 2 || n_max > 12) throw DomainError("--n-max must lie in [2, 12]");
            break;
        }
        case Mode::Rectangle:
            if (sets.empty()) throw DomainError("rectangle needs --sets <file>");
            break;
        case Mode::Sweep:
            if (n_list.empty()) throw DomainError("sweep needs a non-empty --n list");
            for (auto v : n_list) {
                if (v < 2) throw DomainError("sweep lengths must be at least 2");
            }
            if (dist.starts_with("mu1@")) throw DomainError("sweep needs a length-free distribution (mu0, mu1, mu)");
            if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("tau must lie in (0, 1]");
            if (!(theta > 0.4 && theta < 7.0 / 15.0)) throw DomainError("theta must lie in (2/5, 7/15)");
            break;
    }
}

OutputFormat ExperimentConfig::effective_format() const {
    if (format) return *format;
    return mode == Mode::Verify ? OutputFormat::JsonLines : OutputFormat::Csv;
}

ordered_json ExperimentConfig::to_json() const {
    ordered_json j;
    j["mode"] = to_string(mode);
    j["n"] = n;
    j["n_list"] = n_list;
    j["t"] = t ? ordered_json(*t) : ordered_json(nullptr);
    j["tau"] = tau;
    j["eps"] = eps;
    j["exact"] = exact;
    j["trace"] = trace;
    j["dist"] = dist;
    j["k"] = k ? ordered_json(*k) : ordered_json(nullptr);
    j["c"] = c;
    j["theta"] = theta;
    j["trials"] = trials;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    j["suite"] = suite;
    j["n_max"] = n_max;
    j["sets"] = sets;
    j["cap"] = cap;
    j["threads"] = threads;
    j["format"] = format ? ordered_json(to_string(*format)) : ordered_json(nullptr);
    j["out"] = out;
    j["timing"] = timing;
    return j;
}

ExperimentConfig ExperimentConfig::merge_json(ExperimentConfig c, const ordered_json& j) {
    if (!j.is_object()) throw DomainError("config file must hold a JSON object");
    auto opt_size = [](const ordered_json& v) -> std::optional<std::size_t> {
        if (v.is_null()) return std::nullopt;
        return v.get<std::size_t>();
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "mode") c.mode = parse_mode(v.get<std::string>());
            else if (key == "n") c.n = v.get<std::size_t>();
            else if (key == "n_list") c.n_list = v.get<std::vector<std::size_t>>();
            else if (key == "t") c.t = opt_size(v);
            else if (key == "tau") c.tau = v.get<double>();
            else if (key == "eps") c.eps = v.get<double>();
            else if (key == "exact") c.exact = v.get<bool>();
            else if (key == "trace") c.trace = v.get<bool>();
            else if (key == "dist") c.dist = v.get<std::string>();
            else if (key == "k") c.k = opt_size(v);
            else if (key == "c") c.c = v.get<double>();
            else if (key == "theta") c.theta = v.get<double>();
            else if (key == "trials") c.trials = v.get<std::size_t>();
            else if (key == "seed") c.seed = v.is_null() ? std::nullopt : std::optional(v.get<std::uint64_t>());
            else if (key == "suite") c.suite = v.get<std::string>();
            else if (key == "n_max") c.n_max = v.get<std::size_t>();
            else if (key == "sets") c.sets = v.get<std::string>();
            else if (key == "cap") c.cap = v.get<std::uint64_t>();
            else if (key == "threads") c.threads = v.get<std::size_t>();
            else if (key == "format") c.format = v.is_null() ? std::nullopt : std::optional(parse_format(v.get<std::string>()));
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "timing") c.timing = v.get<bool>();
            else throw DomainError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
    return c;
}

namespace {

ordered_json cell_to_json(const Cell& c) {
    return std::visit([](const auto& v) { return ordered_json(v); }, c);
}

Cell cell_from_json(const ordered_json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return static_cast<double>(j.get<std::int64_t>());
    throw DomainError("unsupported cell value in report JSON");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string class_name(PromiseClass c) { return to_string(c); }

struct Tally {
    std::uint64_t trials = 0;
    std::uint64_t promise = 0;
    std::uint64_t one = 0;
    std::uint64_t zero = 0;
    double errors = 0.0;

    void add(PromiseClass cls, double err) {
        ++trials;
        if (cls == PromiseClass::One) ++one;
        if (cls == PromiseClass::Zero) ++zero;
        if (cls == PromiseClass::Undefined) return;
        ++promise;
        errors += err;
    }

    void write(ordered_json& s, bool exact) const {
        s["trials"] = trials;
        s["promise_trials"] = promise;
        s["class_one"] = one;
        s["class_zero"] = zero;
        s["class_undefined"] = trials - promise;
        const double rate = promise == 0 ? 0.0 : errors / static_cast<double>(promise);
        if (exact) {
            s["expected_errors"] = errors;
        } else {
            s["errors"] = static_cast<std::uint64_t>(std::llround(errors));
        }
        s["error_rate"] = rate;
        const auto [lo, hi] = wilson_interval(static_cast<std::uint64_t>(std::llround(errors)), promise);
        s["ci95_low"] = lo;
        s["ci95_high"] = hi;
    }
};

ProtocolConfig protocol_config(const ExperimentConfig& cfg, std::size_t n) {
    ProtocolConfig pc = ProtocolConfig::for_n(n);
    pc.t = cfg.t ? *cfg.t : choose_repetitions(n, cfg.tau, cfg.cap).t;
    pc.tau = cfg.tau;
    pc.eps = cfg.eps;
    pc.cap = cfg.cap;
    pc.validate();
    return pc;
}

SamplingConfig sampling_config(const ExperimentConfig& cfg, std::size_t n) {
    SamplingConfig sc = SamplingConfig::for_n(n);
    sc.k = cfg.k;
    sc.c = cfg.c;
    sc.theta = cfg.theta;
    sc.validate();
    return sc;
}

double class_error(PromiseClass cls, double p_one) {
    if (cls == PromiseClass::One) return 1.0 - p_one;
    if (cls == PromiseClass::Zero) return p_one;
    return 0.0;
}

RunReport run_quantum(const ExperimentConfig& cfg) {
    const ProtocolConfig pc = protocol_config(cfg, cfg.n);
    const DistributionSpec spec = DistributionSpec::parse(cfg.dist, cfg.n);
    const std::uint64_t seed = *cfg.seed;
    RunReport rep;
    if (cfg.exact) {
        rep.columns = {"trial", "n", "t", "true_class", "p_answer_one", "error_prob"};
    } else {
        rep.columns = {"trial", "n", "t", "true_class", "answer", "error", "rounds"};
        if (cfg.trace) rep.columns.push_back("trace");
    }
    struct Trial {
        PromiseClass cls;
        double err;
        std::vector<Cell> row;
    };
    auto trials = parallel_trials<Trial>(cfg.trials, cfg.threads, [&](std::size_t i) {
        Rng trial = Rng::for_trial(seed, i);
        Rng inst_rng = trial.split(0);
        const ShapInstance inst = sample(spec, inst_rng);
        const PromiseClass cls = classify(inst);
        Trial out{cls, 0.0, {}};
        out.row = {Cell{std::uint64_t{i}}, Cell{std::uint64_t{pc.n}}, Cell{std::uint64_t{pc.t}}, Cell{class_name(cls)}};
        if (cfg.exact) {
            const double p1 = exact_answer_prob(inst, pc);
            out.err = class_error(cls, p1);
            out.row.emplace_back(p1);
            out.row.emplace_back(cls == PromiseClass::Undefined ? Cell{std::string("NA")} : Cell{out.err});
        } else {
            Rng proto_rng = trial.split(1);
            const ProtocolRun run = run_protocol(inst, pc, proto_rng);
            out.err = class_error(cls, run.answer);
            out.row.emplace_back(std::uint64_t(run.answer));
            out.row.emplace_back(cls == PromiseClass::Undefined ? Cell{std::string("NA")}
                                                                : Cell{std::uint64_t(out.err > 0.5)});
            out.row.emplace_back(std::uint64_t{run.trace.size()});
            if (cfg.trace) {
                std::string tr = format_trace(run.trace);
                if (!tr.empty()) tr.pop_back();
                std::replace(tr.begin(), tr.end(), '\n', ';');
                out.row.emplace_back(tr);
            }
        }
        return out;
    });
    Tally tally;
    for (auto& tr : trials) {
        tally.add(tr.cls, tr.err);
        rep.rows.push_back(std::move(tr.row));
    }
    tally.write(rep.summary, cfg.exact);
    const CostReport cost = cost_report(pc);
    rep.summary["t"] = pc.t;
    rep.summary["accept_threshold"] = pc.accept_threshold();
    rep.summary["qubits_sent"] = cost.qubits_sent;
    rep.summary["entanglement_bits"] = cost.entanglement_bits;
    return rep;
}

RunReport run_classical(const ExperimentConfig& cfg) {
    const SamplingConfig sc = sampling_config(cfg, cfg.n);
    const DistributionSpec spec = DistributionSpec::parse(cfg.dist, cfg.n);
    const std::uint64_t seed = *cfg.seed;
    RunReport rep;
    // Rows are in trial order; the error of a row follows from true_class and answer.
    rep.columns = {"n", "k", "theta", "true_class", "answer", "min_west", "cost_bits"};
    struct Trial {
        PromiseClass cls;
        double err;
        std::vector<Cell> row;
    };
    auto trials = parallel_trials<Trial>(cfg.trials, cfg.threads, [&](std::size_t i) {
        Rng trial = Rng::for_trial(seed, i);
        Rng inst_rng = trial.split(0);
        const ShapInstance inst = sample(spec, inst_rng);
        const PromiseClass cls = classify(inst);
        Rng proto_rng = trial.split(1);
        const SamplingOutcome o = run_sampling_protocol(inst, sc, proto_rng);
        Trial out{cls, class_error(cls, o.answer), {}};
        out.row = {Cell{std::uint64_t{sc.n}},         Cell{std::uint64_t{sc.sample_count()}}, Cell{sc.theta},
                   Cell{class_name(cls)},              Cell{std::uint64_t(o.answer)},           Cell{o.min_estimate},
                   Cell{o.cost_bits}};
        return out;
    });
    Tally tally;
    for (auto& tr : trials) {
        tally.add(tr.cls, tr.err);
        rep.rows.push_back(std::move(tr.row));
    }
    tally.write(rep.summary, false);
    rep.summary["k"] = sc.sample_count();
    rep.summary["cost_bits"] = 2 * sc.sample_count();
    rep.summary["expected_collisions"] = expected_collisions(sc.n, sc.sample_count());
    return rep;
}

RunReport run_verify(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.columns = {"name", "lhs", "rhs", "slack", "holds", "params"};
    std::vector<std::string> suites;
    if (cfg.suite == "all") {
        suites = verify_suite_names();
    } else {
        suites = {cfg.suite};
    }
    ordered_json per_suite = ordered_json::object();
    std::uint64_t total = 0, failed = 0;
    for (const auto& s : suites) {
        const auto reports = run_verify_suite(s, cfg.trials, *cfg.seed, cfg.n_max, cfg.threads);
        std::uint64_t bad = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& r : reports) {
            rep.rows.push_back({Cell{r.name}, Cell{r.lhs}, Cell{r.rhs}, Cell{r.slack}, Cell{r.holds},
                                Cell{r.params.dump()}});
            if (!r.holds) ++bad;
            worst = std::min(worst, r.slack);
        }
        per_suite[s] = {{"reports", reports.size()},
                        {"violations", bad},
                        {"min_slack", reports.empty() ? 0.0 : worst}};
        total += reports.size();
        failed += bad;
    }
    rep.summary["reports"] = total;
    rep.summary["violations"] = failed;
    rep.summary["suites"] = per_suite;
    rep.ok = failed == 0;
    return rep;
}

std::string rational_text(const mpq_class& q) { return q.get_str(); }

RunReport run_rectangle(const ExperimentConfig& cfg) {
    std::ifstream in(cfg.sets);
    if (!in) throw ResourceError("cannot open sets file '" + cfg.sets + "'");
    const RectanglePair rect = read_rectangle_sets(in);
    RunReport rep;
    rep.columns = {"n",         "size_a",        "size_b",         "mu0_mass",           "mu1_mass",
                   "ratio",     "ratio_float",   "entropy_cond_a", "deficit_a",          "entropy_cond_b"};
    const std::size_t n = rect.n;
    std::vector<Cell> row = {Cell{std::uint64_t{n}}};
    std::vector<std::uint64_t> a = rect.a, b = rect.b;
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    row.emplace_back(std::uint64_t{a.size()});
    row.emplace_back(std::uint64_t{b.size()});
    if (n <= 6) {
        const RectangleBias bias = rectangle_bias(rect);
        row.emplace_back(rational_text(bias.mu0_mass));
        row.emplace_back(rational_text(bias.mu1_mass));
        row.emplace_back(rational_text(bias.ratio));
        row.emplace_back(bias.ratio.get_d());
    } else {
        for (int q = 0; q < 4; ++q) row.emplace_back(std::string("NA"));
    }
    if (n > 14) throw ResourceError("entropy condition supports n <= 14");
    const double ha = rectangle_entropy_condition(a, n);
    row.emplace_back(ha);
    row.emplace_back(static_cast<double>(n) - ha);
    row.emplace_back(rectangle_entropy_condition(b, n));
    rep.rows.push_back(std::move(row));
    rep.summary["rectangles"] = 1;
    return rep;
}

RunReport run_sweep(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.columns = {"n", "t", "quantum_qubits", "c", "k", "classical_bits", "quantum_error", "classical_error",
                   "promise_trials"};
    const std::uint64_t seed = *cfg.seed;
    for (auto n : cfg.n_list) {
        const ProtocolConfig pc = protocol_config(cfg, n);
        const SamplingConfig sc = sampling_config(cfg, n);
        const DistributionSpec spec = DistributionSpec::parse(cfg.dist, n);
        const std::uint64_t run_seed = Rng::derive(seed, n);
        struct Trial {
            PromiseClass cls;
            double q_err;
            double c_err;
        };
        auto trials = parallel_trials<Trial>(cfg.trials, cfg.threads, [&](std::size_t i) {
            Rng trial = Rng::for_trial(run_seed, i);
            Rng inst_rng = trial.split(0);
            const ShapInstance inst = sample(spec, inst_rng);
            const PromiseClass cls = classify(inst);
            if (cls == PromiseClass::Undefined) return Trial{cls, 0.0, 0.0};
            Rng proto_rng = trial.split(1);
            const SamplingOutcome o = run_sampling_protocol(inst, sc, proto_rng);
            return Trial{cls, class_error(cls, exact_answer_prob(inst, pc)), class_error(cls, o.answer)};
        });
        std::uint64_t promise = 0;
        double qe = 0.0, ce = 0.0;
        for (const auto& tr : trials) {
            if (tr.cls == PromiseClass::Undefined) continue;
            ++promise;
            qe += tr.q_err;
            ce += tr.c_err;
        }
        const double denom = promise == 0 ? 1.0 : static_cast<double>(promise);
        rep.rows.push_back({Cell{std::uint64_t{n}}, Cell{std::uint64_t{pc.t}}, Cell{cost_report(pc).qubits_sent},
                            Cell{cfg.c}, Cell{std::uint64_t{sc.sample_count()}},
                            Cell{std::uint64_t{2 * sc.sample_count()}}, Cell{qe / denom}, Cell{ce / denom},
                            Cell{promise}});
    }
    rep.summary["rows"] = rep.rows.size();
    return rep;
}

DenseDistribution convolve_noise_direct(const DenseDistribution& d, double delta) {
    const std::size_t sz = d.size();
    const std::size_t m = d.bits();
    std::vector<double> pw(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        pw[k] = std::pow(delta, static_cast<double>(k)) * std::pow(1.0 - delta, static_cast<double>(m - k));
    }
    std::vector<double> out(sz, 0.0);
    for (std::size_t y = 0; y < sz; ++y) {
        double acc = 0.0;
        for (std::size_t x = 0; x < sz; ++x) acc += d[x] * pw[std::popcount(x ^ y)];
        out[y] = acc;
    }
    return DenseDistribution::from_weights(m, std::move(out));
}

double max_abs_diff(const DenseDistribution& a, const DenseDistribution& b) {
    double m = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) m = std::max(m, std::abs(a[x] - b[x]));
    return m;
}

std::size_t draw_between(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

using SuiteFn = std::vector<VerifierReport> (*)(Rng&, std::size_t trial, std::size_t n_max);

std::vector<VerifierReport> suite_minch(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t m = draw_between(rng, 2, n_max);
    const std::size_t split = draw_between(rng, 1, m - 1);
    const bool sparse = rng.bernoulli(0.5);
    const DenseDistribution nu = random_distribution(m, rng, sparse);
    std::vector<VerifierReport> out;
    for (double d : {0.0, 1.0, 2.0, 4.0}) {
        for (auto& r : verify_minentropy_chain(nu, split, d)) out.push_back(std::move(r));
    }
    return out;
}

std::vector<VerifierReport> suite_l1en(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t m = draw_between(rng, 1, n_max);
    const DenseDistribution a = random_distribution(m, rng, rng.bernoulli(0.5));
    const DenseDistribution b = random_distribution(m, rng, rng.bernoulli(0.5));
    return {verify_l1_entropy(a, b)};
}

std::vector<VerifierReport> suite_bb(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t m = std::min<std::size_t>(8, n_max);
    const std::vector<double> f = random_function(m, rng);
    std::vector<VerifierReport> out;
    for (double p : {1.0, 1.5, 2.0}) {
        for (double q : {2.0, 3.0, 4.0}) out.push_back(verify_hypercontractive(f, p, q));
    }
    return out;
}

std::vector<VerifierReport> suite_kkl(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t m = std::min<std::size_t>(10, n_max);
    const std::size_t sz = std::size_t{1} << m;
    // +-1 values on a random support of random density.
    const double density = 0.02 + 0.98 * rng.uniform();
    std::vector<double> f(sz, 0.0);
    for (auto& v : f) {
        if (rng.bernoulli(density)) v = rng.bernoulli(0.5) ? 1.0 : -1.0;
    }
    if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[rng.below(sz)] = 1.0;
    std::vector<VerifierReport> out;
    for (double d : {0.0, 0.25, 0.5, 1.0}) {
        for (auto& r : verify_kkl(f, d, 2.0)) out.push_back(std::move(r));
    }
    return out;
}

std::vector<VerifierReport> suite_lhyp(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t hi = std::min<std::size_t>(12, n_max);
    const std::size_t n = draw_between(rng, std::min<std::size_t>(4, hi), hi);
    const auto r = verify_lhyp(random_distribution(n, rng, rng.bernoulli(0.5)));
    return {r[0], r[1]};
}

std::vector<VerifierReport> suite_ndist(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t n = std::min<std::size_t>(9, n_max);
    const auto r = verify_ndist(random_distribution(n, rng, rng.bernoulli(0.5)));
    return {r[0], r[1]};
}

std::vector<VerifierReport> suite_noise(Rng& rng, std::size_t, std::size_t n_max) {
    const std::size_t m = draw_between(rng, 1, std::min<std::size_t>(10, n_max));
    const DenseDistribution d = random_distribution(m, rng, rng.bernoulli(0.5));
    const double delta = 0.5 * rng.uniform();
    const double conv = max_abs_diff(apply_noise(d, delta), convolve_noise_direct(d, delta));
    const double comp = max_abs_diff(apply_noise(apply_noise(d, 0.25), 0.25), apply_noise(d, 0.375));
    ordered_json params = {{"m", m}, {"delta", delta}};
    return {VerifierReport::make("noise_multiplier_vs_convolution", conv, 1e-12, params),
            VerifierReport::make("noise_composition", comp, 1e-12, params)};
}

// Noiseless and noisy shift-XOR deficits of the even-parity distribution on 2n bits.
std::vector<VerifierReport> parity_reports(std::size_t n) {
    const DenseDistribution nu = DenseDistribution::even_parity(2 * n);
    double clean = 0.0, noisy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const DenseDistribution z = shift_xor_distribution(nu, i);
        clean += static_cast<double>(n) - entropy(z);
        noisy += static_cast<double>(n) - entropy(apply_noise(z, 0.25));
    }
    clean /= static_cast<double>(n);
    noisy /= static_cast<double>(n);
    ordered_json params = {{"n", n}, {"noiseless_deficit", clean}, {"noisy_deficit", noisy}};
    return {VerifierReport::make("parity_noiseless_deficit", std::abs(clean - 1.0), 1e-12, params),
            VerifierReport::make("parity_noisy_deficit", noisy, std::exp2(-static_cast<double>(n)), params)};
}

std::vector<VerifierReport> suite_lbound(Rng& rng, std::size_t trial, std::size_t n_max) {
    const std::size_t hi = std::max<std::size_t>(1, std::min<std::size_t>(5, n_max / 2));
    const std::size_t n = draw_between(rng, 1, hi);
    DenseDistribution nu = random_distribution(2 * n, rng, rng.bernoulli(0.5));
    if (trial % 2 == 1) {
        // Uniform with s bits of X2 fixed to zero.
        const std::size_t s = draw_between(rng, 1, n);
        std::vector<std::uint64_t> support;
        const std::uint64_t fixed = ((std::uint64_t{1} << s) - 1) << n;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << (2 * n)); ++x) {
            if ((x & fixed) == 0) support.push_back(x);
        }
        nu = DenseDistribution::uniform_on(2 * n, support);
    }
    const LboundEvaluation ev = lbound_evaluator(nu);
    ordered_json params = {{"n", n},
                           {"condition_value", ev.condition_value},
                           {"delta", ev.delta},
                           {"condition_met", ev.condition_met}};
    if (!ev.condition_met) {
        params["skipped"] = true;
        return {VerifierReport::make("lbound", 0.0, 0.0, params)};
    }
    return {VerifierReport::make("lbound", ev.min_entropy, ev.bound_rhs, params)};
}

SuiteFn suite_fn(const std::string& name) {
    if (name == "minch") return suite_minch;
    if (name == "l1en") return suite_l1en;
    if (name == "bb") return suite_bb;
    if (name == "kkl") return suite_kkl;
    if (name == "lhyp") return suite_lhyp;
    if (name == "ndist") return suite_ndist;
    if (name == "noise") return suite_noise;
    if (name == "lbound") return suite_lbound;
    throw DomainError("unknown suite '" + name + "'");
}

}  // namespace

std::vector<VerifierReport> run_verify_suite(const std::string& suite, std::size_t trials, std::uint64_t seed,
                                             std::size_t n_max, std::size_t threads) {
    const auto& names = verify_suite_names();
    const auto pos = std::find(names.begin(), names.end(), suite);
    if (pos == names.end()) throw DomainError("unknown suite '" + suite + "'");
    if (n_max < 2) throw DomainError("n_max must be at least 2");
    std::vector<std::vector<VerifierReport>> batches;
    if (suite == "parity") {
        // Trials do not apply; one pass over the even lengths up to n_max.
        std::vector<std::size_t> lengths;
        for (std::size_t n = 4; n <= std::min<std::size_t>(10, n_max); n += 2) lengths.push_back(n);
        batches = parallel_trials<std::vector<VerifierReport>>(
            lengths.size(), threads, [&](std::size_t i) { return parity_reports(lengths[i]); });
    } else {
        const SuiteFn fn = suite_fn(suite);
        const std::uint64_t suite_seed = Rng::derive(seed, static_cast<std::uint64_t>(pos - names.begin()));
        batches = parallel_trials<std::vector<VerifierReport>>(trials, threads, [&](std::size_t i) {
            Rng rng = Rng::for_trial(suite_seed, i);
            auto reports = fn(rng, i, n_max);
            for (auto& r : reports) {
                nlohmann::ordered_json p = {{"suite", suite}, {"trial", i}};
                p.update(r.params);
                r.params = std::move(p);
            }
            return reports;
        });
    }
    std::vector<VerifierReport> out;
    for (auto& b : batches) {
        for (auto& r : b) {
            if (!r.params.contains("suite")) {
                nlohmann::ordered_json p = {{"suite", suite}};
                p.update(r.params);
                r.params = std::move(p);
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t total) {
    if (total == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(total);
    const double p = static_cast<double>(errors) / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

RectanglePair read_rectangle_sets(std::istream& is) {
    RectanglePair rect;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        ShapInstance inst = ShapInstance::from_text(line);
        if (rect.n == 0) rect.n = inst.size();
        if (inst.size() != rect.n) throw DomainError("line " + std::to_string(lineno) + ": length differs");
        if (rect.n > 14) throw ResourceError("rectangle sets support n <= 14");
        rect.a.push_back(pack_pair(inst.x1, inst.x2));
        rect.b.push_back(pack_pair(inst.y1, inst.y2));
    }
    if (rect.a.empty()) throw DomainError("sets file holds no instances");
    return rect;
}

RunReport run(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    switch (cfg.mode) {
        case Mode::Quantum:
            rep = run_quantum(cfg);
            break;
        case Mode::Classical:
            rep = run_classical(cfg);
            break;
        case Mode::Verify:
            rep = run_verify(cfg);
            break;
        case Mode::Rectangle:
            rep = run_rectangle(cfg);
            break;
        case Mode::Sweep:
            rep = run_sweep(cfg);
            break;
    }
    rep.mode = cfg.mode;
    rep.config = cfg.to_json();
    if (cfg.timing) {
        rep.summary["wall_clock_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return rep;
}

ordered_json RunReport::to_json() const {
    ordered_json j;
    j["mode"] = to_string(mode);
    j["config"] = config;
    j["columns"] = columns;
    ordered_json rs = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row = ordered_json::array();
        for (const auto& c : r) row.push_back(cell_to_json(c));
        rs.push_back(std::move(row));
    }
    j["rows"] = std::move(rs);
    j["summary"] = summary;
    j["ok"] = ok;
    return j;
}

RunReport RunReport::from_json(const ordered_json& j) {
    RunReport r;
    try {
        r.mode = parse_mode(j.at("mode").get<std::string>());
        r.config = j.at("config");
        r.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& row : j.at("rows")) {
            std::vector<Cell> cells;
            for (const auto& c : row) cells.push_back(cell_from_json(c));
            if (cells.size() != r.columns.size()) throw DomainError("row width differs from column count");
            r.rows.push_back(std::move(cells));
        }
        r.summary = j.at("summary");
        r.ok = j.at("ok").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed report JSON: ") + e.what());
    }
    return r;
}

std::string format_cell(const Cell& c) {
    if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
    if (const auto* d = std::get_if<double>(&c)) return fmt17(*d);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

void emit_report(const RunReport& report, OutputFormat format, std::ostream& os) {
    switch (format) {
        case OutputFormat::Csv: {
            for (std::size_t i = 0; i < report.columns.size(); ++i) {
                os << (i ? "," : "") << csv_escape(report.columns[i]);
            }
            os << '\n';
            for (const auto& row : report.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
                os << '\n';
            }
            break;
        }
        case OutputFormat::Json:
            os << report.to_json().dump(2) << '\n';
            break;
        case OutputFormat::JsonLines:
            for (const auto& row : report.rows) {
                ordered_json obj;
                for (std::size_t i = 0; i < row.size(); ++i) {
                    const auto* s = std::get_if<std::string>(&row[i]);
                    if (report.columns[i] == "params" && s != nullptr) {
                        obj[report.columns[i]] = ordered_json::parse(*s);
                    } else {
                        obj[report.columns[i]] = cell_to_json(row[i]);
                    }
                }
                os << obj.dump() << '\n';
            }
            break;
    }
    if (!os) throw ResourceError("failed writing report");
}

}  // namespace shaplab
