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


// Command-line experiment runner. See README.md for subcommands and schemas.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "shaplab/errors.h"
#include "shaplab/experiment.h"

namespace {

using shaplab::ExperimentConfig;
using shaplab::Mode;

// Exit codes.
constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;
constexpr int kAborted = 4;

struct Flags {
    std::string n;
    std::size_t t = 0;
    double tau = 0, eps = 0, c = 0, theta = 0;
    std::size_t k = 0, trials = 0, threads = 0, n_max = 0;
    std::uint64_t seed = 0, cap = 0;
    std::string dist, suite, sets, out, format, config;
    bool exact = false, trace = false, timing = false;
};

std::vector<std::size_t> parse_n_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != item.size() || item.empty()) throw shaplab::DomainError("invalid --n value '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw shaplab::DomainError("--n needs at least one value");
    return out;
}

struct Sub {
    CLI::App* app;
    Mode mode;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--n", f.n, "Instance length (sweep: comma-separated list)");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--trials", f.trials, "Number of trials");
    app->add_option("--out", f.out, "Output file (default stdout)");
    app->add_option("--format", f.format, "csv, json or jsonl")->check(CLI::IsMember({"csv", "json", "jsonl"}));
    app->add_option("--threads", f.threads, "Worker threads");
    app->add_option("--config", f.config, "JSON config file; flags override it");
    app->add_option("--cap", f.cap, "Joint state dimension cap");
    app->add_flag("--timing", f.timing, "Add wall-clock seconds to the summary");
}

bool given(const CLI::App* app, const char* name) {
    const CLI::Option* o = app->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
}

ExperimentConfig build_config(const CLI::App* app, Mode mode, const Flags& f) {
    ExperimentConfig cfg;
    cfg.mode = mode;
    if (mode == Mode::Sweep) cfg.n_list = {16, 32, 64, 128};
    if (given(app, "--config")) {
        std::ifstream in(f.config);
        if (!in) throw shaplab::ResourceError("cannot open config file '" + f.config + "'");
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw shaplab::DomainError(std::string("config file is not valid JSON: ") + e.what());
        }
        cfg = ExperimentConfig::merge_json(cfg, j);
        if (cfg.mode != mode) throw shaplab::DomainError("config file mode differs from the subcommand");
    }
    if (given(app, "--n")) {
        const auto ns = parse_n_list(f.n);
        if (mode == Mode::Sweep) {
            cfg.n_list = ns;
        } else {
            if (ns.size() != 1) throw shaplab::DomainError("--n takes a single value for this subcommand");
            cfg.n = ns[0];
        }
    }
    if (given(app, "--seed")) cfg.seed = f.seed;
    if (given(app, "--trials")) cfg.trials = f.trials;
    if (given(app, "--out")) cfg.out = f.out;
    if (given(app, "--format")) cfg.format = shaplab::parse_format(f.format);
    if (given(app, "--threads")) cfg.threads = f.threads;
    if (given(app, "--cap")) cfg.cap = f.cap;
    if (given(app, "--timing")) cfg.timing = f.timing;
    if (given(app, "--t")) cfg.t = f.t;
    if (given(app, "--tau")) cfg.tau = f.tau;
    if (given(app, "--eps")) cfg.eps = f.eps;
    if (given(app, "--exact")) cfg.exact = f.exact;
    if (given(app, "--trace")) cfg.trace = f.trace;
    if (given(app, "--dist")) cfg.dist = f.dist;
    if (given(app, "--k")) cfg.k = f.k;
    if (given(app, "--c")) {
        cfg.c = f.c;
        cfg.k.reset();
    }
    if (given(app, "--theta")) cfg.theta = f.theta;
    if (given(app, "--suite")) cfg.suite = f.suite;
    if (given(app, "--n-max")) cfg.n_max = f.n_max;
    if (given(app, "--sets")) cfg.sets = f.sets;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shifted-approximate-equality protocol experiments"};
    app.require_subcommand(1);
    Flags f;
    std::vector<Sub> subs;

    auto* q = app.add_subcommand("quantum", "Run the quantum swap-test protocol on sampled instances");
    add_common(q, f);
    q->add_option("--t", f.t, "Repetitions per round (default: chosen from n and tau)");
    q->add_option("--tau", f.tau, "Round accepts when at least ceil(tau t) tests accept");
    q->add_option("--eps", f.eps, "Target error for the analytic budget");
    q->add_flag("--exact", f.exact, "Report exact Pr[answer = 1] instead of sampling");
    q->add_flag("--trace", f.trace, "Add per-round measurement trace");
    q->add_option("--dist", f.dist, "Instance distribution: mu0, mu1, mu, mu1@<i>");
    subs.push_back({q, Mode::Quantum});

    auto* c = app.add_subcommand("classical", "Run the classical sampling protocol on sampled instances");
    add_common(c, f);
    auto* ko = c->add_option("--k", f.k, "Positions sampled from each string");
    auto* co = c->add_option("--c", f.c, "k = ceil(c sqrt(n ln n))");
    ko->excludes(co);
    c->add_option("--theta", f.theta, "Acceptance threshold on the estimated distance");
    c->add_option("--dist", f.dist, "Instance distribution: mu0, mu1, mu, mu1@<i>");
    subs.push_back({c, Mode::Classical});

    auto* v = app.add_subcommand("verify", "Run the numeric inequality suites");
    add_common(v, f);
    v->add_option("--suite", f.suite, "Suite name or 'all'");
    v->add_option("--n-max", f.n_max, "Largest cube dimension used by the suites");
    subs.push_back({v, Mode::Verify});

    auto* r = app.add_subcommand("rectangle", "Evaluate rectangle masses and the entropy condition");
    add_common(r, f);
    r->add_option("--sets", f.sets, "File of instance lines; (x1,x2) forms A, (y1,y2) forms B");
    subs.push_back({r, Mode::Rectangle});

    auto* s = app.add_subcommand("sweep", "Cost and error of both protocols across n");
    add_common(s, f);
    s->add_option("--t", f.t, "Repetitions per round (default: chosen per n)");
    s->add_option("--tau", f.tau, "Round threshold fraction");
    s->add_option("--k", f.k, "Fixed classical sample count");
    s->add_option("--c", f.c, "Classical sample multiplier");
    s->add_option("--theta", f.theta, "Classical threshold");
    s->add_option("--dist", f.dist, "Instance distribution: mu0, mu1, mu");
    subs.push_back({s, Mode::Sweep});

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& sub : subs) {
            if (!sub.app->parsed()) continue;
            const ExperimentConfig cfg = build_config(sub.app, sub.mode, f);
            const shaplab::RunReport report = shaplab::run(cfg);
            std::ostringstream buf;
            shaplab::emit_report(report, cfg.effective_format(), buf);
            if (cfg.out.empty()) {
                std::cout << buf.str();
                std::cout.flush();
            } else {
                std::ofstream out(cfg.out, std::ios::binary);
                out << buf.str();
                if (!out) throw shaplab::ResourceError("cannot write '" + cfg.out + "'");
            }
            if (cfg.mode == Mode::Verify) {
                std::cerr << report.summary.dump() << '\n';
            }
            return report.ok ? kOk : kVerificationFailed;
        }
    } catch (const shaplab::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const shaplab::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kResource;
    } catch (const shaplab::IntegrityError& e) {
        std::cerr << "aborted: " << e.what() << '\n';
        return kAborted;
    }
    return kUsage;
}
