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

#include <sstream>

#include "shaplab/classical.h"
#include "shaplab/errors.h"
#include "shaplab/experiment.h"

using namespace shaplab;

namespace {

ExperimentConfig base(Mode m) {
    ExperimentConfig c;
    c.mode = m;
    c.seed = 2024;
    return c;
}

std::string emit(const RunReport& r, OutputFormat f) {
    std::ostringstream os;
    emit_report(r, f, os);
    return os.str();
}

std::size_t line_count(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST(Config, SeedRequiredExceptRectangle) {
    ExperimentConfig c;
    EXPECT_THROW(c.validate(), DomainError);
    c.seed = 1;
    EXPECT_NO_THROW(c.validate());
    c.mode = Mode::Rectangle;
    c.seed.reset();
    c.sets = "sets.txt";
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, MergeJsonOverlaysAndRejectsUnknownKeys) {
    const auto j = nlohmann::ordered_json::parse(R"({"mode":"classical","n":64,"k":10,"seed":7,"format":"json"})");
    const auto c = ExperimentConfig::merge_json(ExperimentConfig{}, j);
    EXPECT_EQ(c.mode, Mode::Classical);
    EXPECT_EQ(c.n, 64U);
    EXPECT_EQ(c.k, 10U);
    EXPECT_EQ(c.seed, 7U);
    EXPECT_EQ(c.effective_format(), OutputFormat::Json);
    EXPECT_EQ(c.trials, 100U);
    EXPECT_THROW(ExperimentConfig::merge_json({}, nlohmann::ordered_json::parse(R"({"nn":3})")), DomainError);
    EXPECT_THROW(ExperimentConfig::merge_json({}, nlohmann::ordered_json::parse(R"({"n":"x"})")), DomainError);
    const auto back = ExperimentConfig::merge_json({}, c.to_json());
    EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(Config, DefaultFormats) {
    EXPECT_EQ(base(Mode::Verify).effective_format(), OutputFormat::JsonLines);
    EXPECT_EQ(base(Mode::Quantum).effective_format(), OutputFormat::Csv);
}

TEST(Run, QuantumCsvHasOneLinePerTrial) {
    auto c = base(Mode::Quantum);
    c.trials = 25;
    const auto r = run(c);
    EXPECT_EQ(line_count(emit(r, OutputFormat::Csv)), 26U);
    EXPECT_EQ(r.summary["trials"], 25);
    c.trials = 0;
    EXPECT_EQ(emit(run(c), OutputFormat::Csv), "trial,n,t,true_class,answer,error,rounds\n");
}

TEST(Run, ReportJsonRoundTrip) {
    for (Mode m : {Mode::Quantum, Mode::Classical, Mode::Sweep}) {
        auto c = base(m);
        c.trials = 10;
        c.n = 16;
        c.n_list = {8, 16};
        const auto r = run(c);
        const auto back = RunReport::from_json(nlohmann::ordered_json::parse(r.to_json().dump()));
        EXPECT_EQ(back, r) << to_string(m);
    }
}

TEST(Run, DeterministicAcrossThreadCounts) {
    for (Mode m : {Mode::Quantum, Mode::Classical}) {
        auto c = base(m);
        c.trials = 40;
        c.n = 32;
        const auto one = emit(run(c), OutputFormat::Csv);
        c.threads = 4;
        EXPECT_EQ(emit(run(c), OutputFormat::Csv), one);
    }
    auto v = base(Mode::Verify);
    v.trials = 3;
    v.n_max = 6;
    const auto one = emit(run(v), OutputFormat::JsonLines);
    v.threads = 3;
    EXPECT_EQ(emit(run(v), OutputFormat::JsonLines), one);
}

TEST(Run, ClassicalRowsMatchProtocolRow) {
    auto c = base(Mode::Classical);
    c.trials = 15;
    c.n = 100;
    const auto r = run(c);
    const auto csv = emit(r, OutputFormat::Csv);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, sampling_csv_header());
    const SamplingConfig sc = SamplingConfig::for_n(100);
    for (std::size_t i = 0; i < 15; ++i) {
        Rng trial = Rng::for_trial(*c.seed, i);
        Rng inst_rng = trial.split(0);
        const auto inst = sample(DistributionSpec::mu(100), inst_rng);
        Rng proto_rng = trial.split(1);
        const auto out = run_sampling_protocol(inst, sc, proto_rng);
        std::getline(is, line);
        EXPECT_EQ(line, sampling_csv_row(sc, classify(inst), out));
    }
}

TEST(Run, SweepCostColumns) {
    auto c = base(Mode::Sweep);
    c.trials = 5;
    c.n_list = {16, 100};
    const auto r = run(c);
    ASSERT_EQ(r.rows.size(), 2U);
    for (const auto& row : r.rows) {
        const auto n = std::get<std::uint64_t>(row[0]);
        const auto t = std::get<std::uint64_t>(row[1]);
        const auto k = std::get<std::uint64_t>(row[4]);
        SamplingConfig sc = SamplingConfig::for_n(n);
        EXPECT_EQ(k, sc.sample_count());
        EXPECT_EQ(std::get<std::uint64_t>(row[5]), 2 * k);
        ProtocolConfig pc = ProtocolConfig::for_n(n);
        pc.t = t;
        EXPECT_EQ(std::get<std::uint64_t>(row[2]), cost_report(pc).qubits_sent);
    }
}

TEST(Run, VerifyAllSuitesHold) {
    auto c = base(Mode::Verify);
    c.trials = 5;
    c.n_max = 8;
    const auto r = run(c);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.summary["violations"], 0);
    const auto lines = emit(r, OutputFormat::JsonLines);
    EXPECT_EQ(line_count(lines), r.rows.size());
    const auto first = nlohmann::ordered_json::parse(lines.substr(0, lines.find('\n')));
    EXPECT_TRUE(first["params"].is_object());
    EXPECT_EQ(first["params"]["suite"], "minch");
}

TEST(Run, VerifySuiteRejectsUnknownName) {
    EXPECT_THROW(run_verify_suite("nope", 1, 1, 8), DomainError);
}

TEST(Run, RectangleFromSets) {
    std::istringstream is("n=3 x1=0 x2=0 y1=0 y2=0\n");
    const auto rect = read_rectangle_sets(is);
    EXPECT_EQ(rect.n, 3U);
    EXPECT_EQ(rect.a, std::vector<std::uint64_t>{0});
    EXPECT_EQ(rect.b, std::vector<std::uint64_t>{0});
}

TEST(Parallel, ResultsInIndexOrderAndLowestExceptionWins) {
    const auto r = parallel_trials<std::size_t>(100, 7, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < 100; ++i) ASSERT_EQ(r[i], i * i);
    EXPECT_THROW(parallel_trials<int>(10, 4,
                                      [](std::size_t i) -> int {
                                          if (i == 3) throw DomainError("three");
                                          if (i == 8) throw ResourceError("eight");
                                          return 0;
                                      }),
                 DomainError);
}

TEST(Wilson, Interval) {
    const auto [lo, hi] = wilson_interval(0, 100);
    EXPECT_NEAR(lo, 0.0, 1e-15);
    EXPECT_NEAR(hi, 0.037, 0.001);
    const auto [l2, h2] = wilson_interval(50, 100);
    EXPECT_NEAR(l2 + h2, 1.0, 1e-12);
}
