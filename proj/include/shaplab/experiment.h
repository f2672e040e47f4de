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
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shaplab/analysis.h"
#include "shaplab/quantum.h"

namespace shaplab {

enum class Mode { Quantum, Classical, Verify, Rectangle, Sweep };
enum class OutputFormat { Csv, Json, JsonLines };

const char* to_string(Mode m);
Mode parse_mode(std::string_view s);
const char* to_string(OutputFormat f);
OutputFormat parse_format(std::string_view s);

/// Names accepted by `verify --suite`, in execution order.
const std::vector<std::string>& verify_suite_names();

struct ExperimentConfig {
    Mode mode = Mode::Quantum;
    /// Instance length; `sweep` uses `n_list` instead.
    std::size_t n = 8;
    std::vector<std::size_t> n_list;
    /// Repetitions per round; unset means choose_repetitions(n, tau, cap).
    std::optional<std::size_t> t;
    double tau = 0.511;
    double eps = 0.1;
    /// Quantum: report the exact Pr[answer = 1] per instance instead of sampling.
    bool exact = false;
    /// Quantum: add the per-round trace column.
    bool trace = false;
    /// Instance distribution name (mu0, mu1, mu, mu1@i).
    std::string dist = "mu";
    std::optional<std::size_t> k;
    double c = 6.0;
    double theta = 13.0 / 30.0;
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::string suite = "all";
    std::size_t n_max = 10;
    /// Rectangle: file of instance lines; (x1, x2) goes to A and (y1, y2) to B.
    std::string sets;
    std::uint64_t cap = kDefaultDimensionCap;
    std::size_t threads = 1;
    std::optional<OutputFormat> format;
    /// Empty writes to stdout.
    std::string out;
    /// Adds wall-clock seconds to the summary (breaks byte-identical output).
    bool timing = false;

    /// Throws DomainError for invalid settings.
    void validate() const;
    OutputFormat effective_format() const;

    nlohmann::ordered_json to_json() const;
    /// Overlays the keys present in `j` onto `base`. Unknown keys are an error.
    static ExperimentConfig merge_json(ExperimentConfig base, const nlohmann::ordered_json& j);
};

using Cell = std::variant<std::uint64_t, double, std::string, bool>;

struct RunReport {
    Mode mode = Mode::Quantum;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    /// False when a verification failed; drives the exit code.
    bool ok = true;

    nlohmann::ordered_json to_json() const;
    static RunReport from_json(const nlohmann::ordered_json& j);

    bool operator==(const RunReport&) const = default;
};

/// 95% Wilson score interval for `errors` out of `total`.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t total);

/// Runs `body(i)` for i in [0, count) on `threads` workers. Results come back
/// in index order, so output never depends on scheduling. The first
/// exception thrown by any trial is rethrown after all workers stop.
template <typename T>
std::vector<T> parallel_trials(std::size_t count, std::size_t threads, const std::function<T(std::size_t)>& body);

RunReport run(const ExperimentConfig& cfg);

/// Writes `report` in `format`: CSV (header + one line per row, floats as
/// %.17g), a single JSON document, or one JSON object per row.
void emit_report(const RunReport& report, OutputFormat format, std::ostream& os);

std::string format_cell(const Cell& c);

/// Individual verify suites, exposed for tests. Each returns every report it
/// produced, trial by trial.
std::vector<VerifierReport> run_verify_suite(const std::string& suite, std::size_t trials, std::uint64_t seed,
                                             std::size_t n_max, std::size_t threads = 1);

/// Parses rectangle set files: one instance line per element.
RectanglePair read_rectangle_sets(std::istream& is);

}  // namespace shaplab

#include "shaplab/detail/parallel.h"
