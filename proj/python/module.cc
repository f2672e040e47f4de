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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "shaplab/errors.h"
#include "shaplab/experiment.h"

namespace py = pybind11;
using namespace shaplab;

namespace {

py::object to_py(const nlohmann::ordered_json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::ordered_json from_py(const py::object& o) {
    return nlohmann::ordered_json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

ProtocolConfig protocol(std::size_t n, std::optional<std::size_t> t, double tau) {
    ProtocolConfig pc = ProtocolConfig::for_n(n);
    pc.tau = tau;
    pc.t = t ? *t : choose_repetitions(n, tau).t;
    pc.validate();
    return pc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shifted approximate equality simulators and analysis checks";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
    py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);

    m.def(
        "sample",
        [](const std::string& dist, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return sample(DistributionSpec::parse(dist, n), rng).to_text();
        },
        py::arg("dist"), py::arg("n"), py::arg("seed"), "Draws one instance and returns its text form.");

    m.def(
        "shift_weights", [](const std::string& text) { return shift_weights(ShapInstance::from_text(text)); },
        py::arg("instance"));

    m.def(
        "classify", [](const std::string& text) { return std::string(to_string(classify(ShapInstance::from_text(text)))); },
        py::arg("instance"));

    m.def(
        "inner_product",
        [](const std::string& text, std::size_t i) { return inner_product(ShapInstance::from_text(text), ShiftIndex{i}); },
        py::arg("instance"), py::arg("shift"));

    m.def(
        "exact_answer_prob",
        [](const std::string& text, std::optional<std::size_t> t, double tau) {
            const auto inst = ShapInstance::from_text(text);
            return exact_answer_prob(inst, protocol(inst.size(), t, tau));
        },
        py::arg("instance"), py::arg("t") = py::none(), py::arg("tau") = 0.511,
        "Exact probability that the quantum protocol answers 1.");

    m.def(
        "mu1_tilde_density",
        [](const std::string& text, std::size_t i) {
            return mu1_tilde_density(ShapInstance::from_text(text), ShiftIndex{i}).get_str();
        },
        py::arg("instance"), py::arg("shift"), "Exact planted density as a 'p/q' string.");

    m.def(
        "qubits_sent", [](std::size_t n, std::size_t t) { return cost_report(protocol(n, t, 0.511)).qubits_sent; },
        py::arg("n"), py::arg("t"));

    m.def(
        "verify_suite",
        [](const std::string& suite, std::size_t trials, std::uint64_t seed, std::size_t n_max) {
            py::list out;
            for (const auto& r : run_verify_suite(suite, trials, seed, n_max)) out.append(to_py(r.to_json()));
            return out;
        },
        py::arg("suite"), py::arg("trials"), py::arg("seed"), py::arg("n_max") = 10);

    m.def(
        "run",
        [](const std::string& mode, const py::dict& options) {
            nlohmann::ordered_json j = from_py(options);
            j["mode"] = mode;
            const ExperimentConfig cfg = ExperimentConfig::merge_json(ExperimentConfig{}, j);
            RunReport rep;
            {
                py::gil_scoped_release release;
                rep = run(cfg);
            }
            return to_py(rep.to_json());
        },
        py::arg("mode"), py::arg("options") = py::dict(),
        "Runs one experiment; options use the JSON config keys. Returns the report as a dict.");

    m.def(
        "emit",
        [](const py::dict& report, const std::string& format) {
            std::ostringstream os;
            emit_report(RunReport::from_json(from_py(report)), parse_format(format), os);
            return os.str();
        },
        py::arg("report"), py::arg("format") = "csv");
}
