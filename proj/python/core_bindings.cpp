// Copyright 2026 The losr Authors
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

#include <fstream>
#include <map>
#include <string>

#include "pybind11/complex.h"
#include "pybind11/eigen.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

#include "losr/counts.hpp"
#include "losr/errors.hpp"
#include "losr/inequality.hpp"
#include "losr/optics.hpp"
#include "losr/spacetime.hpp"
#include "losr/tomography.hpp"
#include "losr/trials.hpp"
#include "losr/version.hpp"

namespace py = pybind11;
using namespace losr;

namespace {

using RowMap = std::map<std::string, std::array<std::uint64_t, 8>>;

CountsTable counts_from(const RowMap &rows) {
    CountsTable counts;
    for (const auto &[name, row] : rows) {
        counts.set_row(name, row);
    }
    return counts;
}

py::dict report_dict(const InequalityReport &r) {
    py::dict terms;
    for (const auto &t : r.terms) {
        terms[py::str(t.name)] = t.value;
    }
    py::dict d;
    d["f_value"] = r.f_value;
    d["i_bell"] = r.i_bell;
    d["i_same"] = r.i_same;
    d["c1_mean"] = r.c1_mean;
    d["n_parties"] = r.n_parties;
    d["classical_bound"] = r.classical_bound;
    d["quantum_max"] = r.quantum_max;
    d["violation"] = r.violates_classical_bound();
    d["terms"] = terms;
    return d;
}

ResampleModel parse_model(const std::string &model) {
    if (model == "multinomial") {
        return ResampleModel::multinomial;
    }
    if (model == "poisson") {
        return ResampleModel::poisson;
    }
    throw InputError("model must be 'multinomial' or 'poisson'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GHZ nonlocality analysis: inequality scores, counts statistics, tomography and timing audits.";
    m.attr("__version__") = kVersion;
    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.def(
        "ghz_density_matrix",
        [](int n, double p) { return mix_white_noise(ghz_state(n), p).density_matrix(); }, py::arg("n"),
        py::arg("p") = 1.0, "Density matrix of an n-qubit GHZ state mixed with white noise of weight 1 - p.");

    m.def(
        "f_score_white_noise", [](int n, double p) { return simulated_white_noise_f(n, p); }, py::arg("n"),
        py::arg("p"), "Inequality value F of the noisy GHZ_n state under the standard measurement layout.");

    m.def(
        "f_score_state",
        [](const Matrix &rho) {
            return report_dict(f_score(outcome_probabilities(QuantumState::mixed(rho), standard_layout())));
        },
        py::arg("rho"), "Full report for a three-qubit density matrix.");

    m.def(
        "thresholds",
        [](int n) {
            const auto t = thresholds(n);
            py::dict d;
            d["n_parties"] = t.n_parties;
            d["visibility"] = t.visibility_threshold;
            d["fidelity"] = t.fidelity_threshold;
            return d;
        },
        py::arg("n"));
    m.def("bisect_visibility_threshold", &bisect_visibility_threshold, py::arg("n"), py::arg("tolerance") = 1e-12);

    m.def(
        "load_counts",
        [](const std::string &path) {
            const auto counts = load_counts_file(path);
            RowMap rows;
            for (const auto &[name, row] : counts.rows()) {
                rows[name] = row;
            }
            return rows;
        },
        py::arg("path"), "Counts CSV as {setting: [8 counts]}.");

    m.def(
        "evaluate_counts", [](const RowMap &rows) { return report_dict(evaluate_counts(counts_from(rows))); },
        py::arg("counts"));

    m.def(
        "bootstrap_sigma",
        [](const RowMap &rows, int resamples, std::uint64_t seed, const std::string &model) {
            StatReport s;
            {
                py::gil_scoped_release release;
                s = bootstrap_sigma(counts_from(rows), resamples, seed, parse_model(model));
            }
            py::dict d;
            d["f_value"] = s.f_value;
            d["sigma"] = s.sigma;
            d["sigma_violation"] = s.sigma_violation;
            d["n_events"] = s.n_events;
            d["resamples"] = s.resamples;
            d["seed"] = s.seed;
            d["excluded"] = s.excluded;
            d["unstable"] = s.unstable;
            return d;
        },
        py::arg("counts"), py::arg("resamples") = 10000, py::arg("seed") = 1, py::arg("model") = "multinomial");

    m.def(
        "simulate_trials",
        [](double p, std::uint64_t pulses, double efficiency, std::uint64_t seed) {
            trials::TrialConfig config;
            config.visibility = p;
            config.n_pulses = pulses;
            config.efficiency.fill(efficiency);
            config.seed = seed;
            trials::TrialRun run;
            {
                py::gil_scoped_release release;
                run = trials::run_trials(config);
            }
            RowMap rows;
            for (const auto &[name, row] : run.counts.rows()) {
                rows[name] = row;
            }
            py::dict diag;
            diag["pulses"] = run.diagnostics.pulses;
            diag["accepted"] = run.diagnostics.accepted;
            diag["acceptance_rate"] = run.diagnostics.acceptance_rate();
            diag["trigger_plus_rate"] = run.diagnostics.trigger_plus_rate();
            diag["bob_rejection_rate"] = run.diagnostics.bob_rejection_rate();
            diag["warnings"] = run.diagnostics.warnings;
            return py::make_tuple(rows, diag);
        },
        py::arg("p"), py::arg("pulses"), py::arg("efficiency") = 1.0, py::arg("seed") = 1,
        "Event-level simulation; returns (counts, diagnostics).");

    m.def(
        "reconstruct",
        [](const std::string &path, int mc, std::uint64_t seed) {
            const auto data = tomo::load_tomography_file(path);
            const auto r = tomo::reconstruct(data, ghz_state(3), mc, seed);
            py::dict d;
            d["rho"] = r.rho.density_matrix();
            d["fidelity"] = r.fidelity;
            d["fidelity_sigma"] = r.fidelity_sigma;
            d["raw_min_eigenvalue"] = r.raw_min_eigenvalue;
            d["witness"] = witness_fidelity(tomo::witness_terms(data));
            return d;
        },
        py::arg("path"), py::arg("mc") = 100, py::arg("seed") = 1,
        "Tomography of a 27-setting CSV against GHZ3.");

    m.def(
        "simulate_tomography",
        [](const std::string &path, double p, std::uint64_t shots, std::uint64_t seed) {
            std::ofstream out(path);
            if (!out) {
                throw InputError("cannot write " + path);
            }
            tomo::write_tomography(out, tomo::simulate_dataset(mix_white_noise(ghz_state(3), p), shots, seed));
        },
        py::arg("path"), py::arg("p"), py::arg("shots"), py::arg("seed") = 1);

    m.def("witness_fidelity", &witness_fidelity, py::arg("expectations"));
    m.def("witness_operator", &ghz3_witness_operator);

    m.def(
        "effective_observable",
        [](double phase) {
            const auto o = optics::effective_observable(optics::SppmSetting{optics::degrees(-45), phase, optics::degrees(45)});
            return py::make_tuple(Matrix(o.matrix()), o.label());
        },
        py::arg("phase"), "Observable measured by the modulator chain at this phase, with its label.");

    m.def(
        "audit_spacetime",
        [](const std::string &path) {
            const auto config = spacetime::load_layout_file(path);
            py::list out;
            for (const auto &r : spacetime::audit(config.layout, config.chains)) {
                py::dict d;
                d["detector"] = r.detector_node;
                d["chooser"] = r.chooser_node;
                d["margin"] = r.margin;
                d["uncertainty"] = r.uncertainty;
                d["pass"] = r.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("path"));
}
