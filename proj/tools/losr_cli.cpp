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

// losr: command-line front end for simulation, evaluation and auditing.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "losr/counts.hpp"
#include "losr/errors.hpp"
#include "losr/inequality.hpp"
#include "losr/spacetime.hpp"
#include "losr/tomography.hpp"
#include "losr/trials.hpp"
#include "losr/version.hpp"

namespace {

using nlohmann::ordered_json;

// Bisection cross-checks simulate 2^n x 2^n density matrices; keep them desk sized.
constexpr int kMaxBisectionParties = 8;

enum class Format { text, json };

ordered_json header(const std::string &command, std::uint64_t seed) {
    ordered_json j;
    j["command"] = command;
    j["version"] = losr::kVersion;
    j["seed"] = seed;
    return j;
}

void print_json(const ordered_json &j) {
    std::cout << j.dump(2) << '\n';
}

const char *model_name(losr::ResampleModel m) {
    return m == losr::ResampleModel::multinomial ? "multinomial" : "poisson";
}

int cmd_evaluate(const std::string &path, int resamples, std::uint64_t seed, const std::string &model_str,
                 Format format) {
    const auto model = model_str == "poisson" ? losr::ResampleModel::poisson : losr::ResampleModel::multinomial;
    const losr::CountsTable counts = losr::load_counts_file(path);
    const losr::InequalityReport report = losr::evaluate_counts(counts);
    const losr::StatReport stats = losr::bootstrap_sigma(counts, resamples, seed, model);
    const bool violation = report.violates_classical_bound();

    if (format == Format::json) {
        ordered_json j = header("evaluate", seed);
        j["counts"] = path;
        j["n_events"] = stats.n_events;
        j["resamples"] = stats.resamples;
        j["resample_model"] = model_name(model);
        ordered_json terms = ordered_json::object();
        for (const auto &t : report.terms) {
            terms[t.name] = t.value;
        }
        j["correlators"] = terms;
        j["i_bell"] = report.i_bell;
        j["i_same"] = report.i_same;
        j["c1_mean"] = report.c1_mean;
        j["f_value"] = report.f_value;
        j["sigma"] = stats.sigma;
        j["sigma_violation"] = stats.sigma_violation;
        j["excluded_resamples"] = stats.excluded;
        j["unstable"] = stats.unstable;
        j["classical_bound"] = report.classical_bound;
        j["quantum_max"] = report.quantum_max;
        j["violates_classical_bound"] = violation;
        print_json(j);
        return 0;
    }
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "losr " << losr::kVersion << " evaluate\n"
              << "counts:     " << path << " (" << stats.n_events << " events)\n"
              << "bootstrap:  " << stats.resamples << " " << model_name(model) << " resamples, seed " << seed
              << "\n\ncorrelators\n";
    for (const auto &t : report.terms) {
        std::cout << "  " << std::left << std::setw(18) << t.name << std::right << std::setw(9) << t.value << '\n';
    }
    std::cout << "\nI_Bell   " << std::setw(9) << report.i_bell << "\nI_Same   " << std::setw(9) << report.i_same
              << "\n<C1>     " << std::setw(9) << report.c1_mean << "\nF        " << std::setw(9) << report.f_value
              << " +- " << stats.sigma << "\n\n"
              << "bipartite-GPT bound      " << report.classical_bound << '\n'
              << "tripartite quantum bound " << report.quantum_max << '\n'
              << std::setprecision(2) << "(F - 2) / sigma          " << stats.sigma_violation << '\n';
    if (stats.excluded > 0) {
        std::cout << "excluded resamples       " << stats.excluded << (stats.unstable ? " (unstable)" : "") << '\n';
    }
    std::cout << "result: " << (violation ? "PASS, F exceeds the bound 2" : "FAIL, F does not exceed the bound 2")
              << '\n';
    return 0;
}

int cmd_simulate(double p, std::uint64_t pulses, double efficiency, std::uint64_t seed, const std::string &out_path,
                 const std::string &diag_path, Format format) {
    losr::trials::TrialConfig config;
    config.visibility = p;
    config.n_pulses = pulses;
    config.efficiency = {efficiency, efficiency, efficiency, efficiency};
    config.seed = seed;
    const auto run = losr::trials::run_trials(config);
    {
        std::ofstream out(out_path);
        if (!out) {
            throw losr::InputError("cannot write " + out_path);
        }
        out << "# simulated: visibility " << p << ", pulses " << pulses << ", efficiency " << efficiency
            << ", seed " << seed << ", losr " << losr::kVersion << '\n';
        losr::write_counts(out, run.counts);
    }
    const std::string diag = run.diagnostics.to_text();
    if (!diag_path.empty()) {
        std::ofstream d(diag_path);
        if (!d) {
            throw losr::InputError("cannot write " + diag_path);
        }
        d << "seed=" << seed << '\n' << diag;
    }
    if (format == Format::json) {
        ordered_json j = header("simulate", seed);
        j["out"] = out_path;
        j["visibility"] = p;
        j["pulses"] = pulses;
        j["efficiency"] = efficiency;
        j["accepted"] = run.diagnostics.accepted;
        j["acceptance_rate"] = run.diagnostics.acceptance_rate();
        j["trigger_plus_rate"] = run.diagnostics.trigger_plus_rate();
        j["bob_rejection_rate"] = run.diagnostics.bob_rejection_rate();
        j["warnings"] = run.diagnostics.warnings;
        print_json(j);
    } else {
        std::cout << "seed=" << seed << '\n' << diag;
    }
    return 0;
}

int cmd_thresholds(int n_max, Format format) {
    if (n_max < 3) {
        throw losr::DomainError("--n-max must be at least 3");
    }
    ordered_json rows = ordered_json::array();
    if (format == Format::text) {
        std::cout << "  N   p* closed   p* bisection   f* closed   f* from bisection\n";
    }
    for (int n = 3; n <= n_max; ++n) {
        const auto t = losr::thresholds(n);
        ordered_json row;
        row["n"] = n;
        row["visibility_threshold"] = t.visibility_threshold;
        row["fidelity_threshold"] = t.fidelity_threshold;
        std::ostringstream line;
        line << std::fixed << std::setprecision(6) << std::setw(3) << n << "   " << t.visibility_threshold;
        if (n <= kMaxBisectionParties) {
            const double pb = losr::bisect_visibility_threshold(n);
            const double fb = pb + (1.0 - pb) / std::ldexp(1.0, n);
            row["visibility_bisection"] = pb;
            row["fidelity_from_bisection"] = fb;
            row["agree"] = std::abs(pb - t.visibility_threshold) < 1e-6;
            line << "   " << pb << "       " << t.fidelity_threshold << "    " << fb;
        } else {
            row["visibility_bisection"] = nullptr;
            row["fidelity_from_bisection"] = nullptr;
            line << "   (skipped)      " << t.fidelity_threshold << "    (skipped)";
        }
        if (n == 3) {
            line << "   needs >=93% fidelity";
        }
        rows.push_back(row);
        if (format == Format::text) {
            std::cout << line.str() << '\n';
        }
    }
    if (format == Format::json) {
        ordered_json j = header("thresholds", 0);
        j["rows"] = rows;
        print_json(j);
    }
    return 0;
}

int cmd_tomo(const std::string &path, int mc, std::uint64_t seed, Format format) {
    const auto data = losr::tomo::load_tomography_file(path);
    const auto result = losr::tomo::reconstruct(data, losr::ghz_state(3), mc, seed);
    const double witness = losr::witness_fidelity(losr::tomo::witness_terms(data));
    const losr::Matrix rho = result.rho.density_matrix();
    if (format == Format::json) {
        ordered_json j = header("tomo", seed);
        j["data"] = path;
        j["mc_samples"] = mc;
        j["fidelity"] = result.fidelity;
        j["fidelity_sigma"] = result.fidelity_sigma;
        j["raw_min_eigenvalue"] = result.raw_min_eigenvalue;
        j["witness_fidelity"] = witness;
        ordered_json re = ordered_json::array(), im = ordered_json::array();
        for (Eigen::Index r = 0; r < 8; ++r) {
            ordered_json rr = ordered_json::array(), ii = ordered_json::array();
            for (Eigen::Index c = 0; c < 8; ++c) {
                rr.push_back(rho(r, c).real());
                ii.push_back(rho(r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ii);
        }
        j["rho_real"] = re;
        j["rho_imag"] = im;
        print_json(j);
        return 0;
    }
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "losr " << losr::kVersion << " tomo\n"
              << "data:               " << path << "\n"
              << "Monte Carlo:        " << mc << " samples, seed " << seed << "\n"
              << "fidelity with GHZ3: " << result.fidelity << " +- " << result.fidelity_sigma << '\n'
              << "witness fidelity:   " << witness << '\n'
              << "raw min eigenvalue: " << result.raw_min_eigenvalue << "\n\nRe(rho)\n";
    for (Eigen::Index r = 0; r < 8; ++r) {
        for (Eigen::Index c = 0; c < 8; ++c) {
            std::cout << std::setw(8) << rho(r, c).real();
        }
        std::cout << '\n';
    }
    std::cout << "Im(rho)\n";
    for (Eigen::Index r = 0; r < 8; ++r) {
        for (Eigen::Index c = 0; c < 8; ++c) {
            std::cout << std::setw(8) << rho(r, c).imag();
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_simulate_tomo(double p, std::uint64_t shots, std::uint64_t seed, const std::string &out_path) {
    const auto data = losr::tomo::simulate_dataset(losr::mix_white_noise(losr::ghz_state(3), p), shots, seed);
    std::ofstream out(out_path);
    if (!out) {
        throw losr::InputError("cannot write " + out_path);
    }
    out << "# simulated tomography: visibility " << p << ", shots " << shots << ", seed " << seed << '\n';
    losr::tomo::write_tomography(out, data);
    return 0;
}

int cmd_spacetime(const std::string &path, Format format) {
    const auto cfg = losr::spacetime::load_layout_file(path);
    const auto reports = losr::spacetime::audit(cfg.layout, cfg.chains);
    const auto warnings = losr::spacetime::chain_warnings(cfg.chains);
    bool all_pass = true;
    for (const auto &r : reports) {
        all_pass = all_pass && r.pass;
    }
    if (format == Format::json) {
        ordered_json j = header("spacetime", 0);
        j["layout"] = path;
        ordered_json choices = ordered_json::object();
        for (const auto &p : cfg.layout.parties) {
            const auto t = losr::spacetime::basis_choice_time(p, cfg.chains.at(p));
            choices[p] = {{"value", t.value}, {"uncertainty", t.uncertainty}};
        }
        j["earliest_basis_choice"] = choices;
        ordered_json list = ordered_json::array();
        for (const auto &r : reports) {
            list.push_back({{"detector", r.detector_node},
                            {"chooser", r.chooser_node},
                            {"margin_ns", r.margin},
                            {"uncertainty_ns", r.uncertainty},
                            {"pass", r.pass}});
        }
        j["closures"] = list;
        j["warnings"] = warnings;
        j["all_pass"] = all_pass;
        print_json(j);
        return 0;
    }
    std::cout << std::fixed << std::setprecision(1);
    std::cout << "losr " << losr::kVersion << " spacetime\nlayout: " << path << "\n\nearliest basis choice (ns)\n";
    for (const auto &p : cfg.layout.parties) {
        const auto t = losr::spacetime::basis_choice_time(p, cfg.chains.at(p));
        std::cout << "  " << std::left << std::setw(10) << p << std::right << std::setw(8) << t.value << '\n';
    }
    std::cout << "\nlocality closures (ns)\n";
    for (const auto &r : reports) {
        std::cout << "  " << std::left << std::setw(10) << r.detector_node << "from " << std::setw(10)
                  << r.chooser_node << std::right << std::setw(8) << r.margin << " +- " << r.uncertainty << "  "
                  << (r.pass ? "pass" : "FAIL") << '\n';
    }
    for (const auto &w : warnings) {
        std::cout << "warning: " << w << '\n';
    }
    std::cout << "overall: " << (all_pass ? "all closures pass" : "locality NOT closed") << '\n';
    return 0;
}

int cmd_witness(const std::string &path, Format format) {
    std::map<std::string, double> terms;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        terms = losr::tomo::witness_terms(losr::tomo::load_tomography_file(path));
    } else {
        std::ifstream in(path);
        if (!in) {
            throw losr::InputError("cannot open expectations file " + path);
        }
        try {
            const auto doc = nlohmann::json::parse(in);
            for (const auto &[k, v] : doc.items()) {
                terms[k] = v.get<double>();
            }
        } catch (const nlohmann::json::exception &e) {
            throw losr::InputError(std::string("expectations file: ") + e.what());
        }
    }
    const double f = losr::witness_fidelity(terms);
    if (format == Format::json) {
        ordered_json j = header("witness", 0);
        j["expectations"] = path;
        ordered_json t = ordered_json::object();
        for (const auto &k : losr::witness_keys()) {
            t[k] = terms.at(k);
        }
        j["terms"] = t;
        j["fidelity"] = f;
        print_json(j);
        return 0;
    }
    std::cout << std::fixed << std::setprecision(4) << "losr " << losr::kVersion << " witness\n";
    for (const auto &k : losr::witness_keys()) {
        std::cout << "  " << std::left << std::setw(5) << k << std::right << std::setw(9) << terms.at(k) << '\n';
    }
    std::cout << "fidelity with GHZ3: " << f << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulation and analysis of genuine multipartite nonlocality tests on GHZ states"};
    app.set_version_flag("--version", std::string(losr::kVersion));
    app.require_subcommand(1);

    std::string format_str = "text";
    auto add_format = [&](CLI::App *sub) {
        sub->add_option("--format", format_str, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    std::string counts_path, model = "multinomial";
    int resamples = 10000;
    std::uint64_t seed = 1;
    auto *evaluate = app.add_subcommand("evaluate", "Evaluate F with bootstrap errors from a counts CSV");
    evaluate->add_option("--counts", counts_path, "Counts CSV")->required();
    evaluate->add_option("--resamples", resamples, "Bootstrap resamples")->check(CLI::Range(100, 10000000));
    evaluate->add_option("--seed", seed, "Random seed");
    evaluate->add_option("--model", model, "Resampling model")->check(CLI::IsMember({"multinomial", "poisson"}));
    add_format(evaluate);

    double p = 1.0, efficiency = 1.0;
    std::uint64_t pulses = 1000000;
    std::string out_path, diag_path;
    auto *simulate = app.add_subcommand("simulate", "Simulate trials and write a counts CSV");
    simulate->add_option("--p", p, "White-noise visibility")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--pulses", pulses, "Number of pulses");
    simulate->add_option("--efficiency", efficiency, "Detection efficiency")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--seed", seed, "Random seed");
    simulate->add_option("--out", out_path, "Output counts CSV")->required();
    simulate->add_option("--diagnostics", diag_path, "Also write key=value diagnostics here");
    add_format(simulate);

    int n_max = 8;
    auto *thresholds = app.add_subcommand("thresholds", "Visibility and fidelity thresholds for N parties");
    thresholds->add_option("--n-max", n_max, "Largest party count")->check(CLI::Range(3, 64));
    add_format(thresholds);

    std::string tomo_path;
    int mc = 100;
    auto *tomo = app.add_subcommand("tomo", "Three-qubit tomography with Monte Carlo error");
    tomo->add_option("--data", tomo_path, "Tomography CSV")->required();
    tomo->add_option("--mc", mc, "Monte Carlo samples")->check(CLI::Range(50, 1000000));
    tomo->add_option("--seed", seed, "Random seed");
    add_format(tomo);

    std::uint64_t shots = 10000;
    auto *simulate_tomo = app.add_subcommand("simulate-tomo", "Simulate a 27-setting tomography dataset");
    simulate_tomo->add_option("--p", p, "White-noise visibility")->check(CLI::Range(0.0, 1.0));
    simulate_tomo->add_option("--shots", shots, "Shots per setting");
    simulate_tomo->add_option("--seed", seed, "Random seed");
    simulate_tomo->add_option("--out", out_path, "Output tomography CSV")->required();

    std::string layout_path;
    auto *spacetime = app.add_subcommand("spacetime", "Audit locality closures of a space-time layout");
    spacetime->add_option("--layout", layout_path, "Layout JSON")->required();
    add_format(spacetime);

    std::string expectations_path;
    auto *witness = app.add_subcommand("witness", "GHZ3 fidelity from witness expectations");
    witness->add_option("--expectations", expectations_path, "JSON expectations or tomography CSV")->required();
    add_format(witness);

    CLI11_PARSE(app, argc, argv);
    const Format format = format_str == "json" ? Format::json : Format::text;

    try {
        if (*evaluate) {
            return cmd_evaluate(counts_path, resamples, seed, model, format);
        }
        if (*simulate) {
            return cmd_simulate(p, pulses, efficiency, seed, out_path, diag_path, format);
        }
        if (*thresholds) {
            return cmd_thresholds(n_max, format);
        }
        if (*tomo) {
            return cmd_tomo(tomo_path, mc, seed, format);
        }
        if (*simulate_tomo) {
            return cmd_simulate_tomo(p, shots, seed, out_path);
        }
        if (*spacetime) {
            return cmd_spacetime(layout_path, format);
        }
        if (*witness) {
            return cmd_witness(expectations_path, format);
        }
    } catch (const std::exception &e) {
        std::cerr << "losr: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
