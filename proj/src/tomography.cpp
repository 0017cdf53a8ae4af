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

#include "losr/tomography.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "losr/counts.hpp"
#include "losr/errors.hpp"
#include "losr/random.hpp"

namespace losr::tomo {

namespace {

constexpr char kAxes[] = {'X', 'Y', 'Z'};

MeasurementLayout pauli_layout() {
    std::vector<DichotomicObservable> axes{DichotomicObservable::pauli_x(), DichotomicObservable::pauli_y(),
                                           DichotomicObservable::pauli_z()};
    return MeasurementLayout({axes, axes, axes});
}

Setting setting_tuple(int setting) {
    return {setting / 9, (setting / 3) % 3, setting % 3};
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

TomographyDataset::TomographyDataset(const std::array<Row, kSettings> &rows) : rows_(rows) {
    for (int s = 0; s < kSettings; ++s) {
        double total = 0.0;
        for (double w : rows_[s]) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw InputError("tomography setting " + setting_name(s) + " has a negative weight");
            }
            total += w;
        }
        if (!(total > 0.0)) {
            throw InputError("tomography setting " + setting_name(s) + " has no events");
        }
    }
}

double TomographyDataset::row_total(int setting) const {
    double t = 0.0;
    for (double w : row(setting)) {
        t += w;
    }
    return t;
}

std::string TomographyDataset::setting_name(int setting) {
    if (setting < 0 || setting >= kSettings) {
        throw InputError("tomography setting index out of range");
    }
    return {kAxes[setting / 9], kAxes[(setting / 3) % 3], kAxes[setting % 3]};
}

int TomographyDataset::setting_index(std::string_view name) {
    if (name.size() != 3) {
        throw InputError("tomography setting must have three letters");
    }
    int index = 0;
    for (char c : name) {
        const char *pos = std::find(std::begin(kAxes), std::end(kAxes), c);
        if (pos == std::end(kAxes)) {
            throw InputError("tomography setting '" + std::string(name) + "' is not in {X,Y,Z}^3");
        }
        index = index * 3 + static_cast<int>(pos - std::begin(kAxes));
    }
    return index;
}

TomographyDataset load_tomography(std::istream &in) {
    std::array<TomographyDataset::Row, kSettings> rows{};
    std::array<bool, kSettings> seen{};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream ss(t);
        for (std::string f; std::getline(ss, f, ',');) {
            fields.push_back(trim(f));
        }
        if (!header_seen) {
            std::vector<std::string> expected{"setting"};
            expected.insert(expected.end(), kOutcomeColumns.begin(), kOutcomeColumns.end());
            if (fields != expected) {
                throw ParseError(line_no, "expected header 'setting,ppp,ppm,pmp,pmm,mpp,mpm,mmp,mmm'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 9) {
            throw ParseError(line_no, "expected 9 fields, found " + std::to_string(fields.size()));
        }
        int index = 0;
        try {
            index = TomographyDataset::setting_index(fields[0]);
        } catch (const InputError &e) {
            throw ParseError(line_no, e.what());
        }
        if (seen[index]) {
            throw ParseError(line_no, "duplicate setting " + fields[0]);
        }
        seen[index] = true;
        for (std::size_t k = 0; k < 8; ++k) {
            const std::string &f = fields[k + 1];
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
                throw ParseError(line_no, "count '" + f + "' is not a nonnegative integer");
            }
            rows[index][k] = static_cast<double>(v);
        }
    }
    if (!header_seen) {
        throw ParseError(0, "tomography file is empty");
    }
    for (int s = 0; s < kSettings; ++s) {
        if (!seen[s]) {
            throw ParseError(0, "tomography file is missing setting " + TomographyDataset::setting_name(s));
        }
    }
    return TomographyDataset(rows);
}

TomographyDataset load_tomography_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open tomography file " + path.string());
    }
    return load_tomography(in);
}

void write_tomography(std::ostream &out, const TomographyDataset &data) {
    out << "setting";
    for (const char *c : kOutcomeColumns) {
        out << ',' << c;
    }
    out << '\n';
    for (int s = 0; s < kSettings; ++s) {
        out << TomographyDataset::setting_name(s);
        for (double w : data.row(s)) {
            out << ',' << static_cast<std::uint64_t>(std::llround(w));
        }
        out << '\n';
    }
}

std::string pauli_string_name(int index) {
    static constexpr char symbols[] = {'I', 'X', 'Y', 'Z'};
    return {symbols[(index / 16) % 4], symbols[(index / 4) % 4], symbols[index % 4]};
}

PauliExpectations pauli_expectations(const TomographyDataset &data) {
    PauliExpectations out{};
    for (int s = 0; s < kPauliStrings; ++s) {
        const int digits[3] = {s / 16, (s / 4) % 4, s % 4};
        double sum = 0.0;
        int compatible = 0;
        for (int setting = 0; setting < kSettings; ++setting) {
            const Setting axes = setting_tuple(setting);
            bool ok = true;
            for (int k = 0; k < 3; ++k) {
                ok = ok && (digits[k] == 0 || digits[k] - 1 == axes[k]);
            }
            if (!ok) {
                continue;
            }
            const auto &row = data.row(setting);
            double signed_sum = 0.0;
            for (std::size_t o = 0; o < 8; ++o) {
                int sign = 1;
                for (int k = 0; k < 3; ++k) {
                    if (digits[k] != 0) {
                        sign *= outcome_sign(o, k, 3);
                    }
                }
                signed_sum += sign * row[o];
            }
            sum += signed_sum / data.row_total(setting);
            ++compatible;
        }
        out[s] = sum / compatible;
    }
    out[0] = 1.0;
    return out;
}

Matrix linear_inversion(const PauliExpectations &expectations) {
    Matrix rho = Matrix::Zero(8, 8);
    for (int s = 0; s < kPauliStrings; ++s) {
        rho += expectations[s] * pauli_operator(pauli_string_name(s));
    }
    return rho / 8.0;
}

QuantumState project_to_physical(const Matrix &h) {
    if (h.rows() != h.cols()) {
        throw DimensionError("projection needs a square matrix");
    }
    const Matrix herm = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    // Eigen sorts ascending; walk from the smallest eigenvalue upwards.
    Eigen::VectorXd lambda = solver.eigenvalues();
    const Eigen::Index d = lambda.size();
    if (std::abs(lambda.sum() - 1.0) > 1e-9) {
        throw DomainError("projection needs a unit-trace matrix");
    }
    double deficit = 0.0;
    Eigen::Index i = 0;
    for (; i < d; ++i) {
        const double remaining = static_cast<double>(d - i);
        if (lambda(i) + deficit / remaining < 0.0) {
            deficit += lambda(i);
            lambda(i) = 0.0;
        } else {
            break;
        }
    }
    const double shift = deficit / static_cast<double>(d - i);
    for (; i < d; ++i) {
        lambda(i) += shift;
    }
    Matrix rho = solver.eigenvectors() * lambda.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
    rho = (rho + rho.adjoint()) / 2.0;
    rho /= rho.trace().real();
    return QuantumState::mixed(std::move(rho));
}

ReconstructionResult reconstruct_point(const TomographyDataset &data, const QuantumState &target) {
    const Matrix raw = linear_inversion(pauli_expectations(data));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(raw, Eigen::EigenvaluesOnly);
    QuantumState rho = project_to_physical(raw);
    const double f = fidelity_with_pure(rho, target);
    return {std::move(rho), std::clamp(f, 0.0, 1.0), 0.0, solver.eigenvalues().minCoeff()};
}

ReconstructionResult reconstruct(const TomographyDataset &data, const QuantumState &target, int mc_samples,
                                 std::uint64_t seed) {
    if (mc_samples < 50) {
        throw DomainError("Monte Carlo error estimate needs at least 50 samples");
    }
    std::array<std::uint64_t, kSettings> shots{};
    for (int s = 0; s < kSettings; ++s) {
        const double t = data.row_total(s);
        if (std::abs(t - std::round(t)) > 1e-9) {
            throw InputError("Monte Carlo resampling needs whole-number counts");
        }
        shots[s] = static_cast<std::uint64_t>(std::llround(t));
        for (double w : data.row(s)) {
            if (std::abs(w - std::round(w)) > 1e-9) {
                throw InputError("Monte Carlo resampling needs whole-number counts");
            }
        }
    }
    ReconstructionResult result = reconstruct_point(data, target);
    std::vector<double> fidelities(static_cast<std::size_t>(mc_samples));
    parallel_for(fidelities.size(), [&](std::size_t i) {
        Rng rng = substream(seed, i);
        std::array<TomographyDataset::Row, kSettings> rows{};
        for (int s = 0; s < kSettings; ++s) {
            const auto drawn = sample_multinomial(rng, shots[s], data.row(s));
            // An all-zero draw is impossible: the row total is positive.
            std::copy(drawn.begin(), drawn.end(), rows[s].begin());
        }
        fidelities[i] = reconstruct_point(TomographyDataset(rows), target).fidelity;
    });
    double mean = 0.0;
    for (double f : fidelities) {
        mean += f;
    }
    mean /= mc_samples;
    double ss = 0.0;
    for (double f : fidelities) {
        ss += (f - mean) * (f - mean);
    }
    result.fidelity_sigma = std::sqrt(ss / (mc_samples - 1));
    return result;
}

TomographyDataset exact_dataset(const QuantumState &state) {
    if (state.n_qubits() != 3) {
        throw DimensionError("tomography covers three qubits");
    }
    const MeasurementLayout layout = pauli_layout();
    std::array<TomographyDataset::Row, kSettings> rows{};
    for (int s = 0; s < kSettings; ++s) {
        const auto p = outcome_distribution(state, layout, setting_tuple(s));
        std::copy(p.begin(), p.end(), rows[s].begin());
    }
    return TomographyDataset(rows);
}

TomographyDataset simulate_dataset(const QuantumState &state, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw DomainError("simulation needs at least one shot per setting");
    }
    const TomographyDataset exact = exact_dataset(state);
    std::array<TomographyDataset::Row, kSettings> rows{};
    for (int s = 0; s < kSettings; ++s) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(s));
        const auto drawn = sample_multinomial(rng, shots, exact.row(s));
        std::copy(drawn.begin(), drawn.end(), rows[s].begin());
    }
    return TomographyDataset(rows);
}

std::map<std::string, double> witness_terms(const TomographyDataset &data) {
    std::map<std::string, double> out;
    const int zzz = TomographyDataset::setting_index("ZZZ");
    out["HHH"] = data.row(zzz)[0] / data.row_total(zzz);
    out["VVV"] = data.row(zzz)[7] / data.row_total(zzz);
    for (const char *name : {"XXX", "XYY", "YXY", "YYX"}) {
        const int s = TomographyDataset::setting_index(name);
        double signed_sum = 0.0;
        for (std::size_t o = 0; o < 8; ++o) {
            signed_sum += outcome_sign(o, 0, 3) * outcome_sign(o, 1, 3) * outcome_sign(o, 2, 3) * data.row(s)[o];
        }
        out[name] = signed_sum / data.row_total(s);
    }
    return out;
}

}  // namespace losr::tomo
