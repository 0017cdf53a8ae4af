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

#include "losr/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "losr/errors.hpp"
#include "losr/tolerances.hpp"

namespace losr {

namespace {

int qubits_for_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    if ((Eigen::Index{1} << n) != dim || n < 1 || n > kMaxQubits) {
        throw DimensionError("state dimension " + std::to_string(dim) + " is not 2^n with 1 <= n <= 16");
    }
    return n;
}

// In-place single-qubit operator on a strided array of 2^n complex values.
void apply_local_raw(Complex *data, Eigen::Index stride, int n_qubits, int party, const Matrix2 &op) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t mask = std::size_t{1} << (n_qubits - 1 - party);
    const Complex m00 = op(0, 0), m01 = op(0, 1), m10 = op(1, 0), m11 = op(1, 1);
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) {
            continue;
        }
        Complex &lo = data[i * stride];
        Complex &hi = data[(i | mask) * stride];
        const Complex a = lo, b = hi;
        lo = m00 * a + m01 * b;
        hi = m10 * a + m11 * b;
    }
}

void check_layout_matches(const QuantumState &state, const MeasurementLayout &layout) {
    if (state.n_qubits() != layout.n_parties()) {
        throw LayoutError("layout has " + std::to_string(layout.n_parties()) + " parties but the state has " +
                          std::to_string(state.n_qubits()) + " qubits");
    }
}

}  // namespace

QuantumState QuantumState::pure(Vector amplitudes) {
    const int n = qubits_for_dim(amplitudes.size());
    if (std::abs(amplitudes.norm() - 1.0) > tol::kStateNorm) {
        throw DomainError("state vector is not normalized (norm " + std::to_string(amplitudes.norm()) + ")");
    }
    return QuantumState(n, std::move(amplitudes));
}

QuantumState QuantumState::mixed(Matrix rho) {
    if (rho.rows() != rho.cols()) {
        throw DimensionError("density matrix is not square");
    }
    const int n = qubits_for_dim(rho.rows());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol::kDensityHermitian) {
        throw DomainError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > tol::kDensityTrace) {
        throw DomainError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < tol::kDensityMinEigenvalue) {
        throw DomainError("density matrix has eigenvalue " + std::to_string(solver.eigenvalues().minCoeff()));
    }
    return QuantumState(n, std::move(rho));
}

const Vector &QuantumState::amplitudes() const {
    if (const auto *v = std::get_if<Vector>(&repr_)) {
        return *v;
    }
    throw UnsupportedError("state is mixed; no amplitude vector");
}

Matrix QuantumState::density_matrix() const {
    if (const auto *v = std::get_if<Vector>(&repr_)) {
        return (*v) * v->adjoint();
    }
    return std::get<Matrix>(repr_);
}

DichotomicObservable::DichotomicObservable(const Matrix2 &matrix, std::string label)
    : matrix_(matrix), label_(std::move(label)) {
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol::kDichotomic) {
        throw DomainError("observable '" + label_ + "' is not Hermitian");
    }
    // A Hermitian 2x2 matrix has eigenvalues {+1, -1} iff its trace is 0 and O^2 = I.
    if (std::abs(matrix.trace()) > tol::kDichotomic ||
        (matrix * matrix - Matrix2::Identity()).cwiseAbs().maxCoeff() > tol::kDichotomic) {
        throw DomainError("observable '" + label_ + "' does not have eigenvalues +1 and -1");
    }
}

DichotomicObservable DichotomicObservable::bloch(double x, double y, double z, std::string label) {
    Matrix2 m;
    m << Complex(z, 0), Complex(x, -y), Complex(x, y), Complex(-z, 0);
    return DichotomicObservable(m, std::move(label));
}

DichotomicObservable DichotomicObservable::pauli_x() {
    return bloch(1, 0, 0, "X");
}
DichotomicObservable DichotomicObservable::pauli_y() {
    return bloch(0, 1, 0, "Y");
}
DichotomicObservable DichotomicObservable::pauli_z() {
    return bloch(0, 0, 1, "Z");
}

Matrix2 DichotomicObservable::projector(int sign) const {
    return (Matrix2::Identity() + static_cast<double>(sign) * matrix_) / 2.0;
}

Matrix2 DichotomicObservable::eigenbasis() const {
    Matrix2 basis;
    for (int row = 0; row < 2; ++row) {
        const Matrix2 proj = projector(row == 0 ? +1 : -1);
        // Rank-one projector: its larger column is proportional to the eigenvector.
        const int col = proj.col(0).norm() >= proj.col(1).norm() ? 0 : 1;
        const Eigen::Vector2cd v = proj.col(col).normalized();
        basis.row(row) = v.adjoint();
    }
    return basis;
}

MeasurementLayout::MeasurementLayout(std::vector<std::vector<DichotomicObservable>> parties)
    : parties_(std::move(parties)) {
    if (parties_.empty()) {
        throw LayoutError("layout needs at least one party");
    }
    for (const auto &p : parties_) {
        if (p.empty()) {
            throw LayoutError("every party needs at least one observable");
        }
    }
}

const DichotomicObservable &MeasurementLayout::observable(int party, int input) const {
    if (party < 0 || party >= n_parties() || input < 0 || input >= n_inputs(party)) {
        throw LayoutError("no observable for party " + std::to_string(party) + " input " + std::to_string(input));
    }
    return parties_[party][input];
}

std::vector<Setting> MeasurementLayout::all_settings() const {
    std::vector<Setting> out;
    Setting s(parties_.size(), 0);
    while (true) {
        out.push_back(s);
        int k = n_parties() - 1;
        while (k >= 0 && ++s[k] == n_inputs(k)) {
            s[k] = 0;
            --k;
        }
        if (k < 0) {
            return out;
        }
    }
}

MeasurementLayout standard_layout() {
    return n_party_layout(3);
}

MeasurementLayout n_party_layout(int n) {
    if (n < 3) {
        throw DimensionError("the game needs at least three parties");
    }
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<std::vector<DichotomicObservable>> parties;
    parties.push_back({DichotomicObservable::pauli_z(), DichotomicObservable::pauli_x()});
    parties.push_back({DichotomicObservable::bloch(h, 0, h, "(Z+X)/sqrt2"),
                       DichotomicObservable::bloch(-h, 0, h, "(Z-X)/sqrt2"), DichotomicObservable::pauli_z()});
    for (int k = 2; k < n; ++k) {
        parties.push_back({DichotomicObservable::pauli_z(), DichotomicObservable::pauli_x()});
    }
    return MeasurementLayout(std::move(parties));
}

ProbabilityTable::ProbabilityTable(int n_parties) : n_parties_(n_parties) {
    if (n_parties < 1 || n_parties > kMaxQubits) {
        throw DimensionError("probability table party count out of range");
    }
}

void ProbabilityTable::set_row(const Setting &setting, std::vector<double> weights) {
    if (static_cast<int>(setting.size()) != n_parties_) {
        throw LayoutError("setting has wrong number of parties");
    }
    if (weights.size() != n_outcomes()) {
        throw LayoutError("row needs " + std::to_string(n_outcomes()) + " outcome weights");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DomainError("outcome weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw NormalizationError("row has zero total weight");
    }
    rows_[setting] = Row{std::move(weights), total};
}

bool ProbabilityTable::contains(const Setting &setting) const {
    return rows_.count(setting) != 0;
}

const ProbabilityTable::Row &ProbabilityTable::row(const Setting &setting) const {
    auto it = rows_.find(setting);
    if (it == rows_.end()) {
        std::string s;
        for (int v : setting) {
            s += std::to_string(v);
        }
        throw LayoutError("table has no row for setting " + s);
    }
    return it->second;
}

const std::vector<double> &ProbabilityTable::weights(const Setting &setting) const {
    return row(setting).weights;
}

double ProbabilityTable::total(const Setting &setting) const {
    return row(setting).total;
}

double ProbabilityTable::probability(const Setting &setting, std::size_t outcome) const {
    const Row &r = row(setting);
    return r.weights.at(outcome) / r.total;
}

std::vector<double> ProbabilityTable::distribution(const Setting &setting) const {
    const Row &r = row(setting);
    std::vector<double> out(r.weights.size());
    std::transform(r.weights.begin(), r.weights.end(), out.begin(), [&](double w) { return w / r.total; });
    return out;
}

std::vector<Setting> ProbabilityTable::settings() const {
    std::vector<Setting> out;
    out.reserve(rows_.size());
    for (const auto &[s, r] : rows_) {
        out.push_back(s);
    }
    return out;
}

double ProbabilityTable::max_signaling_deviation() const {
    double worst = 0.0;
    for (int party = 0; party < n_parties_; ++party) {
        // marginal p(party outputs +1 | setting), grouped by that party's input
        std::map<int, std::vector<double>> by_input;
        for (const auto &[s, r] : rows_) {
            double plus = 0.0;
            for (std::size_t o = 0; o < r.weights.size(); ++o) {
                if (outcome_sign(o, party, n_parties_) > 0) {
                    plus += r.weights[o];
                }
            }
            by_input[s[party]].push_back(plus / r.total);
        }
        for (const auto &[input, values] : by_input) {
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            worst = std::max(worst, *hi - *lo);
        }
    }
    return worst;
}

QuantumState ghz_state(int n) {
    if (n < 2 || n > kMaxQubits) {
        throw DimensionError("GHZ state needs 2 <= n <= 16, got " + std::to_string(n));
    }
    Vector psi = Vector::Zero(Eigen::Index{1} << n);
    psi(0) = psi(psi.size() - 1) = 1.0 / std::sqrt(2.0);
    return QuantumState::pure(std::move(psi));
}

QuantumState mix_white_noise(const QuantumState &state, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("visibility must lie in [0, 1]");
    }
    const auto dim = static_cast<Eigen::Index>(state.dim());
    Matrix rho = p * state.density_matrix();
    rho.diagonal().array() += (1.0 - p) / static_cast<double>(dim);
    return QuantumState::mixed(std::move(rho));
}

std::vector<double> outcome_distribution(const QuantumState &state, const MeasurementLayout &layout,
                                         const Setting &setting) {
    check_layout_matches(state, layout);
    if (static_cast<int>(setting.size()) != layout.n_parties()) {
        throw LayoutError("setting has wrong number of parties");
    }
    const int n = state.n_qubits();
    const std::size_t dim = state.dim();
    std::vector<double> probs(dim);
    if (state.is_pure()) {
        Vector psi = state.amplitudes();
        for (int k = 0; k < n; ++k) {
            apply_local_raw(psi.data(), 1, n, k, layout.observable(k, setting[k]).eigenbasis());
        }
        for (std::size_t i = 0; i < dim; ++i) {
            probs[i] = std::norm(psi(static_cast<Eigen::Index>(i)));
        }
    } else {
        // diag(U rho U^dagger) with U the product of local eigenbases.
        Matrix m = state.density_matrix();
        const auto d = static_cast<Eigen::Index>(dim);
        for (int k = 0; k < n; ++k) {
            const Matrix2 u = layout.observable(k, setting[k]).eigenbasis();
            const Matrix2 uc = u.conjugate();
            for (Eigen::Index c = 0; c < d; ++c) {
                apply_local_raw(m.data() + c * d, 1, n, k, u);
            }
            for (Eigen::Index r = 0; r < d; ++r) {
                apply_local_raw(m.data() + r, d, n, k, uc);
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            probs[i] = std::max(0.0, m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
        }
    }
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (double &p : probs) {
        p /= sum;
    }
    return probs;
}

ProbabilityTable outcome_probabilities(const QuantumState &state, const MeasurementLayout &layout,
                                       std::span<const Setting> settings) {
    check_layout_matches(state, layout);
    ProbabilityTable table(layout.n_parties());
    for (const Setting &s : settings) {
        table.set_row(s, outcome_distribution(state, layout, s));
    }
    return table;
}

ProbabilityTable outcome_probabilities(const QuantumState &state, const MeasurementLayout &layout) {
    const auto settings = layout.all_settings();
    return outcome_probabilities(state, layout, settings);
}

void apply_local(Vector &psi, int n_qubits, int party, const Matrix2 &op) {
    if (psi.size() != (Eigen::Index{1} << n_qubits) || party < 0 || party >= n_qubits) {
        throw DimensionError("apply_local: qubit index or vector size out of range");
    }
    apply_local_raw(psi.data(), 1, n_qubits, party, op);
}

double expectation(const QuantumState &state, std::span<const DichotomicObservable> observables) {
    const int n = state.n_qubits();
    if (static_cast<int>(observables.size()) != n) {
        throw DimensionError("need one observable per qubit");
    }
    if (state.is_pure()) {
        Vector phi = state.amplitudes();
        for (int k = 0; k < n; ++k) {
            apply_local_raw(phi.data(), 1, n, k, observables[k].matrix());
        }
        return state.amplitudes().dot(phi).real();
    }
    // Tr[O rho] = sum_ij O_ij rho_ji with O_ij a product of local entries.
    const Matrix rho = state.density_matrix();
    const std::size_t dim = state.dim();
    Complex acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            Complex o = 1.0;
            for (int k = 0; k < n && o != Complex(0.0); ++k) {
                const int bit = n - 1 - k;
                o *= observables[k].matrix()((i >> bit) & 1, (j >> bit) & 1);
            }
            acc += o * rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        }
    }
    return acc.real();
}

double fidelity_with_pure(const QuantumState &state, const QuantumState &target) {
    if (!target.is_pure()) {
        throw UnsupportedError("fidelity target must be a pure state");
    }
    if (state.n_qubits() != target.n_qubits()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    const Vector &t = target.amplitudes();
    if (state.is_pure()) {
        return std::norm(t.dot(state.amplitudes()));
    }
    return t.dot(state.density_matrix() * t).real();
}

Matrix pauli_operator(std::string_view paulis) {
    if (paulis.empty() || paulis.size() > 8) {
        throw DimensionError("Pauli string length must be 1..8");
    }
    Matrix out = Matrix::Identity(1, 1);
    for (char c : paulis) {
        Matrix2 p;
        switch (c) {
            case 'I':
                p = Matrix2::Identity();
                break;
            case 'X':
                p = DichotomicObservable::pauli_x().matrix();
                break;
            case 'Y':
                p = DichotomicObservable::pauli_y().matrix();
                break;
            case 'Z':
                p = DichotomicObservable::pauli_z().matrix();
                break;
            default:
                throw InputError(std::string("unknown Pauli symbol '") + c + "'");
        }
        Matrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index col = 0; col < out.cols(); ++col) {
                next.block(2 * r, 2 * col, 2, 2) = out(r, col) * p;
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace losr
