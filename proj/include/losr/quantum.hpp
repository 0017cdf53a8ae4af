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

#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace losr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr int kMaxQubits = 16;

/// An N-qubit state, either a unit vector of amplitudes or a density matrix.
///
/// Party 0 is the most significant bit of the basis index, so the amplitude of
/// |a b c> sits at index 4a + 2b + c. Pure states stay vectors until noise is
/// mixed in; density_matrix() promotes on demand without changing the stored form.
class QuantumState {
   public:
    static QuantumState pure(Vector amplitudes);
    static QuantumState mixed(Matrix rho);

    int n_qubits() const {
        return n_qubits_;
    }
    std::size_t dim() const {
        return std::size_t{1} << n_qubits_;
    }
    bool is_pure() const {
        return std::holds_alternative<Vector>(repr_);
    }
    /// Throws UnsupportedError for mixed states.
    const Vector &amplitudes() const;
    Matrix density_matrix() const;

   private:
    QuantumState(int n, std::variant<Vector, Matrix> repr) : n_qubits_(n), repr_(std::move(repr)) {
    }
    int n_qubits_;
    std::variant<Vector, Matrix> repr_;
};

/// A 2x2 Hermitian observable with eigenvalues exactly +1 and -1.
class DichotomicObservable {
   public:
    DichotomicObservable(const Matrix2 &matrix, std::string label);

    /// x X + y Y + z Z for a unit Bloch vector (x, y, z).
    static DichotomicObservable bloch(double x, double y, double z, std::string label);
    static DichotomicObservable pauli_x();
    static DichotomicObservable pauli_y();
    static DichotomicObservable pauli_z();

    const Matrix2 &matrix() const {
        return matrix_;
    }
    const std::string &label() const {
        return label_;
    }
    /// (I + sign * O) / 2 for sign = +1 or -1.
    Matrix2 projector(int sign) const;
    /// Unitary whose first row is <v+| and second row is <v-|.
    Matrix2 eigenbasis() const;

   private:
    Matrix2 matrix_;
    std::string label_;
};

/// Inputs chosen by every party for one round; settings[k] indexes party k's list.
using Setting = std::vector<int>;

/// Per-party ordered lists of dichotomic observables.
class MeasurementLayout {
   public:
    explicit MeasurementLayout(std::vector<std::vector<DichotomicObservable>> parties);

    int n_parties() const {
        return static_cast<int>(parties_.size());
    }
    int n_inputs(int party) const {
        return static_cast<int>(parties_.at(party).size());
    }
    const DichotomicObservable &observable(int party, int input) const;
    /// Every setting tuple in lexicographic order (party 0 slowest).
    std::vector<Setting> all_settings() const;

   private:
    std::vector<std::vector<DichotomicObservable>> parties_;
};

/// Alice {Z, X}, Bob {(Z+X)/sqrt2, (Z-X)/sqrt2, Z}, Charlie {Z, X}.
MeasurementLayout standard_layout();
/// Alice and Bob as in standard_layout(), followed by n - 2 Charlies each {Z, X}.
MeasurementLayout n_party_layout(int n);

/// Map from setting tuple to a distribution over the 2^N outcome strings.
///
/// Outcome index bit (N-1-k) is set when party k outputs -1, which orders the
/// outcomes +++, ++-, +-+, ... as in the counts files. Each row stores
/// nonnegative weights (probabilities or raw counts) together with their total;
/// probabilities are weight / total. Averages that pool several rows weight each
/// row by its total, which is uniform for exact tables.
class ProbabilityTable {
   public:
    explicit ProbabilityTable(int n_parties);

    int n_parties() const {
        return n_parties_;
    }
    std::size_t n_outcomes() const {
        return std::size_t{1} << n_parties_;
    }
    void set_row(const Setting &setting, std::vector<double> weights);
    bool contains(const Setting &setting) const;
    const std::vector<double> &weights(const Setting &setting) const;
    double total(const Setting &setting) const;
    double probability(const Setting &setting, std::size_t outcome) const;
    std::vector<double> distribution(const Setting &setting) const;
    std::vector<Setting> settings() const;

    /// Largest difference between single-party marginals that share that
    /// party's input but differ in the other inputs.
    double max_signaling_deviation() const;

   private:
    struct Row {
        std::vector<double> weights;
        double total;
    };
    const Row &row(const Setting &setting) const;
    int n_parties_;
    std::map<Setting, Row> rows_;
};

/// +1 or -1 for party `party` in outcome index `outcome` of an n-party string.
inline int outcome_sign(std::size_t outcome, int party, int n_parties) {
    return (outcome >> (n_parties - 1 - party)) & 1 ? -1 : +1;
}

QuantumState ghz_state(int n);
QuantumState mix_white_noise(const QuantumState &state, double p);

/// Born-rule table over every setting of the layout.
ProbabilityTable outcome_probabilities(const QuantumState &state, const MeasurementLayout &layout);
/// Born-rule table restricted to the given settings.
ProbabilityTable outcome_probabilities(const QuantumState &state, const MeasurementLayout &layout,
                                       std::span<const Setting> settings);
/// Born-rule distribution for a single setting.
std::vector<double> outcome_distribution(const QuantumState &state, const MeasurementLayout &layout,
                                         const Setting &setting);

/// Tr[rho (O_1 x ... x O_N)], evaluated directly from the operator product.
double expectation(const QuantumState &state, std::span<const DichotomicObservable> observables);
/// <target| rho |target>; target must be pure.
double fidelity_with_pure(const QuantumState &state, const QuantumState &target);

/// Tensor product of single-qubit Paulis from a string over {I, X, Y, Z}, party 0 first.
Matrix pauli_operator(std::string_view paulis);

/// Applies a single-qubit operator to qubit `party` of an n_qubits vector in place.
void apply_local(Vector &psi, int n_qubits, int party, const Matrix2 &op);

}  // namespace losr
