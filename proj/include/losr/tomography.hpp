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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "losr/quantum.hpp"

namespace losr::tomo {

inline constexpr int kSettings = 27;
inline constexpr int kPauliStrings = 64;

/// Outcome weights for each of the 27 local Pauli settings {X,Y,Z}^3.
///
/// Setting index 9i + 3j + k with X = 0, Y = 1, Z = 2; outcomes ordered as in
/// the counts files. Weights are usually counts but may be exact probabilities.
class TomographyDataset {
   public:
    using Row = std::array<double, 8>;

    /// Throws InputError on negative weights or a zero row.
    explicit TomographyDataset(const std::array<Row, kSettings> &rows);

    const Row &row(int setting) const {
        return rows_.at(setting);
    }
    double row_total(int setting) const;

    static std::string setting_name(int setting);
    /// Throws InputError for anything but a three-letter {X,Y,Z} string.
    static int setting_index(std::string_view name);

   private:
    std::array<Row, kSettings> rows_;
};

/// Tomography CSV: same header as the counts files, `setting` in {X,Y,Z}^3.
TomographyDataset load_tomography(std::istream &in);
TomographyDataset load_tomography_file(const std::filesystem::path &path);
void write_tomography(std::ostream &out, const TomographyDataset &data);

/// Expectations of the 64 strings {I,X,Y,Z}^3, indexed base 4 with I = 0, X = 1,
/// Y = 2, Z = 3 and party 0 the most significant digit.
using PauliExpectations = std::array<double, kPauliStrings>;

std::string pauli_string_name(int index);

/// Strings without I come from their own setting; strings containing I are
/// averaged over every setting that agrees on the non-identity positions.
PauliExpectations pauli_expectations(const TomographyDataset &data);

/// (1/8) sum_s <s> s. Hermitian with unit trace; may have negative eigenvalues.
Matrix linear_inversion(const PauliExpectations &expectations);

/// Closest unit-trace positive semidefinite matrix in Frobenius norm.
/// Keeps the eigenvectors and projects the spectrum onto the probability
/// simplex by zeroing the most negative eigenvalues and spreading their deficit
/// over the rest.
QuantumState project_to_physical(const Matrix &h);

struct ReconstructionResult {
    QuantumState rho;
    double fidelity;
    double fidelity_sigma;
    double raw_min_eigenvalue;
};

/// Point estimate only (no Monte Carlo); fidelity_sigma is 0.
ReconstructionResult reconstruct_point(const TomographyDataset &data, const QuantumState &target);

/// Point estimate plus the standard deviation of the fidelity over `mc_samples`
/// multinomial resamples at the observed frequencies. Row totals must be
/// whole numbers. Requires mc_samples >= 50.
ReconstructionResult reconstruct(const TomographyDataset &data, const QuantumState &target, int mc_samples,
                                 std::uint64_t seed);

/// Born-rule probabilities of `state` (3 qubits) for every setting.
TomographyDataset exact_dataset(const QuantumState &state);
/// `shots` multinomial samples per setting.
TomographyDataset simulate_dataset(const QuantumState &state, std::uint64_t shots, std::uint64_t seed);

/// Witness inputs (HHH, VVV, XXX, XYY, YXY, YYX) read off the matching settings.
std::map<std::string, double> witness_terms(const TomographyDataset &data);

}  // namespace losr::tomo
