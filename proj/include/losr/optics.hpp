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

// Jones-calculus model of the polarization modulation chain: quarter-wave
// plate, electro-optic phase stage, quarter-wave plate, then an H/V analyzer.
// H is the +1 eigenstate of Z and V the -1 eigenstate.

#include <cstdint>
#include <string>
#include <vector>

#include "losr/quantum.hpp"

namespace losr::optics {

/// A lossless (unitary) 2x2 Jones matrix acting on (H, V) amplitudes.
class JonesMatrix {
   public:
    /// Throws DomainError if `m` is not unitary.
    explicit JonesMatrix(const Matrix2 &m);

    const Matrix2 &matrix() const {
        return m_;
    }
    JonesMatrix operator*(const JonesMatrix &rhs) const {
        return JonesMatrix(m_ * rhs.m_);
    }
    JonesMatrix adjoint() const {
        return JonesMatrix(m_.adjoint());
    }
    /// True when this equals `other` times some global phase, within `tol`.
    bool equal_up_to_phase(const JonesMatrix &other, double tol) const;

   private:
    Matrix2 m_;
};

double degrees(double deg);

/// Quarter-wave plate with fast axis at `theta` from horizontal: R(-theta) diag(1, i) R(theta).
JonesMatrix qwp(double theta);
/// Half-wave plate with fast axis at `theta`: R(-theta) diag(1, -1) R(theta).
JonesMatrix hwp(double theta);
/// Phase on the V component: diag(1, e^{i phi}).
JonesMatrix eopm(double phi);
/// Closed form of the full modulator: i e^{i phi/2} [[cos phi/2, sin phi/2], [-sin phi/2, cos phi/2]].
JonesMatrix sppm(double phi);

struct SppmSetting {
    double qwp1_angle = degrees(-45.0);
    double phase = 0.0;
    double qwp2_angle = degrees(45.0);
};

/// Light passes qwp1, the phase stage, then qwp2.
JonesMatrix chain_matrix(const SppmSetting &setting);

/// O = U^dagger Z U for the chain U. Labeled "Z", "X", "(Z+X)/sqrt2" or
/// "(Z-X)/sqrt2" when it matches one of them, otherwise by its Bloch vector.
DichotomicObservable effective_observable(const SppmSetting &setting);
/// Same, for an arbitrary chain matrix (e.g. one carrying a global phase).
DichotomicObservable effective_observable(const JonesMatrix &chain);

/// One row of the per-observer configuration table.
struct TableSetting {
    char party;  // 'A', 'B' or 'C'
    int input;
    SppmSetting setting;
    std::string expected_label;
};

/// The seven phase configurations used by Alice, Bob and Charlie.
std::vector<TableSetting> table_settings();

/// C_right / (C_right + C_wrong). Throws DomainError when both are zero.
double basis_choice_fidelity(std::uint64_t c_right, std::uint64_t c_wrong);

}  // namespace losr::optics
