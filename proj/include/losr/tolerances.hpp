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

namespace losr::tol {

/// Euclidean norm of a pure state vector must be 1 within this.
inline constexpr double kStateNorm = 1e-12;
/// Hermiticity and unit trace of a density matrix.
inline constexpr double kDensityHermitian = 1e-12;
inline constexpr double kDensityTrace = 1e-12;
/// Smallest eigenvalue a density matrix may have.
inline constexpr double kDensityMinEigenvalue = -1e-10;
/// Eigenvalues of a dichotomic observable must be +1 and -1 within this.
inline constexpr double kDichotomic = 1e-10;
/// Jones matrices must be unitary within this.
inline constexpr double kUnitary = 1e-10;
/// Per-setting probability sums.
inline constexpr double kProbabilitySum = 1e-9;
/// Default tolerance for the non-signaling check on exact tables.
inline constexpr double kNonSignaling = 1e-9;
/// Smallest admissible 1 + <C1> in the F denominator.
inline constexpr double kSingularDenominator = 1e-6;
/// Matching an effective observable to a named measurement basis.
inline constexpr double kObservableLabel = 1e-9;

}  // namespace losr::tol
