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

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "losr/quantum.hpp"
#include "losr/tolerances.hpp"

namespace losr {

inline const double kClassicalBound = 2.0;
inline const double kQuantumMax = 2.0 * std::sqrt(2.0);

struct Correlator {
    std::string name;
    double value;
};

/// Bell-game value, Same-game value, Charlie marginal and the combined score.
struct InequalityReport {
    double i_bell = 0.0;
    double i_same = 0.0;
    double c1_mean = 0.0;
    double f_value = 0.0;
    int n_parties = 3;
    double classical_bound = kClassicalBound;
    double quantum_max = kQuantumMax;
    /// Every correlator that entered the score, in evaluation order.
    std::vector<Correlator> terms;

    bool violates_classical_bound() const {
        return f_value > classical_bound;
    }
};

struct ThresholdResult {
    int n_parties;
    double visibility_threshold;
    double fidelity_threshold;
};

/// Product-of-outputs correlator of `parties`, pooled over every table row whose
/// inputs agree with `fixed` (pairs of party, input). Rows are weighted by their
/// totals. Throws LayoutError when no row is compatible.
double pooled_correlator(const ProbabilityTable &table, std::span<const std::pair<int, int>> fixed,
                         std::span<const int> parties);

/// <A_x B_y> on the row (x, y, 1, ..., 1), conditioned on the product of the
/// Charlies' outputs being +1. Throws ConditioningError if that event is empty.
double conditional_ab_correlator(const ProbabilityTable &table, int x, int y);

/// CHSH combination of the four conditional correlators.
double i_bell(const ProbabilityTable &table);
/// <A0 B2> + <B2 C0[1]> + sum_k <C0[k] C0[k+1]>.
double i_same(const ProbabilityTable &table);
/// Mean collective Charlie outcome over rows where every Charlie has input 1.
double c1_mean(const ProbabilityTable &table);

/// Product of the Charlies' outputs; +1 iff an even number of them are -1.
int collective_charlie(std::span<const int> outputs);

/// Three-party score F = I_Bell + (4 I_Same - 8) / (1 + <C1>).
InequalityReport f_score(const ProbabilityTable &table, double epsilon = tol::kSingularDenominator);
/// N-party score F = I_Bell + (4 I_Same - 4 (N - 1)) / (1 + <C1>).
InequalityReport n_party_f(const ProbabilityTable &table, int n, double epsilon = tol::kSingularDenominator);

/// The sparse set of settings the N-party games read: the four Bell rows
/// (x, y, 1, ..., 1) plus (0, 2, 0, ..., 0), (1, 2, 0, ..., 0) and (0, 2, 1, ..., 1).
std::vector<Setting> n_party_settings(int n);

/// (2n - 1) / (2n - 2 + sqrt2).
double visibility_threshold(int n);
/// (2n - 1 + (sqrt2 - 1) / 2^n) / (2n - 2 + sqrt2).
double fidelity_threshold(int n);
ThresholdResult thresholds(int n);

/// F of the white-noise GHZ_n state with visibility p, by Born-rule simulation.
double simulated_white_noise_f(int n, double p);
/// Root of simulated_white_noise_f(n, p) = 2 by bisection on [0, 1].
double bisect_visibility_threshold(int n, double tolerance = 1e-12);

}  // namespace losr
