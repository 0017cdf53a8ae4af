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

// Event-level simulation of the triggered three-photon experiment: a four-photon
// GHZ state with white noise, the trigger photon analyzed in the diagonal basis,
// QRNG-driven settings, lossy detectors and four-fold post-selection.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "losr/counts.hpp"
#include "losr/quantum.hpp"
#include "losr/random.hpp"

namespace losr::trials {

enum Detector { kAlice = 0, kBob = 1, kCharlie = 2, kTrigger = 3 };

struct TrialConfig {
    std::uint64_t n_pulses = 1'000'000;
    /// White-noise visibility of the four-photon state.
    double visibility = 1.0;
    /// Click probability of the Alice, Bob, Charlie and trigger detectors.
    std::array<double, 4> efficiency{1.0, 1.0, 1.0, 1.0};
    /// P(x = 0) and P(z = 0). Bob's three inputs are always equiprobable.
    double alice_p0 = 0.5;
    double charlie_p0 = 0.5;
    std::uint64_t seed = 0;

    /// Throws DomainError on out-of-range values.
    void validate() const;
};

struct SettingDraw {
    int x;
    int y;
    int z;
    /// Two-bit patterns Bob's QRNG produced and discarded before y was fixed.
    int bob_rejections;
};

/// x and z from Bernoulli draws; y from two fair bits, discarding "11" and redrawing.
SettingDraw draw_settings(Rng &rng, const TrialConfig &config);

struct TrialRecord {
    std::uint64_t pulse_index = 0;
    std::array<int, 3> settings{};
    /// Empty when the detector did not click.
    std::optional<int> trigger_outcome;
    std::array<std::optional<int>, 3> outcomes{};
    bool accepted = false;
};

/// Precomputed per-setting joint distributions for the trigger and the three parties.
class PulseModel {
   public:
    /// `layout` must be a three-party layout with inputs {0,1} x {0,1,2} x {0,1}.
    PulseModel(const TrialConfig &config, const MeasurementLayout &layout);

    TrialRecord simulate(Rng &rng, std::uint64_t pulse_index, int *bob_rejections = nullptr) const;

   private:
    TrialConfig config_;
    // cumulative distributions over (a, b, c, t) bits, indexed by 6x + 2y + z
    std::array<std::array<double, 16>, 12> cumulative_{};
};

struct TrialDiagnostics {
    std::uint64_t pulses = 0;
    std::uint64_t accepted = 0;
    std::uint64_t trigger_clicks = 0;
    std::uint64_t trigger_plus = 0;
    std::uint64_t bob_bit_pairs = 0;
    std::uint64_t bob_rejections = 0;
    std::map<std::string, std::uint64_t> settings_drawn;
    std::map<std::string, std::uint64_t> settings_accepted;
    std::vector<std::string> warnings;

    double acceptance_rate() const;
    double trigger_plus_rate() const;
    double bob_rejection_rate() const;
    /// Flat `key=value` lines.
    std::string to_text() const;
};

struct TrialRun {
    CountsTable counts;
    TrialDiagnostics diagnostics;
};

/// Simulates config.n_pulses pulses in fixed-size batches, batch b drawing from
/// substream(seed, b). Zero accepted trials produce a warning, not an error.
TrialRun run_trials(const TrialConfig &config, const MeasurementLayout &layout = standard_layout());

/// (|HHHH> + |VVVV>)/sqrt2 mixed with white noise; the trigger is qubit 3.
QuantumState four_photon_state(double visibility);
/// Three-photon state left after the trigger is found in |+> (sign = +1) or |-> (sign = -1).
QuantumState conditioned_three_photon_state(const QuantumState &four_photon, int trigger_sign);
/// Fidelity of the ideal trigger-(+1) conditioned state with GHZ3.
double conditioned_state_check();

}  // namespace losr::trials
