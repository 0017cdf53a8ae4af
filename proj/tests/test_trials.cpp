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

#include "losr/trials.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "losr/errors.hpp"
#include "losr/inequality.hpp"

using namespace losr;
using namespace losr::trials;

namespace {

// |value - expected| within k standard deviations of a binomial proportion over n trials.
void expect_binomial(double value, double expected, double n, double k = 3.0) {
    EXPECT_LT(std::abs(value - expected), k * std::sqrt(expected * (1 - expected) / n))
        << value << " vs " << expected;
}

}  // namespace

TEST(trial_config, validation) {
    TrialConfig c;
    EXPECT_NO_THROW(c.validate());
    c.visibility = 1.2;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.efficiency[2] = -0.1;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.alice_p0 = 2.0;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(draw_settings, statistics) {
    TrialConfig config;
    Rng rng = substream(1, 0);
    const int n = 1000000;
    std::array<int, 3> y_counts{};
    int x0 = 0, z0 = 0;
    long rejections = 0;
    for (int i = 0; i < n; ++i) {
        const auto d = draw_settings(rng, config);
        ++y_counts[d.y];
        x0 += d.x == 0;
        z0 += d.z == 0;
        rejections += d.bob_rejections;
    }
    for (int y = 0; y < 3; ++y) {
        expect_binomial(y_counts[y] / double(n), 1.0 / 3.0, n);
    }
    expect_binomial(x0 / double(n), 0.5, n);
    expect_binomial(z0 / double(n), 0.5, n);
    const double pairs = n + rejections;
    expect_binomial(rejections / pairs, 0.25, pairs);
}

TEST(draw_settings, biased_inputs_and_determinism) {
    TrialConfig config;
    config.alice_p0 = 0.8;
    config.charlie_p0 = 0.1;
    Rng a = substream(9, 3), b = substream(9, 3);
    int x0 = 0, z0 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto da = draw_settings(a, config), db = draw_settings(b, config);
        ASSERT_EQ(da.x, db.x);
        ASSERT_EQ(da.y, db.y);
        ASSERT_EQ(da.z, db.z);
        x0 += da.x == 0;
        z0 += da.z == 0;
    }
    expect_binomial(x0 / double(n), 0.8, n);
    expect_binomial(z0 / double(n), 0.1, n);
}

TEST(conditioned_state, trigger_branches) {
    EXPECT_NEAR(conditioned_state_check(), 1.0, 1e-12);
    const auto four = four_photon_state(1.0);
    const auto minus = conditioned_three_photon_state(four, -1);
    Vector ghz_minus = Vector::Zero(8);
    ghz_minus(0) = 1.0 / std::sqrt(2.0);
    ghz_minus(7) = -1.0 / std::sqrt(2.0);
    EXPECT_NEAR(fidelity_with_pure(minus, QuantumState::pure(ghz_minus)), 1.0, 1e-12);
    for (double p : {0.0, 0.5, 0.93}) {
        const auto cond = conditioned_three_photon_state(four_photon_state(p), +1);
        EXPECT_NEAR(fidelity_with_pure(cond, ghz_state(3)), p + (1 - p) / 8, 1e-10);
    }
    EXPECT_THROW(conditioned_three_photon_state(ghz_state(3), 1), DimensionError);
    EXPECT_THROW(conditioned_three_photon_state(four, 0), DomainError);
}

TEST(run_trials, ideal_rates) {
    TrialConfig config;
    config.n_pulses = 400000;
    config.seed = 5;
    const auto run = run_trials(config);
    const auto &d = run.diagnostics;
    EXPECT_EQ(d.pulses, config.n_pulses);
    expect_binomial(d.trigger_plus_rate(), 0.5, double(d.trigger_clicks));
    expect_binomial(d.acceptance_rate(), 0.5, double(d.pulses));
    EXPECT_EQ(run.counts.total_events(), d.accepted);
    std::uint64_t drawn = 0;
    for (const auto &[name, n] : d.settings_drawn) {
        drawn += n;
        EXPECT_EQ(run.counts.row_total(name), d.settings_accepted.at(name));
        expect_binomial(n / double(config.n_pulses), 1.0 / 12.0, double(config.n_pulses));
    }
    EXPECT_EQ(drawn, config.n_pulses);
    EXPECT_TRUE(d.warnings.empty());
}

TEST(run_trials, acceptance_follows_efficiencies) {
    TrialConfig config;
    config.n_pulses = 400000;
    config.efficiency = {0.9, 0.7, 0.8, 0.5};
    config.seed = 6;
    const auto d = run_trials(config).diagnostics;
    expect_binomial(d.acceptance_rate(), 0.5 * 0.9 * 0.7 * 0.8 * 0.5, double(d.pulses));
}

TEST(run_trials, deterministic_for_seed) {
    TrialConfig config;
    config.n_pulses = 50000;
    config.visibility = 0.9;
    config.seed = 77;
    const auto a = run_trials(config), b = run_trials(config);
    EXPECT_EQ(a.counts.rows(), b.counts.rows());
    EXPECT_EQ(a.diagnostics.to_text(), b.diagnostics.to_text());
    config.seed = 78;
    EXPECT_NE(run_trials(config).counts.rows(), a.counts.rows());
}

TEST(run_trials, zero_efficiency_warns) {
    TrialConfig config;
    config.n_pulses = 1000;
    config.efficiency = {1.0, 0.0, 1.0, 1.0};
    const auto run = run_trials(config);
    EXPECT_EQ(run.diagnostics.accepted, 0u);
    ASSERT_EQ(run.diagnostics.warnings.size(), 1u);
    EXPECT_NE(run.diagnostics.to_text().find("warning.0="), std::string::npos);
}

TEST(run_trials, noisy_state_matches_closed_form) {
    TrialConfig config;
    config.n_pulses = 2000000;
    config.visibility = 0.95;
    config.seed = 11;
    const auto run = run_trials(config);
    const auto stats = bootstrap_sigma(run.counts, 200, 12);
    const double expected = 2 * std::sqrt(2.0) * 0.95 + 8 * (0.95 - 1);
    EXPECT_LT(std::abs(stats.f_value - expected), 3 * stats.sigma);
}

TEST(run_trials, below_threshold_does_not_violate) {
    TrialConfig config;
    config.n_pulses = 2000000;
    config.visibility = visibility_threshold(3) - 0.03;
    config.seed = 13;
    const auto stats = bootstrap_sigma(run_trials(config).counts, 200, 14);
    EXPECT_LT(stats.f_value, 2.0 + 3 * stats.sigma);
    EXPECT_LT(stats.f_value, 2.0);
}

TEST(pulse_model, rejects_wrong_layout) {
    TrialConfig config;
    EXPECT_THROW(PulseModel(config, n_party_layout(4)), LayoutError);
}
