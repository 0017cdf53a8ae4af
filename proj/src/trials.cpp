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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "losr/errors.hpp"

namespace losr::trials {

namespace {

constexpr std::uint64_t kBatchPulses = std::uint64_t{1} << 20;

int setting_slot(int x, int y, int z) {
    return 6 * x + 2 * y + z;
}

std::string setting_key(int x, int y, int z) {
    return std::string{static_cast<char>('0' + x), static_cast<char>('0' + y), static_cast<char>('0' + z)};
}

bool clicks(Rng &rng, double efficiency) {
    if (efficiency >= 1.0) {
        return true;
    }
    return std::generate_canonical<double, 53>(rng) < efficiency;
}

struct BatchResult {
    std::array<CountsTable::Row, 12> counts{};
    TrialDiagnostics diag;
};

}  // namespace

void TrialConfig::validate() const {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw DomainError("visibility must lie in [0, 1]");
    }
    for (double e : efficiency) {
        if (!(e >= 0.0 && e <= 1.0)) {
            throw DomainError("detection efficiency must lie in [0, 1]");
        }
    }
    if (!(alice_p0 >= 0.0 && alice_p0 <= 1.0) || !(charlie_p0 >= 0.0 && charlie_p0 <= 1.0)) {
        throw DomainError("setting probabilities must lie in [0, 1]");
    }
}

SettingDraw draw_settings(Rng &rng, const TrialConfig &config) {
    SettingDraw d{};
    d.x = std::generate_canonical<double, 53>(rng) < config.alice_p0 ? 0 : 1;
    while (true) {
        const int bits = static_cast<int>(rng() >> 62);
        if (bits != 3) {
            d.y = bits;
            break;
        }
        ++d.bob_rejections;
    }
    d.z = std::generate_canonical<double, 53>(rng) < config.charlie_p0 ? 0 : 1;
    return d;
}

PulseModel::PulseModel(const TrialConfig &config, const MeasurementLayout &layout) : config_(config) {
    config_.validate();
    if (layout.n_parties() != 3 || layout.n_inputs(0) != 2 || layout.n_inputs(1) != 3 || layout.n_inputs(2) != 2) {
        throw LayoutError("trial simulation needs a {2, 3, 2}-input three-party layout");
    }
    const QuantumState rho = four_photon_state(config.visibility);
    std::vector<std::vector<DichotomicObservable>> parties;
    for (int k = 0; k < 3; ++k) {
        std::vector<DichotomicObservable> obs;
        for (int i = 0; i < layout.n_inputs(k); ++i) {
            obs.push_back(layout.observable(k, i));
        }
        parties.push_back(std::move(obs));
    }
    parties.push_back({DichotomicObservable::pauli_x()});
    const MeasurementLayout four(std::move(parties));
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int z = 0; z < 2; ++z) {
                const auto p = outcome_distribution(rho, four, {x, y, z, 0});
                auto &cum = cumulative_[setting_slot(x, y, z)];
                double acc = 0.0;
                for (std::size_t o = 0; o < 16; ++o) {
                    acc += p[o];
                    cum[o] = acc;
                }
                cum[15] = 1.0;
            }
        }
    }
}

TrialRecord PulseModel::simulate(Rng &rng, std::uint64_t pulse_index, int *bob_rejections) const {
    TrialRecord rec;
    rec.pulse_index = pulse_index;
    const SettingDraw d = draw_settings(rng, config_);
    if (bob_rejections) {
        *bob_rejections = d.bob_rejections;
    }
    rec.settings = {d.x, d.y, d.z};
    const auto &cum = cumulative_[setting_slot(d.x, d.y, d.z)];
    const double u = std::generate_canonical<double, 53>(rng);
    const auto outcome = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    const std::size_t o = std::min<std::size_t>(outcome, 15);
    if (clicks(rng, config_.efficiency[kTrigger])) {
        rec.trigger_outcome = outcome_sign(o, 3, 4);
    }
    bool all_clicked = true;
    for (int k = 0; k < 3; ++k) {
        if (clicks(rng, config_.efficiency[k])) {
            rec.outcomes[k] = outcome_sign(o, k, 4);
        } else {
            all_clicked = false;
        }
    }
    rec.accepted = all_clicked && rec.trigger_outcome == 1;
    return rec;
}

double TrialDiagnostics::acceptance_rate() const {
    return pulses ? static_cast<double>(accepted) / static_cast<double>(pulses) : 0.0;
}

double TrialDiagnostics::trigger_plus_rate() const {
    return pulses ? static_cast<double>(trigger_plus) / static_cast<double>(pulses) : 0.0;
}

double TrialDiagnostics::bob_rejection_rate() const {
    return bob_bit_pairs ? static_cast<double>(bob_rejections) / static_cast<double>(bob_bit_pairs) : 0.0;
}

std::string TrialDiagnostics::to_text() const {
    std::ostringstream out;
    out.precision(10);
    out << "pulses=" << pulses << '\n'
        << "accepted=" << accepted << '\n'
        << "acceptance_rate=" << acceptance_rate() << '\n'
        << "trigger_clicks=" << trigger_clicks << '\n'
        << "trigger_plus=" << trigger_plus << '\n'
        << "trigger_plus_rate=" << trigger_plus_rate() << '\n'
        << "bob_bit_pairs=" << bob_bit_pairs << '\n'
        << "bob_rejections=" << bob_rejections << '\n'
        << "bob_rejection_rate=" << bob_rejection_rate() << '\n';
    for (const auto &[s, n] : settings_drawn) {
        out << "drawn." << s << '=' << n << '\n';
    }
    for (const auto &[s, n] : settings_accepted) {
        out << "accepted." << s << '=' << n << '\n';
    }
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        out << "warning." << i << '=' << warnings[i] << '\n';
    }
    return out.str();
}

TrialRun run_trials(const TrialConfig &config, const MeasurementLayout &layout) {
    const PulseModel model(config, layout);
    const std::uint64_t n_batches = (config.n_pulses + kBatchPulses - 1) / kBatchPulses;
    std::vector<BatchResult> batches(n_batches);
    parallel_for(n_batches, [&](std::size_t b) {
        Rng rng = substream(config.seed, b);
        BatchResult &out = batches[b];
        std::array<std::uint64_t, 12> drawn{};
        const std::uint64_t begin = b * kBatchPulses;
        const std::uint64_t end = std::min(config.n_pulses, begin + kBatchPulses);
        for (std::uint64_t i = begin; i < end; ++i) {
            int rejections = 0;
            const TrialRecord rec = model.simulate(rng, i, &rejections);
            const int slot = setting_slot(rec.settings[0], rec.settings[1], rec.settings[2]);
            ++drawn[slot];
            out.diag.bob_bit_pairs += 1 + rejections;
            out.diag.bob_rejections += rejections;
            if (rec.trigger_outcome) {
                ++out.diag.trigger_clicks;
                out.diag.trigger_plus += *rec.trigger_outcome == 1;
            }
            if (rec.accepted) {
                ++out.diag.accepted;
                std::size_t o = 0;
                for (int k = 0; k < 3; ++k) {
                    o = (o << 1) | (*rec.outcomes[k] < 0 ? 1 : 0);
                }
                ++out.counts[slot][o];
            }
        }
        out.diag.pulses = end - begin;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 3; ++y) {
                for (int z = 0; z < 2; ++z) {
                    out.diag.settings_drawn[setting_key(x, y, z)] = drawn[setting_slot(x, y, z)];
                }
            }
        }
    });

    TrialRun run;
    std::array<CountsTable::Row, 12> totals{};
    for (const BatchResult &b : batches) {
        for (std::size_t s = 0; s < 12; ++s) {
            for (std::size_t o = 0; o < 8; ++o) {
                totals[s][o] += b.counts[s][o];
            }
        }
        run.diagnostics.pulses += b.diag.pulses;
        run.diagnostics.accepted += b.diag.accepted;
        run.diagnostics.trigger_clicks += b.diag.trigger_clicks;
        run.diagnostics.trigger_plus += b.diag.trigger_plus;
        run.diagnostics.bob_bit_pairs += b.diag.bob_bit_pairs;
        run.diagnostics.bob_rejections += b.diag.bob_rejections;
        for (const auto &[s, n] : b.diag.settings_drawn) {
            run.diagnostics.settings_drawn[s] += n;
        }
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int z = 0; z < 2; ++z) {
                const auto &row = totals[setting_slot(x, y, z)];
                std::uint64_t n = 0;
                for (auto c : row) {
                    n += c;
                }
                run.diagnostics.settings_accepted[setting_key(x, y, z)] = n;
                if (n > 0) {
                    run.counts.set_row(setting_key(x, y, z), row);
                }
            }
        }
    }
    if (run.diagnostics.accepted == 0) {
        run.diagnostics.warnings.push_back("no accepted four-fold coincidences");
    }
    return run;
}

QuantumState four_photon_state(double visibility) {
    return mix_white_noise(ghz_state(4), visibility);
}

QuantumState conditioned_three_photon_state(const QuantumState &four_photon, int trigger_sign) {
    if (four_photon.n_qubits() != 4) {
        throw DimensionError("conditioning needs a four-qubit state");
    }
    if (trigger_sign != 1 && trigger_sign != -1) {
        throw DomainError("trigger outcome must be +1 or -1");
    }
    const Matrix rho4 = four_photon.density_matrix();
    Matrix rho3 = Matrix::Zero(8, 8);
    // <i|rho3|j> = sum_{t,t'} <s|t> rho4[(i,t),(j,t')] <t'|s> with <s|t> = sign^t / sqrt2
    for (Eigen::Index i = 0; i < 8; ++i) {
        for (Eigen::Index j = 0; j < 8; ++j) {
            Complex acc = 0.0;
            for (int t = 0; t < 2; ++t) {
                for (int tp = 0; tp < 2; ++tp) {
                    const double phase = ((t + tp) % 2 == 1) ? trigger_sign : 1.0;
                    acc += 0.5 * phase * rho4(2 * i + t, 2 * j + tp);
                }
            }
            rho3(i, j) = acc;
        }
    }
    const double prob = rho3.trace().real();
    if (!(prob > 0.0)) {
        throw ConditioningError("trigger outcome has zero probability");
    }
    rho3 /= prob;
    rho3 = (rho3 + rho3.adjoint()) / 2.0;
    return QuantumState::mixed(std::move(rho3));
}

double conditioned_state_check() {
    return fidelity_with_pure(conditioned_three_photon_state(four_photon_state(1.0), +1), ghz_state(3));
}

}  // namespace losr::trials
