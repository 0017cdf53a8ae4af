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

#include "losr/inequality.hpp"

#include <array>

#include "losr/errors.hpp"

namespace losr {

namespace {

void require_game_table(const ProbabilityTable &table, int n) {
    if (n < 3) {
        throw DomainError("the game needs at least three parties");
    }
    if (table.n_parties() != n) {
        throw LayoutError("table has " + std::to_string(table.n_parties()) + " parties, expected " +
                          std::to_string(n));
    }
}

Setting bell_setting(int n, int x, int y) {
    Setting s(n, 1);
    s[0] = x;
    s[1] = y;
    return s;
}

}  // namespace

double pooled_correlator(const ProbabilityTable &table, std::span<const std::pair<int, int>> fixed,
                         std::span<const int> parties) {
    const int n = table.n_parties();
    double signed_sum = 0.0;
    double total = 0.0;
    bool any = false;
    for (const Setting &s : table.settings()) {
        bool compatible = true;
        for (const auto &[party, input] : fixed) {
            compatible = compatible && s[party] == input;
        }
        if (!compatible) {
            continue;
        }
        any = true;
        const auto &w = table.weights(s);
        for (std::size_t o = 0; o < w.size(); ++o) {
            int sign = 1;
            for (int p : parties) {
                sign *= outcome_sign(o, p, n);
            }
            signed_sum += sign * w[o];
        }
        total += table.total(s);
    }
    if (!any) {
        std::string what = "no table row provides";
        for (const auto &[party, input] : fixed) {
            what += " party" + std::to_string(party) + "=" + std::to_string(input);
        }
        throw LayoutError(what);
    }
    return signed_sum / total;
}

int collective_charlie(std::span<const int> outputs) {
    if (outputs.empty()) {
        throw DomainError("collective Charlie outcome needs at least one output");
    }
    int product = 1;
    for (int c : outputs) {
        if (c != 1 && c != -1) {
            throw DomainError("outputs must be +1 or -1");
        }
        product *= c;
    }
    return product;
}

double conditional_ab_correlator(const ProbabilityTable &table, int x, int y) {
    const int n = table.n_parties();
    if (n < 3) {
        throw LayoutError("conditional correlator needs at least one Charlie");
    }
    const auto &w = table.weights(bell_setting(n, x, y));
    double num = 0.0, den = 0.0;
    std::vector<int> charlies(n - 2);
    for (std::size_t o = 0; o < w.size(); ++o) {
        for (int k = 2; k < n; ++k) {
            charlies[k - 2] = outcome_sign(o, k, n);
        }
        if (collective_charlie(charlies) != 1) {
            continue;
        }
        num += outcome_sign(o, 0, n) * outcome_sign(o, 1, n) * w[o];
        den += w[o];
    }
    if (!(den > 0.0)) {
        throw ConditioningError("Charlie never reports +1 on setting x=" + std::to_string(x) +
                                " y=" + std::to_string(y));
    }
    return num / den;
}

double i_bell(const ProbabilityTable &table) {
    return conditional_ab_correlator(table, 0, 0) + conditional_ab_correlator(table, 0, 1) +
           conditional_ab_correlator(table, 1, 0) - conditional_ab_correlator(table, 1, 1);
}

namespace {

// Same-game chain as (name, value) terms.
std::vector<Correlator> same_terms(const ProbabilityTable &table) {
    const int n = table.n_parties();
    std::vector<Correlator> out;
    {
        const std::array<std::pair<int, int>, 2> fixed{{{0, 0}, {1, 2}}};
        const std::array<int, 2> parties{0, 1};
        out.push_back({"<A0B2>", pooled_correlator(table, fixed, parties)});
    }
    {
        const std::array<std::pair<int, int>, 2> fixed{{{1, 2}, {2, 0}}};
        const std::array<int, 2> parties{1, 2};
        out.push_back({n == 3 ? "<B2C0>" : "<B2C0[1]>", pooled_correlator(table, fixed, parties)});
    }
    for (int k = 2; k + 1 < n; ++k) {
        const std::array<std::pair<int, int>, 2> fixed{{{k, 0}, {k + 1, 0}}};
        const std::array<int, 2> parties{k, k + 1};
        out.push_back({"<C0[" + std::to_string(k - 1) + "]C0[" + std::to_string(k) + "]>",
                       pooled_correlator(table, fixed, parties)});
    }
    return out;
}

}  // namespace

double i_same(const ProbabilityTable &table) {
    if (table.n_parties() < 3) {
        throw LayoutError("Same game needs at least three parties");
    }
    double sum = 0.0;
    for (const auto &t : same_terms(table)) {
        sum += t.value;
    }
    return sum;
}

double c1_mean(const ProbabilityTable &table) {
    const int n = table.n_parties();
    if (n < 3) {
        throw LayoutError("Charlie marginal needs at least three parties");
    }
    std::vector<std::pair<int, int>> fixed;
    std::vector<int> parties;
    for (int k = 2; k < n; ++k) {
        fixed.emplace_back(k, 1);
        parties.push_back(k);
    }
    return pooled_correlator(table, fixed, parties);
}

InequalityReport n_party_f(const ProbabilityTable &table, int n, double epsilon) {
    require_game_table(table, n);
    InequalityReport r;
    r.n_parties = n;
    const char *cond = n == 3 ? "_C1=+1" : "_~C1=+1";
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double v = conditional_ab_correlator(table, x, y);
            r.terms.push_back({"<A" + std::to_string(x) + "B" + std::to_string(y) + ">" + cond, v});
            r.i_bell += (x == 1 && y == 1) ? -v : v;
        }
    }
    for (auto &t : same_terms(table)) {
        r.i_same += t.value;
        r.terms.push_back(std::move(t));
    }
    r.c1_mean = c1_mean(table);
    r.terms.push_back({n == 3 ? "<C1>" : "<~C1>", r.c1_mean});
    const double denom = 1.0 + r.c1_mean;
    if (!(denom > epsilon)) {
        throw ConditioningError("1 + <C1> = " + std::to_string(denom) + " is too close to zero");
    }
    r.f_value = r.i_bell + (4.0 * r.i_same - 4.0 * (n - 1)) / denom;
    return r;
}

InequalityReport f_score(const ProbabilityTable &table, double epsilon) {
    return n_party_f(table, 3, epsilon);
}

std::vector<Setting> n_party_settings(int n) {
    if (n < 3) {
        throw DomainError("the game needs at least three parties");
    }
    std::vector<Setting> out;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            out.push_back(bell_setting(n, x, y));
        }
    }
    for (int x = 0; x < 2; ++x) {
        Setting s(n, 0);
        s[0] = x;
        s[1] = 2;
        out.push_back(s);
    }
    out.push_back(bell_setting(n, 0, 2));
    return out;
}

double visibility_threshold(int n) {
    if (n < 3) {
        throw DomainError("threshold defined for n >= 3");
    }
    return (2.0 * n - 1.0) / (2.0 * n - 2.0 + std::sqrt(2.0));
}

double fidelity_threshold(int n) {
    if (n < 3) {
        throw DomainError("threshold defined for n >= 3");
    }
    return (2.0 * n - 1.0 + (std::sqrt(2.0) - 1.0) / std::ldexp(1.0, n)) / (2.0 * n - 2.0 + std::sqrt(2.0));
}

ThresholdResult thresholds(int n) {
    return {n, visibility_threshold(n), fidelity_threshold(n)};
}

double simulated_white_noise_f(int n, double p) {
    const auto settings = n_party_settings(n);
    const auto table = outcome_probabilities(mix_white_noise(ghz_state(n), p), n_party_layout(n), settings);
    return n_party_f(table, n).f_value;
}

double bisect_visibility_threshold(int n, double tolerance) {
    double lo = 0.0, hi = 1.0;
    if (simulated_white_noise_f(n, hi) <= kClassicalBound) {
        throw DomainError("no violation even at unit visibility");
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (simulated_white_noise_f(n, mid) > kClassicalBound ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace losr
