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
#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "losr/errors.hpp"
#include "test_helpers.hpp"

using namespace losr;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ProbabilityTable exact_table(const QuantumState &state) {
    return outcome_probabilities(state, standard_layout());
}

ProbabilityTable n_party_table(const QuantumState &state, int n) {
    const auto settings = n_party_settings(n);
    return outcome_probabilities(state, n_party_layout(n), settings);
}

// Outcome index for explicit +-1 outputs, party 0 most significant.
std::size_t index_of(std::initializer_list<int> outputs) {
    std::size_t o = 0;
    for (int v : outputs) {
        o = (o << 1) | (v < 0 ? 1 : 0);
    }
    return o;
}

// Table with every row a single deterministic outcome given by local response functions.
ProbabilityTable deterministic_table(const std::array<int, 2> &a, const std::array<int, 3> &b,
                                     const std::array<int, 2> &c) {
    ProbabilityTable t(3);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int z = 0; z < 2; ++z) {
                std::vector<double> w(8, 0.0);
                w[index_of({a[x], b[y], c[z]})] = 1.0;
                t.set_row({x, y, z}, w);
            }
        }
    }
    return t;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double trace_with(const Matrix &rho, const Matrix2 &a, const Matrix2 &b, const Matrix2 &c) {
    return (rho * kron(kron(a, b), c)).trace().real();
}

// F from operator expectations only, no probability tables.
double direct_f(const QuantumState &state) {
    const auto layout = standard_layout();
    const Matrix rho = state.density_matrix();
    const Matrix2 id = Matrix2::Identity();
    const Matrix2 c1 = layout.observable(2, 1).matrix();
    const double c_mean = trace_with(rho, id, id, c1);
    auto cond = [&](int x, int y) {
        const Matrix2 a = layout.observable(0, x).matrix(), b = layout.observable(1, y).matrix();
        return (trace_with(rho, a, b, id) + trace_with(rho, a, b, c1)) / (1.0 + c_mean);
    };
    const double bell = cond(0, 0) + cond(0, 1) + cond(1, 0) - cond(1, 1);
    const double same = trace_with(rho, layout.observable(0, 0).matrix(), layout.observable(1, 2).matrix(), id) +
                        trace_with(rho, id, layout.observable(1, 2).matrix(), layout.observable(2, 0).matrix());
    return bell + (4.0 * same - 8.0) / (1.0 + c_mean);
}

}  // namespace

TEST(collective_charlie, parity) {
    EXPECT_EQ(collective_charlie(std::vector<int>{+1, +1}), +1);
    EXPECT_EQ(collective_charlie(std::vector<int>{-1, -1}), +1);
    EXPECT_EQ(collective_charlie(std::vector<int>{-1, +1, +1}), -1);
    EXPECT_EQ(collective_charlie(std::vector<int>{-1}), -1);
    EXPECT_THROW(collective_charlie(std::vector<int>{}), DomainError);
}

TEST(conditional_ab_correlator, ideal_ghz) {
    const auto t = exact_table(ghz_state(3));
    EXPECT_NEAR(conditional_ab_correlator(t, 0, 0), 1.0 / kSqrt2, 1e-12);
    EXPECT_NEAR(conditional_ab_correlator(t, 0, 1), 1.0 / kSqrt2, 1e-12);
    EXPECT_NEAR(conditional_ab_correlator(t, 1, 0), 1.0 / kSqrt2, 1e-12);
    EXPECT_NEAR(conditional_ab_correlator(t, 1, 1), -1.0 / kSqrt2, 1e-12);
}

TEST(conditional_ab_correlator, empty_condition_and_uniform) {
    const auto never_plus = deterministic_table({1, 1}, {1, 1, 1}, {1, -1});
    EXPECT_THROW(conditional_ab_correlator(never_plus, 0, 0), ConditioningError);
    ProbabilityTable uniform(3);
    for (const auto &s : standard_layout().all_settings()) {
        uniform.set_row(s, std::vector<double>(8, 1.0));
    }
    EXPECT_NEAR(conditional_ab_correlator(uniform, 1, 1), 0.0, 1e-9);
    EXPECT_THROW(conditional_ab_correlator(ProbabilityTable(3), 0, 0), LayoutError);
}

TEST(i_bell, ideal_noisy_and_product) {
    EXPECT_NEAR(i_bell(exact_table(ghz_state(3))), 2 * kSqrt2, 1e-12);
    for (double p : {0.2, 0.5, 0.8, 0.95}) {
        EXPECT_NEAR(i_bell(exact_table(mix_white_noise(ghz_state(3), p))), 2 * kSqrt2 * p, 1e-12);
    }
    Vector plus = Vector::Constant(8, Complex(1.0 / std::sqrt(8.0)));
    EXPECT_LE(i_bell(exact_table(QuantumState::pure(plus))), 2.0 + 1e-12);
}

TEST(i_same, ideal_noisy_mixed) {
    EXPECT_NEAR(i_same(exact_table(ghz_state(3))), 2.0, 1e-12);
    EXPECT_NEAR(i_same(exact_table(mix_white_noise(ghz_state(3), 0.7))), 1.4, 1e-12);
    EXPECT_NEAR(i_same(exact_table(mix_white_noise(ghz_state(3), 0.0))), 0.0, 1e-12);
    ProbabilityTable partial(3);
    partial.set_row({0, 0, 1}, std::vector<double>(8, 1.0));
    EXPECT_THROW(i_same(partial), LayoutError);
}

TEST(f_score, reference_values) {
    const auto ideal = f_score(exact_table(ghz_state(3)));
    EXPECT_NEAR(ideal.f_value, 2 * kSqrt2, 1e-12);
    EXPECT_NEAR(ideal.c1_mean, 0.0, 1e-12);
    EXPECT_TRUE(ideal.violates_classical_bound());
    EXPECT_EQ(ideal.terms.size(), 7u);

    const auto noisy = f_score(exact_table(mix_white_noise(ghz_state(3), 0.95)));
    EXPECT_NEAR(noisy.f_value, 2 * kSqrt2 * 0.95 + 8 * (0.95 - 1), 1e-12);
    EXPECT_NEAR(noisy.f_value, 2.2870, 5e-5);

    const auto mixed = f_score(exact_table(mix_white_noise(ghz_state(3), 0.0)));
    EXPECT_NEAR(mixed.f_value, -8.0, 1e-12);
    EXPECT_FALSE(mixed.violates_classical_bound());
}

TEST(f_score, singular_denominator) {
    // Charlie's input-1 output is always -1, so 1 + <C1> = 0.
    const auto t = deterministic_table({1, 1}, {1, 1, 1}, {1, -1});
    EXPECT_THROW(f_score(t), ConditioningError);
}

TEST(f_score, matches_direct_expectations) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto state = trial % 2 ? fixtures::random_mixed(rng, 3) : fixtures::random_pure(rng, 3);
        const auto t = exact_table(state);
        const double denom = 1.0 + c1_mean(t);
        if (denom < 1e-3) {
            continue;
        }
        EXPECT_NEAR(f_score(t).f_value, direct_f(state), 1e-9 * std::max(1.0, 1.0 / denom));
    }
}

TEST(f_score, quantum_states_respect_bounds) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const auto t = exact_table(fixtures::random_mixed(rng, 3));
        const auto r = f_score(t);
        EXPECT_LE(std::abs(r.i_bell), kQuantumMax + 1e-9);
        EXPECT_LE(std::abs(r.i_same), 2.0 + 1e-9);
        EXPECT_LE(std::abs(r.c1_mean), 1.0 + 1e-9);
    }
}

TEST(f_score, deterministic_strategies_never_exceed_two) {
    int evaluated = 0;
    for (int sa = 0; sa < 4; ++sa) {
        for (int sb = 0; sb < 8; ++sb) {
            for (int sc = 0; sc < 4; ++sc) {
                auto bit = [](int s, int k) { return (s >> k) & 1 ? -1 : +1; };
                const std::array<int, 2> a{bit(sa, 0), bit(sa, 1)};
                const std::array<int, 3> b{bit(sb, 0), bit(sb, 1), bit(sb, 2)};
                const std::array<int, 2> c{bit(sc, 0), bit(sc, 1)};
                const auto t = deterministic_table(a, b, c);
                if (c[1] < 0) {
                    EXPECT_THROW(f_score(t), ConditioningError);
                    continue;
                }
                EXPECT_LE(f_score(t).f_value, 2.0 + 1e-12) << sa << sb << sc;
                ++evaluated;
            }
        }
    }
    EXPECT_EQ(evaluated, 64);
}

TEST(f_score, shared_randomness_never_exceeds_two) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> strategy(0, 127);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        ProbabilityTable mix(3);
        std::vector<std::vector<double>> rows(12, std::vector<double>(8, 0.0));
        const int parts = 1 + trial % 6;
        for (int k = 0; k < parts; ++k) {
            const int s = strategy(rng);
            const double w = weight(rng);
            auto bit = [&](int shift) { return (s >> shift) & 1 ? -1 : +1; };
            const std::array<int, 2> a{bit(0), bit(1)};
            const std::array<int, 3> b{bit(2), bit(3), bit(4)};
            const std::array<int, 2> c{bit(5), bit(6)};
            int r = 0;
            for (int x = 0; x < 2; ++x) {
                for (int y = 0; y < 3; ++y) {
                    for (int z = 0; z < 2; ++z, ++r) {
                        rows[r][index_of({a[x], b[y], c[z]})] += w;
                    }
                }
            }
        }
        int r = 0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 3; ++y) {
                for (int z = 0; z < 2; ++z, ++r) {
                    mix.set_row({x, y, z}, rows[r]);
                }
            }
        }
        if (1.0 + c1_mean(mix) < 1e-6) {
            continue;
        }
        EXPECT_LE(f_score(mix).f_value, 2.0 + 1e-9) << trial;
    }
}

TEST(n_party_f, reduces_to_three_party_score) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = exact_table(fixtures::random_mixed(rng, 3));
        EXPECT_DOUBLE_EQ(n_party_f(t, 3).f_value, f_score(t).f_value);
    }
}

TEST(n_party_f, ideal_and_white_noise) {
    const auto ghz4 = n_party_f(n_party_table(ghz_state(4), 4), 4);
    EXPECT_NEAR(ghz4.f_value, 2 * kSqrt2, 1e-12);
    EXPECT_NEAR(ghz4.i_same, 3.0, 1e-12);
    EXPECT_NEAR(ghz4.c1_mean, 0.0, 1e-12);
    for (int n = 3; n <= 7; ++n) {
        for (double p : {0.5, 0.9, 0.99}) {
            const auto r = n_party_f(n_party_table(mix_white_noise(ghz_state(n), p), n), n);
            EXPECT_NEAR(r.f_value, 2 * kSqrt2 * p + 4 * (n - 1) * (p - 1), 1e-10) << n << " " << p;
            EXPECT_NEAR(r.i_same, (n - 1) * p, 1e-10);
            EXPECT_NEAR(simulated_white_noise_f(n, p), r.f_value, 1e-12);
        }
    }
    EXPECT_THROW(n_party_f(exact_table(ghz_state(3)), 2), DomainError);
}

TEST(n_party_f, charlie_relabeling_invariance) {
    // Dephased GHZ states are symmetric under any permutation of qubits; the
    // score must not depend on which physical qubit each Charlie holds.
    for (int n = 4; n <= 5; ++n) {
        const Matrix rho_ghz = mix_white_noise(ghz_state(n), 0.9).density_matrix();
        const std::size_t dim = std::size_t{1} << n;
        Matrix rho = rho_ghz;
        rho(0, dim - 1) *= 0.8;
        rho(dim - 1, 0) *= 0.8;
        const double base = n_party_f(n_party_table(QuantumState::mixed(rho), n), n).f_value;
        // Swap the first and last Charlie qubits.
        auto swap_bits = [&](std::size_t i) {
            const int q1 = n - 1 - 2, q2 = 0;  // bit positions of parties 2 and n-1
            const std::size_t b1 = (i >> q1) & 1, b2 = (i >> q2) & 1;
            if (b1 != b2) {
                i ^= (std::size_t{1} << q1) | (std::size_t{1} << q2);
            }
            return i;
        };
        Matrix permuted(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                permuted(swap_bits(i), swap_bits(j)) = rho(i, j);
            }
        }
        const double swapped = n_party_f(n_party_table(QuantumState::mixed(permuted), n), n).f_value;
        EXPECT_NEAR(base, swapped, 1e-12);
    }
}

TEST(thresholds, closed_forms) {
    EXPECT_NEAR(visibility_threshold(3), 5.0 / (4.0 + kSqrt2), 1e-15);
    EXPECT_NEAR(visibility_threshold(4), 7.0 / (6.0 + kSqrt2), 1e-15);
    EXPECT_THROW(visibility_threshold(2), DomainError);
    EXPECT_THROW(fidelity_threshold(2), DomainError);
    for (int n = 3; n <= 12; ++n) {
        const double p = visibility_threshold(n), f = fidelity_threshold(n);
        EXPECT_NEAR(f, p + (1 - p) / std::ldexp(1.0, n), 1e-14);
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, f);
        EXPECT_LT(f, 1.0);
        if (n > 3) {
            EXPECT_GT(p, visibility_threshold(n - 1));
            EXPECT_GT(f, fidelity_threshold(n - 1));
        }
    }
    EXPECT_GE(fidelity_threshold(3), 0.93);
    EXPECT_GT(visibility_threshold(1000), 0.999);
}

TEST(thresholds, bisection_matches_closed_form) {
    for (int n = 3; n <= 8; ++n) {
        EXPECT_NEAR(bisect_visibility_threshold(n), visibility_threshold(n), 1e-9) << n;
        EXPECT_NEAR(simulated_white_noise_f(n, visibility_threshold(n)), 2.0, 1e-6) << n;
    }
    const double p3 = visibility_threshold(3);
    EXPECT_NEAR(f_score(exact_table(mix_white_noise(ghz_state(3), p3))).f_value, 2.0, 1e-6);
}
