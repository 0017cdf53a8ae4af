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

#include "losr/counts.hpp"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

#include "losr/errors.hpp"
#include "losr/random.hpp"

using namespace losr;

namespace {

const std::string kHeader = "setting,ppp,ppm,pmp,pmm,mpp,mpm,mmp,mmm\n";

CountsTable fixture() {
    return load_counts_file(std::string(LOSR_DATA_DIR) + "/table2_counts.csv");
}

CountsTable parse(const std::string &text) {
    std::istringstream in(text);
    return load_counts(in);
}

int parse_error_line(const std::string &text) {
    try {
        parse(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    return -1;
}

CountsTable sample_counts(const ProbabilityTable &table, std::uint64_t trials, std::uint64_t seed) {
    CountsTable counts;
    std::uint64_t i = 0;
    for (const auto &name : required_settings()) {
        Rng rng = substream(seed, i++);
        const auto p = table.distribution(parse_setting(name));
        const auto drawn = sample_multinomial(rng, trials, p);
        CountsTable::Row row{};
        std::copy(drawn.begin(), drawn.end(), row.begin());
        counts.set_row(name, row);
    }
    return counts;
}

CountsTable scaled(const CountsTable &counts, std::uint64_t factor) {
    CountsTable out;
    for (const auto &[name, row] : counts.rows()) {
        CountsTable::Row r = row;
        for (auto &c : r) {
            c *= factor;
        }
        out.set_row(name, r);
    }
    return out;
}

}  // namespace

TEST(load_counts, bundled_fixture) {
    const auto counts = fixture();
    EXPECT_EQ(counts.rows().size(), 12u);
    const CountsTable::Row expected{1064, 9, 192, 23, 16, 250, 8, 1227};
    EXPECT_EQ(counts.row("000"), expected);
    EXPECT_EQ(counts.row_total("000"), 2789u);
    EXPECT_EQ(counts.total_events(), 33770u);
}

TEST(load_counts, malformed_inputs) {
    EXPECT_EQ(parse_error_line(""), 0);
    EXPECT_EQ(parse_error_line("# only a comment\n\n"), 0);
    EXPECT_EQ(parse_error_line("setting,a,b\n"), 1);
    EXPECT_EQ(parse_error_line(kHeader + "000,1,2,3,4,5,6,7\n"), 2);
    EXPECT_EQ(parse_error_line(kHeader + "000,1,2,3,4,5,6,7,8,9\n"), 2);
    EXPECT_EQ(parse_error_line(kHeader + "# c\n000,1,2,3,4,5,6,7,8\n000,1,2,3,4,5,6,7,8\n"), 4);
    EXPECT_EQ(parse_error_line(kHeader + "000,1,2,3,-4,5,6,7,8\n"), 2);
    EXPECT_EQ(parse_error_line(kHeader + "000,1,2,3,4.5,5,6,7,8\n"), 2);
    EXPECT_EQ(parse_error_line(kHeader + "030,1,2,3,4,5,6,7,8\n"), 2);
    EXPECT_EQ(parse_error_line(kHeader + "00,1,2,3,4,5,6,7,8\n"), 2);
    EXPECT_THROW(load_counts_file("/nonexistent/counts.csv"), InputError);
}

TEST(load_counts, partial_tables_load_but_do_not_evaluate) {
    const auto counts = parse(kHeader + "000,1,0,0,0,0,0,0,0\n");
    EXPECT_TRUE(counts.contains("000"));
    EXPECT_THROW(evaluate_counts(counts), LayoutError);
}

TEST(write_counts, round_trip) {
    const auto counts = fixture();
    std::ostringstream out;
    write_counts(out, counts);
    EXPECT_EQ(parse(out.str()).rows(), counts.rows());
}

TEST(counts_to_probabilities, table_rows) {
    const auto t = counts_to_probabilities(fixture());
    EXPECT_NEAR(t.probability({0, 0, 0}, 0), 1064.0 / 2789.0, 1e-15);
    EXPECT_NEAR(1064.0 / 2789.0, 0.38150, 5e-6);
    const std::vector<std::pair<int, int>> fixed{{0, 0}, {1, 2}, {2, 0}};
    const std::vector<int> ab{0, 1};
    EXPECT_NEAR(pooled_correlator(t, fixed, ab), 2607.0 / 2739.0, 1e-15);

    CountsTable single;
    single.set_row("000", {1, 0, 0, 0, 0, 0, 0, 0});
    const auto s = counts_to_probabilities(single).distribution({0, 0, 0});
    EXPECT_EQ(s, (std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0}));

    CountsTable zero;
    zero.set_row("000", {});
    EXPECT_THROW(counts_to_probabilities(zero), NormalizationError);
}

TEST(evaluate_counts, published_data) {
    const auto r = evaluate_counts(fixture());
    EXPECT_NEAR(r.f_value, 2.338, 0.01);
    EXPECT_TRUE(r.violates_classical_bound());
}

TEST(evaluate_counts, sampled_ideal_and_mixed_tables) {
    const auto ideal = outcome_probabilities(ghz_state(3), standard_layout());
    EXPECT_NEAR(evaluate_counts(sample_counts(ideal, 1000000, 1)).f_value, kQuantumMax, 0.01);
    const auto mixed = outcome_probabilities(mix_white_noise(ghz_state(3), 0.0), standard_layout());
    EXPECT_NEAR(evaluate_counts(sample_counts(mixed, 1000000, 2)).f_value, -8.0, 0.05);
}

TEST(evaluate_counts, converges_to_table_value) {
    const auto table = outcome_probabilities(mix_white_noise(ghz_state(3), 0.96), standard_layout());
    const double exact = f_score(table).f_value;
    const auto counts = sample_counts(table, 1000000, 7);
    const auto stats = bootstrap_sigma(counts, 200, 8);
    EXPECT_LT(std::abs(stats.f_value - exact), 3 * stats.sigma);
}

TEST(evaluate_counts, scale_invariant) {
    const auto counts = fixture();
    const double base = evaluate_counts(counts).f_value;
    EXPECT_DOUBLE_EQ(evaluate_counts(scaled(counts, 7)).f_value, base);
    // A row the games never read has no influence at any scale.
    CountsTable one_row = counts;
    CountsTable::Row r = counts.row("110");
    for (auto &c : r) {
        c *= 5;
    }
    one_row.set_row("110", r);
    EXPECT_NEAR(evaluate_counts(one_row).f_value, base, 1e-12);
}

TEST(bootstrap_sigma, published_data_bands) {
    const auto s = bootstrap_sigma(fixture(), 10000, 1);
    EXPECT_GE(s.sigma, 0.035);
    EXPECT_LE(s.sigma, 0.055);
    EXPECT_GE(s.sigma_violation, 7.0);
    EXPECT_LE(s.sigma_violation, 8.2);
    EXPECT_NEAR(s.sigma_violation, (s.f_value - 2.0) / s.sigma, 1e-9);
    EXPECT_EQ(s.n_events, 33770u);
    EXPECT_EQ(s.excluded, 0);
    EXPECT_FALSE(s.unstable);
}

TEST(bootstrap_sigma, reproducible) {
    const auto a = bootstrap_sigma(fixture(), 500, 42);
    const auto b = bootstrap_sigma(fixture(), 500, 42);
    const auto c = bootstrap_sigma(fixture(), 500, 43);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.f_value, b.f_value);
    EXPECT_NE(a.sigma, c.sigma);
    const auto p1 = bootstrap_sigma(fixture(), 500, 42, ResampleModel::poisson);
    const auto p2 = bootstrap_sigma(fixture(), 500, 42, ResampleModel::poisson);
    EXPECT_EQ(p1.sigma, p2.sigma);
    EXPECT_GT(p1.sigma, 0.0);
}

TEST(bootstrap_sigma, shrinks_with_statistics) {
    const auto counts = fixture();
    const double sigma = bootstrap_sigma(counts, 2000, 5).sigma;
    const double sigma100 = bootstrap_sigma(scaled(counts, 100), 2000, 5).sigma;
    EXPECT_NEAR(sigma / sigma100, 10.0, 1.0);
}

TEST(bootstrap_sigma, argument_checks) {
    EXPECT_THROW(bootstrap_sigma(fixture(), 99, 1), DomainError);
}

TEST(bootstrap_sigma, flags_unstable_denominator) {
    // Charlie reports +1 once per z=1 row, so a third of the resamples lose the conditioning event.
    CountsTable counts;
    for (const auto &name : required_settings()) {
        CountsTable::Row row{};
        if (name[2] == '1') {
            row = {1, 0, 0, 0, 0, 0, 0, 5};
        } else {
            row = {5, 0, 0, 0, 0, 0, 0, 5};
        }
        counts.set_row(name, row);
    }
    const auto s = bootstrap_sigma(counts, 200, 3);
    EXPECT_GT(s.excluded, 2);
    EXPECT_TRUE(s.unstable);
}

TEST(ghz3_witness_operator, equals_projector) {
    const Matrix w = ghz3_witness_operator();
    const Matrix proj = ghz_state(3).density_matrix();
    EXPECT_LT((w - proj).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR((w * proj).trace().real(), 1.0, 1e-12);
    for (double p : {0.0, 0.3, 0.9313}) {
        const Matrix rho = mix_white_noise(ghz_state(3), p).density_matrix();
        EXPECT_NEAR((w * rho).trace().real(), p + (1 - p) / 8, 1e-12);
    }
}

TEST(ghz3_witness_operator, printed_term_set_is_not_the_projector) {
    const Matrix half_pop = (pauli_operator("III") + pauli_operator("ZZI") + pauli_operator("ZIZ") +
                             pauli_operator("IZZ")) /
                            8.0;
    const Matrix printed = half_pop + (pauli_operator("XXX") - pauli_operator("YXY") - pauli_operator("XYX") -
                                       pauli_operator("YYX")) /
                                          8.0;
    const Matrix analytic = half_pop + (pauli_operator("XXX") - pauli_operator("XYY") - pauli_operator("YXY") -
                                        pauli_operator("YYX")) /
                                           8.0;
    const Matrix proj = ghz_state(3).density_matrix();
    EXPECT_LT((analytic - proj).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT((printed - proj).cwiseAbs().maxCoeff(), 0.1);
}

TEST(witness_fidelity, reference_values) {
    std::map<std::string, double> ideal{{"HHH", 0.5}, {"VVV", 0.5}, {"XXX", 1},
                                        {"XYY", -1},  {"YXY", -1},  {"YYX", -1}};
    EXPECT_NEAR(witness_fidelity(ideal), 1.0, 1e-15);
    std::map<std::string, double> mixed{{"HHH", 0.125}, {"VVV", 0.125}, {"XXX", 0},
                                        {"XYY", 0},     {"YXY", 0},     {"YYX", 0}};
    EXPECT_NEAR(witness_fidelity(mixed), 0.125, 1e-15);
    auto missing = ideal;
    missing.erase("YXY");
    EXPECT_THROW(witness_fidelity(missing), InputError);
    auto bad = ideal;
    bad["XXX"] = 1.5;
    EXPECT_THROW(witness_fidelity(bad), InputError);
    bad = ideal;
    bad["HHH"] = -0.1;
    EXPECT_THROW(witness_fidelity(bad), InputError);
}

TEST(witness_fidelity, white_noise_values_from_born_rule) {
    const auto x = DichotomicObservable::pauli_x(), y = DichotomicObservable::pauli_y(),
               z = DichotomicObservable::pauli_z();
    // A state sitting at the reported 93.13% fidelity, and the p = 0.9313 state itself.
    const double p_at_report = (0.9313 - 0.125) / 0.875;
    for (double p : {p_at_report, 0.9313}) {
        const auto rho = mix_white_noise(ghz_state(3), p);
        const auto zzz = outcome_distribution(rho, MeasurementLayout({{z}, {z}, {z}}), {0, 0, 0});
        auto triple = [&](const DichotomicObservable &a, const DichotomicObservable &b, const DichotomicObservable &c) {
            const std::vector<DichotomicObservable> obs{a, b, c};
            return expectation(rho, obs);
        };
        const std::map<std::string, double> values{{"HHH", zzz[0]},         {"VVV", zzz[7]},
                                                   {"XXX", triple(x, x, x)}, {"XYY", triple(x, y, y)},
                                                   {"YXY", triple(y, x, y)}, {"YYX", triple(y, y, x)}};
        EXPECT_NEAR(witness_fidelity(values), p + (1 - p) / 8, 1e-12);
    }
    const auto at_report = mix_white_noise(ghz_state(3), p_at_report);
    EXPECT_NEAR(fidelity_with_pure(at_report, ghz_state(3)), 0.9313, 1e-12);
}
