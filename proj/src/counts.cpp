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

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "losr/errors.hpp"
#include "losr/random.hpp"

namespace losr {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

bool valid_setting(const std::string &s) {
    return s.size() == 3 && (s[0] == '0' || s[0] == '1') && (s[1] >= '0' && s[1] <= '2') &&
           (s[2] == '0' || s[2] == '1');
}

}  // namespace

Setting parse_setting(const std::string &setting) {
    if (!valid_setting(setting)) {
        throw InputError("invalid setting '" + setting + "'");
    }
    return {setting[0] - '0', setting[1] - '0', setting[2] - '0'};
}

void CountsTable::set_row(const std::string &setting, const Row &counts) {
    if (!valid_setting(setting)) {
        throw InputError("invalid setting '" + setting + "'");
    }
    rows_[setting] = counts;
}

const CountsTable::Row &CountsTable::row(const std::string &setting) const {
    auto it = rows_.find(setting);
    if (it == rows_.end()) {
        throw LayoutError("counts table has no row for setting " + setting);
    }
    return it->second;
}

std::uint64_t CountsTable::row_total(const std::string &setting) const {
    std::uint64_t t = 0;
    for (auto c : row(setting)) {
        t += c;
    }
    return t;
}

std::uint64_t CountsTable::total_events() const {
    std::uint64_t t = 0;
    for (const auto &[s, r] : rows_) {
        for (auto c : r) {
            t += c;
        }
    }
    return t;
}

std::vector<std::string> required_settings() {
    std::vector<std::string> out;
    for (char x : {'0', '1'}) {
        for (char y : {'0', '1', '2'}) {
            for (char z : {'0', '1'}) {
                out.push_back(std::string{x, y, z});
            }
        }
    }
    return out;
}

CountsTable load_counts(std::istream &in) {
    CountsTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto fields = split_csv(t);
        if (!header_seen) {
            std::vector<std::string> expected{"setting"};
            expected.insert(expected.end(), kOutcomeColumns.begin(), kOutcomeColumns.end());
            if (fields != expected) {
                throw ParseError(line_no, "expected header 'setting,ppp,ppm,pmp,pmm,mpp,mpm,mmp,mmm'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 9) {
            throw ParseError(line_no, "expected 9 fields, found " + std::to_string(fields.size()));
        }
        if (!valid_setting(fields[0])) {
            throw ParseError(line_no, "invalid setting '" + fields[0] + "'");
        }
        if (table.contains(fields[0])) {
            throw ParseError(line_no, "duplicate setting " + fields[0]);
        }
        CountsTable::Row row{};
        for (std::size_t i = 0; i < 8; ++i) {
            const std::string &f = fields[i + 1];
            if (!f.empty() && f[0] == '-') {
                throw ParseError(line_no, "negative count '" + f + "'");
            }
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[i]);
            if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
                throw ParseError(line_no, "count '" + f + "' is not a nonnegative integer");
            }
        }
        table.set_row(fields[0], row);
    }
    if (!header_seen) {
        throw ParseError(0, "counts file is empty");
    }
    return table;
}

CountsTable load_counts_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open counts file " + path.string());
    }
    return load_counts(in);
}

void write_counts(std::ostream &out, const CountsTable &counts) {
    out << "setting";
    for (const char *c : kOutcomeColumns) {
        out << ',' << c;
    }
    out << '\n';
    for (const auto &[s, row] : counts.rows()) {
        out << s;
        for (auto c : row) {
            out << ',' << c;
        }
        out << '\n';
    }
}

ProbabilityTable counts_to_probabilities(const CountsTable &counts) {
    ProbabilityTable table(3);
    for (const auto &[s, row] : counts.rows()) {
        std::vector<double> w(row.begin(), row.end());
        try {
            table.set_row(parse_setting(s), std::move(w));
        } catch (const NormalizationError &) {
            throw NormalizationError("setting " + s + " has no recorded events");
        }
    }
    return table;
}

InequalityReport evaluate_counts(const CountsTable &counts) {
    for (const auto &s : required_settings()) {
        if (!counts.contains(s)) {
            throw LayoutError("counts table is missing required setting " + s);
        }
    }
    return f_score(counts_to_probabilities(counts));
}

StatReport bootstrap_sigma(const CountsTable &counts, int resamples, std::uint64_t seed, ResampleModel model) {
    if (resamples < 100) {
        throw DomainError("bootstrap needs at least 100 resamples");
    }
    StatReport report;
    report.f_value = evaluate_counts(counts).f_value;
    report.n_events = counts.total_events();
    report.resamples = resamples;
    report.seed = seed;
    report.model = model;

    std::vector<std::optional<double>> values(static_cast<std::size_t>(resamples));
    parallel_for(values.size(), [&](std::size_t i) {
        Rng rng = substream(seed, i);
        CountsTable resampled;
        for (const auto &[s, row] : counts.rows()) {
            CountsTable::Row drawn{};
            if (model == ResampleModel::multinomial) {
                std::array<double, 8> probs{};
                std::uint64_t total = 0;
                for (std::size_t k = 0; k < 8; ++k) {
                    probs[k] = static_cast<double>(row[k]);
                    total += row[k];
                }
                const auto d = sample_multinomial(rng, total, probs);
                std::copy(d.begin(), d.end(), drawn.begin());
            } else {
                for (std::size_t k = 0; k < 8; ++k) {
                    if (row[k] > 0) {
                        std::poisson_distribution<std::uint64_t> pois(static_cast<double>(row[k]));
                        drawn[k] = pois(rng);
                    }
                }
            }
            resampled.set_row(s, drawn);
        }
        try {
            values[i] = evaluate_counts(resampled).f_value;
        } catch (const ConditioningError &) {
        } catch (const NormalizationError &) {
        }
    });

    double sum = 0.0, sum_sq = 0.0;
    int used = 0;
    for (const auto &v : values) {
        if (!v) {
            ++report.excluded;
            continue;
        }
        ++used;
        sum += *v;
    }
    if (used < 2) {
        throw ConditioningError("bootstrap: too few resamples with a defined F");
    }
    const double mean = sum / used;
    for (const auto &v : values) {
        if (v) {
            sum_sq += (*v - mean) * (*v - mean);
        }
    }
    report.sigma = std::sqrt(sum_sq / (used - 1));
    report.sigma_violation = (report.f_value - kClassicalBound) / report.sigma;
    report.unstable = report.excluded * 100 > resamples;
    return report;
}

Matrix ghz3_witness_operator() {
    Matrix w = Matrix::Zero(8, 8);
    w(0, 0) = 0.5;
    w(7, 7) = 0.5;
    w += (pauli_operator("XXX") - pauli_operator("XYY") - pauli_operator("YXY") - pauli_operator("YYX")) / 8.0;
    return w;
}

std::vector<std::string> witness_keys() {
    return {"HHH", "VVV", "XXX", "XYY", "YXY", "YYX"};
}

double witness_fidelity(const std::map<std::string, double> &expectations) {
    auto get = [&](const std::string &key, double lo) {
        auto it = expectations.find(key);
        if (it == expectations.end()) {
            throw InputError("witness term " + key + " is missing");
        }
        if (!(it->second >= lo - 1e-12 && it->second <= 1.0 + 1e-12)) {
            throw InputError("witness term " + key + " is out of range");
        }
        return it->second;
    };
    return 0.5 * (get("HHH", 0.0) + get("VVV", 0.0)) +
           (get("XXX", -1.0) - get("XYY", -1.0) - get("YXY", -1.0) - get("YYX", -1.0)) / 8.0;
}

}  // namespace losr
