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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "losr/inequality.hpp"
#include "losr/quantum.hpp"

namespace losr {

/// Column names of the eight outcome strings, +++ first.
inline constexpr std::array<const char *, 8> kOutcomeColumns = {"ppp", "ppm", "pmp", "pmm",
                                                                 "mpp", "mpm", "mmp", "mmm"};

/// Three-party coincidence counts keyed by setting string "xyz".
class CountsTable {
   public:
    using Row = std::array<std::uint64_t, 8>;

    /// Throws InputError for a setting outside x in {0,1}, y in {0,1,2}, z in {0,1}.
    void set_row(const std::string &setting, const Row &counts);
    bool contains(const std::string &setting) const {
        return rows_.count(setting) != 0;
    }
    const Row &row(const std::string &setting) const;
    std::uint64_t row_total(const std::string &setting) const;
    std::uint64_t total_events() const;
    const std::map<std::string, Row> &rows() const {
        return rows_;
    }

   private:
    std::map<std::string, Row> rows_;
};

/// The twelve settings xyz with x in {0,1}, y in {0,1,2}, z in {0,1}.
std::vector<std::string> required_settings();
Setting parse_setting(const std::string &setting);

/// Reads the counts CSV: header `setting,ppp,ppm,pmp,pmm,mpp,mpm,mmp,mmm`,
/// `#` comments, blank lines ignored. Errors carry the offending line number.
CountsTable load_counts(std::istream &in);
CountsTable load_counts_file(const std::filesystem::path &path);
void write_counts(std::ostream &out, const CountsTable &counts);

/// Rows keep their raw counts as weights, so pooled marginals are count-weighted.
ProbabilityTable counts_to_probabilities(const CountsTable &counts);

/// f_score on the counts; requires all twelve settings.
InequalityReport evaluate_counts(const CountsTable &counts);

enum class ResampleModel {
    /// Per-row multinomial with the row total held fixed.
    multinomial,
    /// Every cell drawn independently from a Poisson law at its observed count.
    poisson,
};

struct StatReport {
    double f_value = 0.0;
    double sigma = 0.0;
    double sigma_violation = 0.0;
    std::uint64_t n_events = 0;
    int resamples = 0;
    std::uint64_t seed = 0;
    ResampleModel model = ResampleModel::multinomial;
    /// Resamples dropped because F was undefined on them.
    int excluded = 0;
    /// More than 1% of resamples excluded.
    bool unstable = false;
};

/// Parametric bootstrap of F. Resample i draws from substream(seed, i), so the
/// result is bit-for-bit reproducible. Requires resamples >= 100.
StatReport bootstrap_sigma(const CountsTable &counts, int resamples, std::uint64_t seed,
                           ResampleModel model = ResampleModel::multinomial);

/// |GHZ3><GHZ3| assembled from its locally measurable parts:
/// (|HHH><HHH| + |VVV><VVV|) / 2 + (XXX - XYY - YXY - YYX) / 8.
Matrix ghz3_witness_operator();

/// Keys accepted by witness_fidelity: populations HHH and VVV from the ZZZ
/// setting, and the four triple correlators XXX, XYY, YXY, YYX.
std::vector<std::string> witness_keys();

/// (P_HHH + P_VVV) / 2 + (<XXX> - <XYY> - <YXY> - <YYX>) / 8.
/// Throws InputError for a missing key or a value out of range.
double witness_fidelity(const std::map<std::string, double> &expectations);

}  // namespace losr
