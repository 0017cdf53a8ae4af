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

// Locality-closure arithmetic. All times are in nanoseconds from the start of a
// trial (pump emission at the first source), all lengths in meters.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace losr::spacetime {

/// Vacuum light speed in m/ns, truncated to six digits as in the reference timing tables.
inline constexpr double kPrintedLightSpeed = 0.299792;
inline constexpr double kPreciseLightSpeed = 0.299792458;

struct Measured {
    double value = 0.0;
    double uncertainty = 0.0;
};

struct Segment {
    std::string name;
    Measured duration;
};

/// Ordered delay segments. total() is the segment sum unless a printed total
/// was supplied, in which case that value wins and consistent() reports whether
/// the two agree.
class DelayChain {
   public:
    DelayChain() = default;
    explicit DelayChain(std::vector<Segment> segments, std::optional<Measured> declared_total = std::nullopt);

    const std::vector<Segment> &segments() const {
        return segments_;
    }
    const std::optional<Measured> &declared_total() const {
        return declared_total_;
    }
    double segment_sum() const;
    /// Root-sum-square of the segment uncertainties.
    double rss_uncertainty() const;
    Measured total() const;
    bool consistent(double tolerance = 0.05) const;
    /// Throws ConfigurationError if no segment has this name.
    const Segment &segment(const std::string &name) const;

   private:
    std::vector<Segment> segments_;
    std::optional<Measured> declared_total_;
};

/// Photon path to detection and the setting-choice path, for one party.
struct NodeChains {
    DelayChain photon;
    DelayChain basis;
    /// Segment of `photon` that runs from the modulator to the detector output.
    std::string measurement_segment = "measurement";
};

struct UncertaintyMode {
    /// Empty for root-sum-square propagation.
    std::optional<double> fixed_ns;
};

struct SpacetimeLayout {
    std::vector<std::string> nodes;
    /// Parties that choose settings and detect photons; every one needs chains.
    std::vector<std::string> parties;
    /// Straight-line distances keyed by (a, b) with a < b.
    std::map<std::pair<std::string, std::string>, Measured> distances;
    std::map<std::pair<std::string, std::string>, Measured> fiber_lengths;
    UncertaintyMode uncertainty;
    double light_speed = kPrintedLightSpeed;

    void set_distance(const std::string &a, const std::string &b, Measured d);
    /// Throws ConfigurationError when the pair is unknown.
    Measured distance(const std::string &a, const std::string &b) const;
    /// Positivity and the triangle inequality (within summed uncertainties)
    /// over every triple whose three distances are known. Throws ConfigurationError.
    void validate() const;
};

struct ClosureReport {
    std::string detector_node;
    std::string chooser_node;
    double margin = 0.0;
    double uncertainty = 0.0;
    bool pass = false;
};

/// detection_total - measurement_delay - basis_chain_total. Throws
/// ConfigurationError for negative inputs or a choice before the trial starts.
double earliest_basis_choice(const std::string &node, double detection_total, double measurement_delay,
                             double basis_chain_total);

/// margin = chooser_basis_time + distance / c - detector_detection_time.
/// Uncertainty is the layout's fixed value, or the root-sum-square of the
/// three inputs' uncertainties (the distance one converted to ns).
ClosureReport locality_closure(const SpacetimeLayout &layout, const std::string &detector,
                               const std::string &chooser, Measured chooser_basis_time,
                               Measured detector_detection_time, Measured distance);

/// Time of the earliest setting choice of `node`, with its uncertainty.
Measured basis_choice_time(const std::string &node, const NodeChains &chains);

/// Every ordered (detector, chooser) pair of distinct parties, detector-major in
/// party order. Throws ConfigurationError when a party has no chains.
std::vector<ClosureReport> audit(const SpacetimeLayout &layout, const std::map<std::string, NodeChains> &chains);

/// Human-readable notes on chains whose printed totals disagree with their segments.
std::vector<std::string> chain_warnings(const std::map<std::string, NodeChains> &chains);

struct SpacetimeConfig {
    SpacetimeLayout layout;
    std::map<std::string, NodeChains> chains;
};

/// Reads the JSON layout document (`nodes`, `parties`, `distances`,
/// `fiber_lengths`, `delay_chains`, `uncertainty_mode`, `light_speed`).
SpacetimeConfig load_layout(std::istream &in);
SpacetimeConfig load_layout_file(const std::filesystem::path &path);

}  // namespace losr::spacetime
