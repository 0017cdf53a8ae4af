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

#include "losr/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "losr/errors.hpp"

namespace losr::spacetime {

namespace {

std::pair<std::string, std::string> key(const std::string &a, const std::string &b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

double rss(std::initializer_list<double> values) {
    double s = 0.0;
    for (double v : values) {
        s += v * v;
    }
    return std::sqrt(s);
}

}  // namespace

DelayChain::DelayChain(std::vector<Segment> segments, std::optional<Measured> declared_total)
    : segments_(std::move(segments)), declared_total_(declared_total) {
    for (const auto &s : segments_) {
        if (!(s.duration.value >= 0.0) || !(s.duration.uncertainty >= 0.0)) {
            throw ConfigurationError("delay segment '" + s.name + "' must be nonnegative");
        }
    }
    if (declared_total_ && !(declared_total_->value >= 0.0)) {
        throw ConfigurationError("declared chain total must be nonnegative");
    }
}

double DelayChain::segment_sum() const {
    double t = 0.0;
    for (const auto &s : segments_) {
        t += s.duration.value;
    }
    return t;
}

double DelayChain::rss_uncertainty() const {
    double t = 0.0;
    for (const auto &s : segments_) {
        t += s.duration.uncertainty * s.duration.uncertainty;
    }
    return std::sqrt(t);
}

Measured DelayChain::total() const {
    if (declared_total_) {
        return *declared_total_;
    }
    return {segment_sum(), rss_uncertainty()};
}

bool DelayChain::consistent(double tolerance) const {
    return !declared_total_ || std::abs(declared_total_->value - segment_sum()) <= tolerance;
}

const Segment &DelayChain::segment(const std::string &name) const {
    for (const auto &s : segments_) {
        if (s.name == name) {
            return s;
        }
    }
    throw ConfigurationError("delay chain has no segment '" + name + "'");
}

void SpacetimeLayout::set_distance(const std::string &a, const std::string &b, Measured d) {
    distances[key(a, b)] = d;
}

Measured SpacetimeLayout::distance(const std::string &a, const std::string &b) const {
    auto it = distances.find(key(a, b));
    if (it == distances.end()) {
        throw ConfigurationError("no distance between " + a + " and " + b);
    }
    return it->second;
}

void SpacetimeLayout::validate() const {
    if (!(light_speed > 0.0)) {
        throw ConfigurationError("light speed must be positive");
    }
    for (const auto &[k, d] : distances) {
        if (k.first == k.second) {
            throw ConfigurationError("distance from " + k.first + " to itself");
        }
        if (!(d.value > 0.0)) {
            throw ConfigurationError("distance " + k.first + "-" + k.second + " must be positive");
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                if (i == j || j == k || i == k) {
                    continue;
                }
                auto ab = distances.find(key(nodes[i], nodes[j]));
                auto ac = distances.find(key(nodes[i], nodes[k]));
                auto cb = distances.find(key(nodes[k], nodes[j]));
                if (ab == distances.end() || ac == distances.end() || cb == distances.end()) {
                    continue;
                }
                const double slack = ab->second.uncertainty + ac->second.uncertainty + cb->second.uncertainty;
                if (ab->second.value > ac->second.value + cb->second.value + slack) {
                    throw ConfigurationError("distances " + nodes[i] + "-" + nodes[j] + " via " + nodes[k] +
                                             " violate the triangle inequality");
                }
            }
        }
    }
}

double earliest_basis_choice(const std::string &node, double detection_total, double measurement_delay,
                             double basis_chain_total) {
    if (!(detection_total >= 0.0 && measurement_delay >= 0.0 && basis_chain_total >= 0.0)) {
        throw ConfigurationError(node + ": delays must be nonnegative");
    }
    const double t = detection_total - measurement_delay - basis_chain_total;
    if (t < 0.0) {
        throw ConfigurationError(node + ": setting choice would precede the start of the trial");
    }
    return t;
}

ClosureReport locality_closure(const SpacetimeLayout &layout, const std::string &detector,
                               const std::string &chooser, Measured chooser_basis_time,
                               Measured detector_detection_time, Measured distance) {
    if (!(distance.value >= 0.0)) {
        throw ConfigurationError("distance must be nonnegative");
    }
    ClosureReport r;
    r.detector_node = detector;
    r.chooser_node = chooser;
    r.margin = chooser_basis_time.value + distance.value / layout.light_speed - detector_detection_time.value;
    r.uncertainty = layout.uncertainty.fixed_ns
                        ? *layout.uncertainty.fixed_ns
                        : rss({chooser_basis_time.uncertainty, detector_detection_time.uncertainty,
                               distance.uncertainty / layout.light_speed});
    r.pass = r.margin - r.uncertainty > 0.0;
    return r;
}

Measured basis_choice_time(const std::string &node, const NodeChains &chains) {
    const Measured detection = chains.photon.total();
    const Measured measurement = chains.photon.segment(chains.measurement_segment).duration;
    const Measured basis = chains.basis.total();
    return {earliest_basis_choice(node, detection.value, measurement.value, basis.value),
            rss({detection.uncertainty, measurement.uncertainty, basis.uncertainty})};
}

std::vector<ClosureReport> audit(const SpacetimeLayout &layout, const std::map<std::string, NodeChains> &chains) {
    layout.validate();
    for (const auto &p : layout.parties) {
        if (chains.count(p) == 0) {
            throw ConfigurationError("no delay chains for party " + p);
        }
    }
    std::vector<ClosureReport> out;
    for (const auto &detector : layout.parties) {
        const Measured detection = chains.at(detector).photon.total();
        for (const auto &chooser : layout.parties) {
            if (chooser == detector) {
                continue;
            }
            const Measured choice = basis_choice_time(chooser, chains.at(chooser));
            out.push_back(
                locality_closure(layout, detector, chooser, choice, detection, layout.distance(detector, chooser)));
        }
    }
    return out;
}

std::vector<std::string> chain_warnings(const std::map<std::string, NodeChains> &chains) {
    std::vector<std::string> out;
    auto check = [&](const std::string &node, const char *which, const DelayChain &c) {
        if (!c.consistent()) {
            std::ostringstream msg;
            msg << node << " " << which << " chain: printed total " << c.declared_total()->value
                << " ns differs from segment sum " << c.segment_sum() << " ns; using the printed total";
            out.push_back(msg.str());
        }
    };
    for (const auto &[node, c] : chains) {
        check(node, "photon", c.photon);
        check(node, "basis", c.basis);
    }
    return out;
}

namespace {

using nlohmann::json;

Measured parse_measured(const json &j, const std::string &what) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_object() && j.contains("value")) {
        return {j.at("value").get<double>(), j.value("uncertainty", 0.0)};
    }
    throw ConfigurationError(what + ": expected a number or {\"value\", \"uncertainty\"}");
}

std::map<std::pair<std::string, std::string>, Measured> parse_links(const json &j, const std::string &what) {
    std::map<std::pair<std::string, std::string>, Measured> out;
    if (j.is_null()) {
        return out;
    }
    if (!j.is_object()) {
        throw ConfigurationError(what + " must be an object keyed \"A-B\"");
    }
    for (const auto &[k, v] : j.items()) {
        const auto dash = k.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == k.size()) {
            throw ConfigurationError(what + " key '" + k + "' is not of the form A-B");
        }
        const auto pair = key(k.substr(0, dash), k.substr(dash + 1));
        if (out.count(pair)) {
            throw ConfigurationError(what + " pair " + k + " listed twice");
        }
        out[pair] = parse_measured(v, what + " " + k);
    }
    return out;
}

DelayChain parse_chain(const json &j, const std::string &what) {
    std::vector<Segment> segments;
    for (const auto &s : j.at("segments")) {
        segments.push_back({s.at("name").get<std::string>(), parse_measured(s, what)});
    }
    std::optional<Measured> total;
    if (j.contains("total")) {
        total = parse_measured(j.at("total"), what + " total");
    }
    return DelayChain(std::move(segments), total);
}

}  // namespace

SpacetimeConfig load_layout(std::istream &in) {
    SpacetimeConfig cfg;
    try {
        const json doc = json::parse(in);
        cfg.layout.nodes = doc.at("nodes").get<std::vector<std::string>>();
        cfg.layout.parties = doc.value("parties", cfg.layout.nodes);
        cfg.layout.distances = parse_links(doc.at("distances"), "distances");
        cfg.layout.fiber_lengths = parse_links(doc.value("fiber_lengths", json()), "fiber_lengths");
        const std::string mode = doc.value("uncertainty_mode", std::string("rss"));
        if (mode.rfind("fixed:", 0) == 0) {
            cfg.layout.uncertainty.fixed_ns = std::stod(mode.substr(6));
        } else if (mode != "rss") {
            throw ConfigurationError("uncertainty_mode must be 'rss' or 'fixed:<ns>'");
        }
        const std::string c = doc.value("light_speed", std::string("printed"));
        if (c == "printed") {
            cfg.layout.light_speed = kPrintedLightSpeed;
        } else if (c == "precise") {
            cfg.layout.light_speed = kPreciseLightSpeed;
        } else {
            throw ConfigurationError("light_speed must be 'printed' or 'precise'");
        }
        for (const auto &[node, chains] : doc.at("delay_chains").items()) {
            NodeChains nc;
            nc.photon = parse_chain(chains.at("photon"), node + " photon chain");
            nc.basis = parse_chain(chains.at("basis"), node + " basis chain");
            nc.measurement_segment = chains.value("measurement_segment", std::string("measurement"));
            nc.photon.segment(nc.measurement_segment);
            cfg.chains[node] = std::move(nc);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigurationError(std::string("layout document: ") + e.what());
    } catch (const std::invalid_argument &) {
        throw ConfigurationError("uncertainty_mode: bad fixed value");
    }
    for (const auto &p : cfg.layout.parties) {
        if (std::find(cfg.layout.nodes.begin(), cfg.layout.nodes.end(), p) == cfg.layout.nodes.end()) {
            throw ConfigurationError("party " + p + " is not a listed node");
        }
    }
    for (const auto &[k, d] : cfg.layout.distances) {
        for (const auto &n : {k.first, k.second}) {
            if (std::find(cfg.layout.nodes.begin(), cfg.layout.nodes.end(), n) == cfg.layout.nodes.end()) {
                throw ConfigurationError("distance refers to unknown node " + n);
            }
        }
    }
    cfg.layout.validate();
    return cfg;
}

SpacetimeConfig load_layout_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open layout file " + path.string());
    }
    return load_layout(in);
}

}  // namespace losr::spacetime
