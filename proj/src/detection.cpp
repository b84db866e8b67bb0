/*
 * Copyright 2026 the cohabit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cohabit/detection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace cohabit {

void DetectionConfig::validate() const {
    for (Property p : all_properties) {
        if (!(impact_cap[p] > 0.0))
            throw std::invalid_argument(std::string("DetectionConfig: impact cap for ") +
                                        std::string(property_name(p)) + " must be > 0");
        if (default_tolerance[p] < 0.0)
            throw std::invalid_argument(std::string("DetectionConfig: default tolerance for ") +
                                        std::string(property_name(p)) + " must be >= 0");
    }
    if (temporal_threshold < 0.0 || temporal_threshold > 1.0)
        throw std::invalid_argument("DetectionConfig: temporal threshold outside [0,1]");
    if (preferential_threshold < 0.0 || preferential_threshold > 1.0)
        throw std::invalid_argument("DetectionConfig: preferential threshold outside [0,1]");
    if (preference.min_pts < 1) throw std::invalid_argument("DetectionConfig: min_pts must be >= 1");
    if (!(preference.coverage_p > 0.0) || preference.coverage_p > 1.0)
        throw std::invalid_argument("DetectionConfig: coverage outside (0,1]");
}

bool impact_preconditions(const ServiceRequest& a, const ServiceRequest& b,
                          const std::vector<AffinityRule>& rules) {
    if (normalize_location(a.location) != normalize_location(b.location)) return false;
    if (!overlap_segment(a.interval, b.interval)) return false;
    if (a.user == b.user) return false;
    if (a.service_id == b.service_id) return false;
    const auto pa = influenced_properties(a, rules);
    const auto pb = influenced_properties(b, rules);
    for (Property p : pa) {
        if (std::find(pb.begin(), pb.end(), p) != pb.end()) return true;
    }
    return false;
}

namespace {

double median3(double a, double b, double c) { return a + b + c - std::min({a, b, c}) - std::max({a, b, c}); }

} // namespace

double preferential_proximity(double pref_lo, double pref_hi, double env_lo, double env_hi) {
    if (pref_lo > pref_hi) throw std::invalid_argument("preferential_proximity: malformed preferred range");
    if (env_lo > env_hi) throw std::invalid_argument("preferential_proximity: malformed fluctuated range");
    const double denom = std::max(pref_hi, env_hi) - std::min(pref_lo, env_lo);
    if (denom == 0.0) return 1.0; // all four endpoints coincide
    const double numer = std::abs(median3(pref_lo, env_lo, env_hi) - median3(pref_hi, env_lo, env_hi));
    return numer / denom;
}

double temporal_proximity(const std::vector<TimeInterval>& intervals) {
    if (intervals.size() < 2) throw std::invalid_argument("temporal_proximity: needs at least two intervals");
    double t1 = intervals.front().start().seconds();
    double t2n = intervals.front().end().seconds();
    for (const auto& iv : intervals) {
        t1 = std::min(t1, iv.start().seconds());
        t2n = std::max(t2n, iv.end().seconds());
    }
    const double span = t2n - t1;
    if (span <= 0.0) return 1.0; // all intervals degenerate and coincident

    std::vector<std::pair<double, int>> edges;
    edges.reserve(intervals.size() * 2);
    for (const auto& iv : intervals) {
        edges.emplace_back(iv.start().seconds(), +1);
        edges.emplace_back(iv.end().seconds(), -1);
    }
    std::sort(edges.begin(), edges.end());
    double total = 0.0;
    int depth = 0;
    double prev = edges.front().first;
    for (const auto& [t, delta] : edges) {
        total += depth * (t - prev);
        depth += delta;
        prev = t;
    }
    return total / (span * static_cast<double>(intervals.size()));
}

namespace {

// A resident can only experience a conflict through a service that expresses a
// desired state for the property (a setpoint or a source level). Couplings
// such as windows and blinds admit the outdoors; they carry no preference.
bool expresses_requirement(const ServiceRequest& request, Property p, const std::vector<AffinityRule>& rules) {
    for (const auto& rule : rules) {
        if (rule.property != p) continue;
        if (rule.effect == EffectKind::external_coupling) continue;
        if (pattern_matches(rule.service_pattern, request.service_id)) return true;
    }
    return false;
}

struct PairAssessment {
    Signal signal;
    Impact impact;
    std::vector<OverlapSegment> violations;
};

PairAssessment assess_pair(const ServiceRequest& affected, const ServiceRequest& other, const RoomContext& ctx,
                           const std::vector<AffinityRule>& rules, const StlRequirement& req,
                           DeviationForm form) {
    const auto segment = overlap_segment(affected.interval, other.interval);
    if (!segment) throw std::invalid_argument("assess_impact: requests do not overlap");
    Signal signal = predict_signal(req.property, {affected, other}, ctx, rules, req.window);
    const double value = deviation_integral(signal, req, form);
    auto violations = violation_intervals(signal, req, form);
    Impact impact{affected.service_id, std::string(property_name(req.property)), *segment, value};
    return {std::move(signal), std::move(impact), std::move(violations)};
}

} // namespace

Impact assess_impact(const ServiceRequest& affected, const ServiceRequest& other, const RoomContext& ctx,
                     const std::vector<AffinityRule>& rules, const StlRequirement& req, DeviationForm form) {
    return assess_pair(affected, other, ctx, rules, req, form).impact;
}

LikelihoodResult conflict_likelihood(double impact_value, double pref_prox, double temp_prox, double cap) {
    if (impact_value < 0.0) throw std::invalid_argument("conflict_likelihood: impact must be >= 0");
    if (pref_prox < 0.0 || pref_prox > 1.0)
        throw std::invalid_argument("conflict_likelihood: preferential proximity outside [0,1]");
    if (temp_prox < 0.0 || temp_prox > 1.0)
        throw std::invalid_argument("conflict_likelihood: temporal proximity outside [0,1]");
    if (!(cap > 0.0)) throw std::invalid_argument("conflict_likelihood: cap must be > 0");
    const double weight = std::min(impact_value / cap, 1.0);
    LikelihoodResult out;
    out.raw_cl = weight * ((1.0 - pref_prox) + temp_prox);
    out.likelihood = std::clamp(out.raw_cl / 2.0, 0.0, 1.0);
    return out;
}

std::vector<ImpactConflict> detect(const std::vector<ServiceRequest>& requests,
                                   const std::vector<ServiceEvent>& history,
                                   const std::map<std::string, RoomContext>& rooms,
                                   const std::vector<AffinityRule>& rules, const DetectionConfig& cfg) {
    cfg.validate();
    std::vector<ImpactConflict> conflicts;

    for (std::size_t i = 0; i < requests.size(); ++i) {
        for (std::size_t j = i + 1; j < requests.size(); ++j) {
            const ServiceRequest& a = requests[i];
            const ServiceRequest& b = requests[j];
            if (!impact_preconditions(a, b, rules)) continue;

            const std::string location = normalize_location(a.location);
            const auto room_it = rooms.find(location);
            if (room_it == rooms.end()) continue;
            const RoomContext& room = room_it->second;

            const auto segment = overlap_segment(a.interval, b.interval);
            const auto props_a = influenced_properties(a, rules);
            const auto props_b = influenced_properties(b, rules);

            for (Property p : all_properties) {
                if (std::find(props_a.begin(), props_a.end(), p) == props_a.end()) continue;
                if (std::find(props_b.begin(), props_b.end(), p) == props_b.end()) continue;

                for (const ServiceRequest* victim : {&a, &b}) {
                    const ServiceRequest& affected = *victim;
                    const ServiceRequest& other = (victim == &a) ? b : a;
                    if (!expresses_requirement(affected, p, rules)) continue;

                    const auto attribute = property_name(p);
                    const auto setpoint = affected.quality_value(attribute);

                    std::optional<PreferenceBand> band;
                    if (!cfg.no_preference)
                        band = estimate_preference(history, affected.user, attribute, *segment, location,
                                                   cfg.preference);

                    double lambda;
                    if (setpoint) {
                        lambda = *setpoint;
                    } else if (band) {
                        lambda = band->center();
                    } else {
                        continue; // no requirement derivable for this resident
                    }

                    double tolerance;
                    double pref_lo, pref_hi;
                    if (cfg.no_preference) {
                        tolerance = 0.0;
                        pref_lo = pref_hi = lambda;
                    } else if (band) {
                        tolerance = band->half_width();
                        pref_lo = band->lo;
                        pref_hi = band->hi;
                    } else {
                        tolerance = cfg.default_tolerance[p];
                        pref_lo = lambda - tolerance;
                        pref_hi = lambda + tolerance;
                    }

                    const StlRequirement req{p, lambda, segment->interval(), tolerance};
                    const PairAssessment assessment =
                        assess_pair(affected, other, room, rules, req, cfg.deviation_form);
                    if (!(assessment.impact.value > 0.0) || assessment.violations.empty()) continue;

                    const auto [env_lo, env_hi] = assessment.signal.range_over(segment->interval());
                    const double pp = preferential_proximity(pref_lo, pref_hi, env_lo, env_hi);

                    std::vector<TimeInterval> proximity_intervals{segment->interval()};
                    for (const auto& v : assessment.violations) proximity_intervals.push_back(v.interval());
                    const double tp = temporal_proximity(proximity_intervals);

                    if (tp < cfg.temporal_threshold) continue;
                    if (pp > cfg.preferential_threshold) continue;

                    const LikelihoodResult cl =
                        conflict_likelihood(assessment.impact.value, pp, tp, cfg.impact_cap[p]);

                    ImpactConflict conflict;
                    conflict.service_id = affected.service_id;
                    conflict.attribute_name = std::string(attribute);
                    conflict.interval =
                        TimeInterval{assessment.violations.front().start(), assessment.violations.back().end()};
                    conflict.location = location;
                    conflict.user = affected.user;
                    // the baseline treats any impact as a conflict outright
                    conflict.likelihood = cfg.no_preference ? 1.0 : cl.likelihood;
                    conflict.raw_cl = cl.raw_cl;
                    conflict.impact_value = assessment.impact.value;
                    conflict.pref_prox = pp;
                    conflict.temp_prox = tp;
                    conflicts.push_back(std::move(conflict));
                }
            }
        }
    }
    return conflicts;
}

void write_conflicts_jsonl(std::ostream& out, const std::vector<ImpactConflict>& conflicts) {
    for (const auto& c : conflicts) {
        nlohmann::json j{{"service", c.service_id},
                         {"attribute", c.attribute_name},
                         {"user", c.user},
                         {"location", c.location},
                         {"start", format_timestamp(c.interval.start())},
                         {"end", format_timestamp(c.interval.end())},
                         {"likelihood", c.likelihood},
                         {"raw_cl", c.raw_cl},
                         {"impact_value", c.impact_value},
                         {"pref_prox", c.pref_prox},
                         {"temp_prox", c.temp_prox}};
        out << j.dump() << '\n';
    }
}

} // namespace cohabit
