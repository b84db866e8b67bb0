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

#ifndef COHABIT_DETECTION_HPP
#define COHABIT_DETECTION_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cohabit/env.hpp"
#include "cohabit/model.hpp"
#include "cohabit/preference.hpp"
#include "cohabit/signal.hpp"

namespace cohabit {

struct DetectionConfig {
    /// Deviation-integral value (property-unit x minutes) mapped to an impact
    /// weight of 1.0.
    PropertyMap<double> impact_cap{{100.0, 600.0, 200.0, 300.0}};
    /// Tolerance fallback when no preference band is learnable.
    PropertyMap<double> default_tolerance{{1.5, 5.0, 5.0, 5.0}};
    /// Pairs with temporal proximity below this are pruned.
    double temporal_threshold = 0.0;
    /// Pairs with preferential proximity above this are pruned.
    double preferential_threshold = 1.0;
    /// Baseline mode: skip preference mining; any positive impact is a conflict.
    bool no_preference = false;
    DeviationForm deviation_form = DeviationForm::magnitude;
    PreferenceParams preference;

    void validate() const;
};

/// True iff the two requests can interfere: same normalized location, a
/// positive-length temporal overlap, different users, different services, and
/// at least one environment property both services influence.
bool impact_preconditions(const ServiceRequest& a, const ServiceRequest& b,
                          const std::vector<AffinityRule>& rules);

/// Median-based overlap score between the preferred range and the fluctuated
/// ambient range; 1 = complete match, 0 = disjoint. The degenerate case with
/// all four endpoints equal counts as a complete match.
double preferential_proximity(double pref_lo, double pref_hi, double env_lo, double env_hi);

/// Normalized co-occurrence weight of >= 2 intervals: the integral of their
/// stacked indicator functions over the global span, divided by span x n.
/// Evaluated exactly via a sweep over sorted endpoints.
double temporal_proximity(const std::vector<TimeInterval>& intervals);

/// Predicts the joint ambient signal of both requests over the requirement's
/// window and scores it against the affected resident's requirement.
Impact assess_impact(const ServiceRequest& affected, const ServiceRequest& other, const RoomContext& ctx,
                     const std::vector<AffinityRule>& rules, const StlRequirement& req,
                     DeviationForm form = DeviationForm::magnitude);

struct LikelihoodResult {
    double raw_cl = 0.0;
    double likelihood = 0.0;
};

/// raw = min(impact/cap, 1) * ((1 - pref_prox) + temp_prox); the likelihood is
/// raw / 2 clamped into [0, 1].
LikelihoodResult conflict_likelihood(double impact_value, double pref_prox, double temp_prox, double cap);

/// Full pipeline over every unordered request pair. `rooms` maps normalized
/// locations to their contexts; pairs in rooms without a context are skipped.
std::vector<ImpactConflict> detect(const std::vector<ServiceRequest>& requests,
                                   const std::vector<ServiceEvent>& history,
                                   const std::map<std::string, RoomContext>& rooms,
                                   const std::vector<AffinityRule>& rules, const DetectionConfig& cfg);

/// JSON lines, one object per conflict.
void write_conflicts_jsonl(std::ostream& out, const std::vector<ImpactConflict>& conflicts);

} // namespace cohabit

#endif
