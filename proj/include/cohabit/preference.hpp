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

#ifndef COHABIT_PREFERENCE_HPP
#define COHABIT_PREFERENCE_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cohabit/model.hpp"
#include "cohabit/time.hpp"

namespace cohabit {

/// How historical events are matched against a query segment. `daily`
/// projects intervals onto the clock (an event from any prior day whose
/// time-of-day range intersects the segment counts); `absolute` intersects
/// raw timestamps.
enum class OverlapMatch { daily, absolute };

struct OverlappingEventSet {
    struct Entry {
        ServiceEvent event;
        TimeInterval interval{Timestamp{0}, Timestamp{0}};
    };
    std::vector<Entry> entries;
};

/// Mined per-user acceptable range for one attribute.
struct PreferenceBand {
    std::string user;
    std::string attribute_name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t support = 0; // contributing samples
    double coverage = 0.0;   // fraction of the cluster inside [lo, hi]

    double half_width() const { return 0.5 * (hi - lo); }
    double center() const { return 0.5 * (lo + hi); }
};

struct PreferenceParams {
    PropertyMap<double> eps{{1.0, 5.0, 3.0, 5.0}}; // degC, lux, dB, %RH neighborhoods
    int min_pts = 4;
    double coverage_p = 0.8;
    OverlapMatch match = OverlapMatch::daily;
    /// Keep only events whose start or end falls inside the segment, mirroring
    /// the narrower bookkeeping variant; the default full-intersection test
    /// also admits events that enclose the segment.
    bool strict_endpoint_test = false;
    /// Optional context partition (weekday/weekend, time of day); events
    /// rejected by the predicate do not contribute to the band. Off by default.
    std::function<bool(const ServiceEvent&)> pre_filter;
};

/// Every event at `location` whose interval intersects the segment with
/// positive measure, paired with its interval.
OverlappingEventSet overlapping_service_events(const std::vector<ServiceEvent>& history,
                                               const OverlapSegment& segment, std::string_view location,
                                               OverlapMatch match = OverlapMatch::daily,
                                               bool strict_endpoint_test = false);

inline constexpr int dbscan_noise = -1;

/// Standard density-based clustering with Euclidean distance. Neighborhoods
/// are closed balls (distance <= eps) and include the point itself. Border
/// points attach to the first cluster discovered in input scan order, so the
/// labeling is deterministic for a given input order.
std::vector<int> dbscan(const std::vector<std::vector<double>>& points, double eps, int min_pts);

/// Narrowest interval covering at least ceil(coverage_p * n) of the values.
/// Ties are broken toward the smaller lower bound. Returns (lo, hi, coverage).
struct BandResult {
    double lo = 0.0;
    double hi = 0.0;
    double coverage = 0.0;
};
BandResult preference_band(std::vector<double> values, double coverage_p = 0.8);

/// Full pipeline: filter the user's events overlapping the segment, cluster
/// the attribute values, and band the largest cluster. Absent when no cluster
/// reaches min_pts ("no preference learnable").
std::optional<PreferenceBand> estimate_preference(const std::vector<ServiceEvent>& history,
                                                  std::string_view user, std::string_view attribute,
                                                  const OverlapSegment& segment, std::string_view location,
                                                  const PreferenceParams& params);

/// CSV with header `user,attribute,lo,hi,support,coverage`.
void write_bands_csv(std::ostream& out, const std::vector<PreferenceBand>& bands);

} // namespace cohabit

#endif
