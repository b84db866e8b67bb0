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

#include "cohabit/preference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>

namespace cohabit {

namespace {

// Shift the event interval by whole days so that it lines up with the frame of
// the query segment, then test plain intersection. Events are far shorter than
// a day, so the rounded shift and its neighbours cover every alignment.
bool daily_intersects(const TimeInterval& event, const OverlapSegment& segment, bool strict_endpoints) {
    const double day_s = 86400.0;
    const double base_shift = std::round((segment.start().seconds() - event.start().seconds()) / day_s);
    for (int d = -1; d <= 1; ++d) {
        const auto shift_ms = static_cast<std::int64_t>(base_shift + d) * ms_per_day;
        const Timestamp s = event.start() + shift_ms;
        const Timestamp e = event.end() + shift_ms;
        if (strict_endpoints) {
            if ((s >= segment.start() && s <= segment.end()) || (e >= segment.start() && e <= segment.end()))
                return true;
        } else if (s < segment.end() && e > segment.start()) {
            return true;
        }
    }
    return false;
}

bool absolute_intersects(const TimeInterval& event, const OverlapSegment& segment, bool strict_endpoints) {
    if (strict_endpoints) {
        return (event.start() >= segment.start() && event.start() <= segment.end()) ||
               (event.end() >= segment.start() && event.end() <= segment.end());
    }
    return event.start() < segment.end() && event.end() > segment.start();
}

double distance2(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

} // namespace

OverlappingEventSet overlapping_service_events(const std::vector<ServiceEvent>& history,
                                               const OverlapSegment& segment, std::string_view location,
                                               OverlapMatch match, bool strict_endpoint_test) {
    const std::string loc = normalize_location(location);
    OverlappingEventSet out;
    for (const auto& event : history) {
        if (normalize_location(event.location) != loc) continue;
        const bool hit = match == OverlapMatch::daily
                             ? daily_intersects(event.interval, segment, strict_endpoint_test)
                             : absolute_intersects(event.interval, segment, strict_endpoint_test);
        if (hit) out.entries.push_back({event, event.interval});
    }
    return out;
}

std::vector<int> dbscan(const std::vector<std::vector<double>>& points, double eps, int min_pts) {
    if (!(eps > 0.0)) throw std::invalid_argument("dbscan: eps must be > 0");
    if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be >= 1");
    const std::size_t n = points.size();
    const double eps2 = eps * eps;

    constexpr int undefined = -2;
    std::vector<int> labels(n, undefined);

    auto neighbors_of = [&](std::size_t i) {
        std::deque<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j) {
            if (distance2(points[i], points[j]) <= eps2) out.push_back(j);
        }
        return out;
    };

    int cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != undefined) continue;
        auto seeds = neighbors_of(i);
        if (seeds.size() < static_cast<std::size_t>(min_pts)) {
            labels[i] = dbscan_noise;
            continue;
        }
        labels[i] = cluster;
        while (!seeds.empty()) {
            const std::size_t j = seeds.front();
            seeds.pop_front();
            if (labels[j] == dbscan_noise) labels[j] = cluster; // border point
            if (labels[j] != undefined) continue;
            labels[j] = cluster;
            auto more = neighbors_of(j);
            if (more.size() >= static_cast<std::size_t>(min_pts))
                seeds.insert(seeds.end(), more.begin(), more.end());
        }
        ++cluster;
    }
    return labels;
}

BandResult preference_band(std::vector<double> values, double coverage_p) {
    if (values.empty()) throw std::invalid_argument("preference_band: no samples");
    if (!(coverage_p > 0.0) || coverage_p > 1.0)
        throw std::invalid_argument("preference_band: coverage must be in (0, 1]");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const auto k = static_cast<std::size_t>(std::ceil(coverage_p * static_cast<double>(n)));

    std::size_t best = 0;
    double best_width = values[k - 1] - values[0];
    for (std::size_t i = 1; i + k <= n; ++i) {
        const double width = values[i + k - 1] - values[i];
        if (width < best_width) {
            best_width = width;
            best = i;
        }
    }
    BandResult out;
    out.lo = values[best];
    out.hi = values[best + k - 1];
    const auto inside = static_cast<double>(
        std::count_if(values.begin(), values.end(), [&](double v) { return v >= out.lo && v <= out.hi; }));
    out.coverage = inside / static_cast<double>(n);
    return out;
}

std::optional<PreferenceBand> estimate_preference(const std::vector<ServiceEvent>& history,
                                                  std::string_view user, std::string_view attribute,
                                                  const OverlapSegment& segment, std::string_view location,
                                                  const PreferenceParams& params) {
    const OverlappingEventSet overlapping =
        overlapping_service_events(history, segment, location, params.match, params.strict_endpoint_test);

    std::vector<std::vector<double>> points;
    for (const auto& entry : overlapping.entries) {
        if (entry.event.user != user) continue;
        if (params.pre_filter && !params.pre_filter(entry.event)) continue;
        if (const auto value = entry.event.quality_value(attribute)) points.push_back({*value});
    }
    if (points.empty()) return std::nullopt;

    double eps = 1.0;
    if (const auto p = property_from_name(attribute)) eps = params.eps[*p];

    const std::vector<int> labels = dbscan(points, eps, params.min_pts);

    // pick the largest cluster; ties resolve to the first discovered
    int best_cluster = dbscan_noise;
    std::size_t best_size = 0;
    for (int label : labels) {
        if (label == dbscan_noise) continue;
        const auto size = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
        if (size > best_size || (size == best_size && label < best_cluster)) {
            best_size = size;
            best_cluster = label;
        }
    }
    if (best_cluster == dbscan_noise || best_size < static_cast<std::size_t>(params.min_pts))
        return std::nullopt;

    std::vector<double> members;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] == best_cluster) members.push_back(points[i][0]);
    }
    const BandResult band = preference_band(members, params.coverage_p);

    PreferenceBand out;
    out.user = std::string(user);
    out.attribute_name = std::string(attribute);
    out.lo = band.lo;
    out.hi = band.hi;
    out.support = best_size;
    out.coverage = band.coverage;
    return out;
}

void write_bands_csv(std::ostream& out, const std::vector<PreferenceBand>& bands) {
    out << "user,attribute,lo,hi,support,coverage\n";
    for (const auto& b : bands) {
        out << b.user << ',' << b.attribute_name << ',' << b.lo << ',' << b.hi << ',' << b.support << ','
            << b.coverage << '\n';
    }
}

} // namespace cohabit
