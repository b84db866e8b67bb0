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

#ifndef COHABIT_MODEL_HPP
#define COHABIT_MODEL_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cohabit/time.hpp"

namespace cohabit {

/// Ambient environment properties tracked by the framework.
enum class Property { temperature, illumination, sound, humidity };

inline constexpr std::array<Property, 4> all_properties = {Property::temperature, Property::illumination,
                                                           Property::sound, Property::humidity};

std::string_view property_name(Property p);
std::string_view property_unit(Property p); // degC, lux, dB, %RH
std::optional<Property> property_from_name(std::string_view name);

/// Small fixed map keyed by Property.
template <typename T>
struct PropertyMap {
    std::array<T, 4> values{};

    T& operator[](Property p) { return values[static_cast<std::size_t>(p)]; }
    const T& operator[](Property p) const { return values[static_cast<std::size_t>(p)]; }
};

/// Lower-cased, trimmed location label; matching is exact equality afterwards.
std::string normalize_location(std::string_view raw);

/// Named non-functional attribute of a service, e.g. ("temperature", 20.0).
struct QualityAttribute {
    std::string attribute_name;
    double value = 0.0;

    bool operator==(const QualityAttribute&) const = default;
};

struct Service {
    std::string id;
    std::string name;
    std::vector<std::string> functions;
    std::vector<QualityAttribute> qualities;
};

/// Registry enforcing unique ids and non-empty names.
class ServiceRegistry {
public:
    void add(Service service);
    const Service* find(std::string_view id) const;
    std::size_t size() const { return services_.size(); }

private:
    std::vector<Service> services_;
};

/// A historical record of one service interaction.
struct ServiceEvent {
    std::string event_id;
    std::string service_id;
    std::vector<std::string> functions;
    std::vector<QualityAttribute> qualities;
    TimeInterval interval{Timestamp{0}, Timestamp{0}};
    std::string location;
    std::string user;

    std::optional<double> quality_value(std::string_view attribute) const;
};

/// A resident's current service requirement.
struct ServiceRequest {
    std::string request_id;
    std::string service_id;
    std::vector<std::string> functions;
    std::vector<QualityAttribute> qualities;
    TimeInterval interval{Timestamp{0}, Timestamp{0}};
    std::string location;
    std::string user;

    std::optional<double> quality_value(std::string_view attribute) const;
};

/// Requires non-empty user and location; throws std::invalid_argument otherwise.
void validate_event(const ServiceEvent& event);

/// Effect of a request pair on one service/attribute over an overlap segment.
/// value is the deviation-integral severity; 0 means no impact.
struct Impact {
    std::string service_id;
    std::string attribute_name;
    OverlapSegment time;
    double value = 0.0;
};

/// A detected conflict: who experiences it, where, when, and how likely.
struct ImpactConflict {
    std::string service_id;      // the impacted service (the affected user's own)
    std::string attribute_name;  // the environment property involved
    TimeInterval interval{Timestamp{0}, Timestamp{0}};
    std::string location;
    std::string user;            // resident who experiences the conflict
    double likelihood = 0.0;     // in [0, 1]
    double raw_cl = 0.0;         // unnormalized likelihood value, >= 0

    // diagnostics carried into the report
    double impact_value = 0.0;
    double pref_prox = 0.0;
    double temp_prox = 0.0;
};

} // namespace cohabit

#endif
