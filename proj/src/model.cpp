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

#include "cohabit/model.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace cohabit {

std::string_view property_name(Property p) {
    switch (p) {
        case Property::temperature: return "temperature";
        case Property::illumination: return "illumination";
        case Property::sound: return "sound";
        case Property::humidity: return "humidity";
    }
    return "unknown";
}

std::string_view property_unit(Property p) {
    switch (p) {
        case Property::temperature: return "degC";
        case Property::illumination: return "lux";
        case Property::sound: return "dB";
        case Property::humidity: return "%RH";
    }
    return "";
}

std::optional<Property> property_from_name(std::string_view name) {
    for (Property p : all_properties) {
        if (name == property_name(p)) return p;
    }
    return std::nullopt;
}

std::string normalize_location(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string out(raw.substr(begin, end - begin));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void ServiceRegistry::add(Service service) {
    if (service.name.empty()) throw std::invalid_argument("Service: name must be non-empty");
    if (find(service.id) != nullptr) throw std::invalid_argument("Service: duplicate id '" + service.id + "'");
    services_.push_back(std::move(service));
}

const Service* ServiceRegistry::find(std::string_view id) const {
    for (const auto& s : services_) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

namespace {

std::optional<double> lookup(const std::vector<QualityAttribute>& qualities, std::string_view attribute) {
    for (const auto& q : qualities) {
        if (q.attribute_name == attribute) return q.value;
    }
    return std::nullopt;
}

} // namespace

std::optional<double> ServiceEvent::quality_value(std::string_view attribute) const {
    return lookup(qualities, attribute);
}

std::optional<double> ServiceRequest::quality_value(std::string_view attribute) const {
    return lookup(qualities, attribute);
}

void validate_event(const ServiceEvent& event) {
    if (event.user.empty()) throw std::invalid_argument("ServiceEvent " + event.event_id + ": empty user");
    if (event.location.empty()) throw std::invalid_argument("ServiceEvent " + event.event_id + ": empty location");
}

} // namespace cohabit
