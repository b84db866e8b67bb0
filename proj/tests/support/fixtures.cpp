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

#include "fixtures.hpp"

namespace cohabit::fixtures {

ServiceRequest request(std::string id, std::string service, std::string user, std::string location,
                       Timestamp start, Timestamp end, std::vector<QualityAttribute> qualities) {
    ServiceRequest r;
    r.request_id = std::move(id);
    r.service_id = std::move(service);
    r.user = std::move(user);
    r.location = std::move(location);
    r.interval = TimeInterval{start, end};
    r.qualities = std::move(qualities);
    return r;
}

ServiceEvent event(std::string id, std::string service, std::string user, std::string location,
                   Timestamp start, Timestamp end, std::vector<QualityAttribute> qualities) {
    ServiceEvent e;
    e.event_id = std::move(id);
    e.service_id = std::move(service);
    e.user = std::move(user);
    e.location = std::move(location);
    e.interval = TimeInterval{start, end};
    e.qualities = std::move(qualities);
    return e;
}

Signal constant_signal(Property p, Timestamp start, Timestamp end, double value) {
    return Signal{p, {{start, value}, {end, value}}};
}

Scenario scenario_ac_window() {
    Scenario s;
    s.rules = default_rules();

    RoomContext living;
    living.location = "living";
    living.volume_m3 = 40.0;
    living.baseline[Property::temperature] = 25.0;
    living.outdoor[Property::temperature] = 30.0;
    s.rooms["living"] = living;

    const Timestamp day = make_timestamp(2011, 7, 20);
    s.requests.push_back(request("sr-ac", "ac", "R1", "living", day + 20 * 3'600'000LL,
                                 day + 22 * 3'600'000LL, {{"temperature", 20.0}}));
    s.requests.push_back(request("sr-window", "window", "R2", "living",
                                 day + 20 * 3'600'000LL + 30 * 60'000LL,
                                 day + 21 * 3'600'000LL + 30 * 60'000LL));

    // a dozen prior evenings of R1 running the ac between 19:30 and 21:30
    const double temps[12] = {19.4, 19.8, 20.1, 20.4, 19.6, 20.9, 21.3, 20.2, 19.9, 20.6, 21.0, 20.3};
    for (int d = 0; d < 12; ++d) {
        const Timestamp past = make_timestamp(2011, 7, 1) + static_cast<std::int64_t>(d) * ms_per_day;
        s.history.push_back(event("h-" + std::to_string(d), "ac", "R1", "living",
                                  past + 19 * 3'600'000LL + 30 * 60'000LL,
                                  past + 21 * 3'600'000LL + 30 * 60'000LL, {{"temperature", temps[d]}}));
    }
    return s;
}

Scenario scenario_light_blind(bool night) {
    Scenario s;
    s.rules = default_rules();

    RoomContext living;
    living.location = "living";
    living.volume_m3 = 40.0;
    living.baseline[Property::illumination] = 0.0;
    living.outdoor[Property::illumination] = night ? 0.0 : 40.0;
    s.rooms["living"] = living;

    const Timestamp day = make_timestamp(2011, 7, 20);
    s.requests.push_back(request("sr-light", "light", "R1", "living", day + 8 * 3'600'000LL,
                                 day + 10 * 3'600'000LL, {{"illumination", 10.0}}));
    s.requests.push_back(request("sr-blind", "blind", "R2", "living",
                                 day + 8 * 3'600'000LL + 30 * 60'000LL,
                                 day + 9 * 3'600'000LL + 30 * 60'000LL));
    return s;
}

} // namespace cohabit::fixtures
