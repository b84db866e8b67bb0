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

#ifndef COHABIT_TESTS_FIXTURES_HPP
#define COHABIT_TESTS_FIXTURES_HPP

#include <map>
#include <string>
#include <vector>

#include "cohabit/detection.hpp"
#include "cohabit/env.hpp"
#include "cohabit/model.hpp"
#include "cohabit/signal.hpp"

namespace cohabit::fixtures {

struct Scenario {
    std::vector<ServiceRequest> requests;
    std::vector<ServiceEvent> history;
    std::map<std::string, RoomContext> rooms;
    std::vector<AffinityRule> rules;
    DetectionConfig cfg;
};

/// Hot evening: R1 cools the living room to 20 degC, R2 opens the window
/// while it is 30 degC outside. R1's band is mined from a dozen prior
/// air-conditioning sessions.
Scenario scenario_ac_window();

/// Bright morning: R1 dims the light to 10 lux, R2 opens the blind. At night
/// no light comes in and there is nothing to detect.
Scenario scenario_light_blind(bool night);

ServiceRequest request(std::string id, std::string service, std::string user, std::string location,
                       Timestamp start, Timestamp end,
                       std::vector<QualityAttribute> qualities = {});

ServiceEvent event(std::string id, std::string service, std::string user, std::string location,
                   Timestamp start, Timestamp end, std::vector<QualityAttribute> qualities = {});

/// Constant-value signal on [start, end].
Signal constant_signal(Property p, Timestamp start, Timestamp end, double value);

} // namespace cohabit::fixtures

#endif
