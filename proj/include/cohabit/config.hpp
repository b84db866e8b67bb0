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

#ifndef COHABIT_CONFIG_HPP
#define COHABIT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cohabit/detection.hpp"
#include "cohabit/env.hpp"
#include "cohabit/evaluation.hpp"
#include "cohabit/ingest.hpp"

namespace cohabit {

/// Everything a reproducible run needs. Serialized as JSON; the documented
/// default profile covers ac, window, blind, light and tv services.
struct RunConfig {
    std::uint64_t seed = 42;
    PhysicsConstants physics;
    std::map<std::string, RoomContext> rooms; // keyed by normalized location
    std::vector<AffinityRule> rules;
    DetectionConfig detection;
    double label_threshold = 0.5;

    std::vector<SensorBinding> sensor_map;
    std::vector<ValueBinding> value_map;
    double ingest_horizon_hours = 4.0;
    AugmentationSpec augmentation;

    ContextBins bins;
    PropertyMap<double> ground_truth_margin{{3.0, 10.0, 10.0, 10.0}};
    int repetitions = 5;
};

RunConfig default_config();

std::string config_to_json(const RunConfig& cfg);

/// Parses a config document. Problems are appended to `errors` (all of them,
/// not just the first); fields that fail to parse keep their defaults.
RunConfig config_from_json(const std::string& text, std::vector<std::string>& errors);

RunConfig load_config_file(const std::string& path, std::vector<std::string>& errors);

/// FNV-1a over the canonical serialization; embedded in every output file.
std::string config_hash(const RunConfig& cfg);

} // namespace cohabit

#endif
