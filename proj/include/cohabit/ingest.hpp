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

#ifndef COHABIT_INGEST_HPP
#define COHABIT_INGEST_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cohabit/model.hpp"
#include "cohabit/time.hpp"

namespace cohabit {

/// One whitespace-separated sensor log line: date, time, sensor, status.
struct RawLogLine {
    Timestamp time;
    std::string sensor;
    std::string status; // ON/OFF or a numeric reading
};

struct Reject {
    std::size_t line_no = 0;
    std::string reason;
    std::string content;
};

struct ParseResult {
    std::vector<RawLogLine> lines;
    std::vector<Reject> rejects;
    std::size_t empty_lines = 0;
};

/// Parses sensor log text. Malformed lines land in the rejects report with a
/// reason; empty lines are skipped and counted.
ParseResult parse_casas(std::istream& in);

/// Serializes lines back to the 4-field text format (date and time split).
void write_casas(std::ostream& out, const std::vector<RawLogLine>& lines);

/// Binds an actuator sensor to the service it switches.
struct SensorBinding {
    std::string sensor_pattern; // '*' and '?' wildcards, case-insensitive
    std::string service_id;
    std::string attribute;      // the service's primary quality attribute
    std::string location;
    std::string user;
};

/// Binds a numeric reading sensor to the attribute it reports.
struct ValueBinding {
    std::string sensor_pattern;
    std::string attribute;
    std::string location;
};

struct ReconstructResult {
    std::vector<ServiceEvent> events;
    std::vector<Reject> rejects;
    std::size_t ignored_lines = 0; // sensors outside both maps (e.g. motion)
};

/// Pairs each ON with the next OFF of the same sensor into a ServiceEvent and
/// attaches the service's quality attribute from the latest co-located numeric
/// reading at event start. A dangling ON closes at start + horizon.
ReconstructResult reconstruct_events(const std::vector<RawLogLine>& lines,
                                     const std::vector<SensorBinding>& sensor_map,
                                     const std::vector<ValueBinding>& value_map, double horizon_hours = 4.0);

/// Tags each dataset's events with its resident label and returns the
/// time-sorted union restricted to the span common to all non-empty datasets.
std::vector<ServiceEvent> merge_residents(
    const std::vector<std::pair<std::string, std::vector<ServiceEvent>>>& datasets);

struct AugmentationSpec {
    std::uint64_t seed = 0;
    double window_blind_event_rate = 0.0; // events per day
    double sound_range_lo = 30.0;
    double sound_range_hi = 70.0;
    double outdoor_lux_lo = 10.0;
    double outdoor_lux_hi = 50.0;
    double duration_minutes_lo = 15.0;
    double duration_minutes_hi = 90.0;

    void validate() const;
};

/// Deterministically inserts window/blind open-close events at the given rate,
/// draws uniform sound volumes onto tv events and uniform admitted lux onto
/// the generated blind events. Same seed, same output.
std::vector<ServiceEvent> augment(const std::vector<ServiceEvent>& events, const AugmentationSpec& spec);

/// Canonical event CSV `event_id,service,attribute,value,start,end,location,user`.
/// Events with several qualities repeat the event_id, one row per attribute.
void write_events_csv(std::ostream& out, const std::vector<ServiceEvent>& events);
std::vector<ServiceEvent> read_events_csv(std::istream& in);

void write_rejects_csv(std::ostream& out, const std::vector<Reject>& rejects);

} // namespace cohabit

#endif
