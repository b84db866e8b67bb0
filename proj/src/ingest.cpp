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

#include "cohabit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cohabit/env.hpp"
#include "cohabit/rng.hpp"

namespace cohabit {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

ParseResult parse_casas(std::istream& in) {
    ParseResult out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            ++out.empty_lines;
            continue;
        }
        if (tokens.size() < 4) {
            out.rejects.push_back({line_no, "missing field", line});
            continue;
        }
        const auto t = parse_timestamp(tokens[0] + " " + tokens[1]);
        if (!t) {
            out.rejects.push_back({line_no, "unparseable date/time", line});
            continue;
        }
        // trailing annotation columns (activity labels) are tolerated
        out.lines.push_back({*t, tokens[2], tokens[3]});
    }
    return out;
}

void write_casas(std::ostream& out, const std::vector<RawLogLine>& lines) {
    for (const auto& l : lines) {
        std::string ts = format_timestamp(l.time);
        ts[10] = ' ';
        out << ts << ' ' << l.sensor << ' ' << l.status << '\n';
    }
}

namespace {

const SensorBinding* match_sensor(const std::vector<SensorBinding>& map, std::string_view sensor) {
    for (const auto& b : map) {
        if (pattern_matches(b.sensor_pattern, sensor)) return &b;
    }
    return nullptr;
}

const ValueBinding* match_value(const std::vector<ValueBinding>& map, std::string_view sensor) {
    for (const auto& b : map) {
        if (pattern_matches(b.sensor_pattern, sensor)) return &b;
    }
    return nullptr;
}

} // namespace

ReconstructResult reconstruct_events(const std::vector<RawLogLine>& lines,
                                     const std::vector<SensorBinding>& sensor_map,
                                     const std::vector<ValueBinding>& value_map, double horizon_hours) {
    if (!(horizon_hours > 0.0)) throw std::invalid_argument("reconstruct_events: horizon must be > 0");
    std::vector<RawLogLine> ordered = lines;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const RawLogLine& a, const RawLogLine& b) { return a.time < b.time; });

    ReconstructResult out;
    struct Reading {
        Timestamp time;
        double value;
    };
    std::map<std::pair<std::string, std::string>, std::vector<Reading>> readings; // (attribute, location)
    struct OpenState {
        Timestamp since;
        const SensorBinding* binding;
    };
    std::map<std::string, OpenState> open; // by sensor

    auto latest_reading = [&](const std::string& attribute, const std::string& location,
                              Timestamp at) -> std::optional<double> {
        const auto it = readings.find({attribute, normalize_location(location)});
        if (it == readings.end()) return std::nullopt;
        std::optional<double> found;
        for (const auto& r : it->second) {
            if (r.time <= at) found = r.value;
            else break;
        }
        return found;
    };

    std::size_t next_id = 0;
    auto close_event = [&](const std::string& sensor, const OpenState& state, Timestamp end) {
        ServiceEvent event;
        event.event_id = "se-" + std::to_string(++next_id);
        event.service_id = state.binding->service_id;
        event.interval = TimeInterval{state.since, end};
        event.location = state.binding->location;
        event.user = state.binding->user;
        if (!state.binding->attribute.empty()) {
            if (const auto value = latest_reading(state.binding->attribute, state.binding->location, state.since))
                event.qualities.push_back({state.binding->attribute, *value});
        }
        (void)sensor;
        out.events.push_back(std::move(event));
    };

    std::size_t line_no = 0;
    for (const auto& line : ordered) {
        ++line_no;
        const bool is_on = iequals(line.status, "ON");
        const bool is_off = iequals(line.status, "OFF");
        if (is_on || is_off) {
            const SensorBinding* binding = match_sensor(sensor_map, line.sensor);
            if (!binding) {
                ++out.ignored_lines;
                continue;
            }
            auto it = open.find(line.sensor);
            if (is_on) {
                if (it != open.end()) {
                    out.rejects.push_back({line_no, "duplicate ON for sensor " + line.sensor, line.sensor});
                } else {
                    open.emplace(line.sensor, OpenState{line.time, binding});
                }
            } else {
                if (it == open.end()) {
                    out.rejects.push_back({line_no, "OFF with no prior ON for sensor " + line.sensor, line.sensor});
                } else {
                    close_event(line.sensor, it->second, line.time);
                    open.erase(it);
                }
            }
            continue;
        }
        const auto numeric = parse_double(line.status);
        if (numeric) {
            const ValueBinding* binding = match_value(value_map, line.sensor);
            if (!binding) {
                ++out.ignored_lines;
                continue;
            }
            readings[{binding->attribute, normalize_location(binding->location)}].push_back(
                {line.time, *numeric});
            continue;
        }
        if (match_sensor(sensor_map, line.sensor)) {
            out.rejects.push_back({line_no, "unrecognized status '" + line.status + "'", line.sensor});
        } else {
            ++out.ignored_lines;
        }
    }

    // dangling ONs close at the horizon
    const auto horizon_ms = static_cast<std::int64_t>(std::llround(horizon_hours * 3'600'000.0));
    for (const auto& [sensor, state] : open) close_event(sensor, state, state.since + horizon_ms);

    std::stable_sort(out.events.begin(), out.events.end(), [](const ServiceEvent& a, const ServiceEvent& b) {
        return a.interval.start() < b.interval.start();
    });
    return out;
}

std::vector<ServiceEvent> merge_residents(
    const std::vector<std::pair<std::string, std::vector<ServiceEvent>>>& datasets) {
    std::set<std::string> labels;
    for (const auto& [label, events] : datasets) {
        if (!labels.insert(label).second)
            throw std::invalid_argument("merge_residents: duplicate label '" + label + "'");
    }

    bool have_span = false;
    Timestamp common_start{0}, common_end{0};
    for (const auto& [label, events] : datasets) {
        if (events.empty()) continue; // an empty log does not constrain the span
        Timestamp lo = events.front().interval.start();
        Timestamp hi = events.front().interval.end();
        for (const auto& e : events) {
            lo = std::min(lo, e.interval.start());
            hi = std::max(hi, e.interval.end());
        }
        if (!have_span) {
            common_start = lo;
            common_end = hi;
            have_span = true;
        } else {
            common_start = std::max(common_start, lo);
            common_end = std::min(common_end, hi);
        }
    }

    std::vector<ServiceEvent> merged;
    for (const auto& [label, events] : datasets) {
        for (const auto& e : events) {
            if (e.interval.start() > common_end || e.interval.end() < common_start) continue;
            ServiceEvent tagged = e;
            tagged.user = label;
            tagged.event_id = label + ":" + e.event_id;
            merged.push_back(std::move(tagged));
        }
    }
    std::stable_sort(merged.begin(), merged.end(), [](const ServiceEvent& a, const ServiceEvent& b) {
        if (a.interval.start() != b.interval.start()) return a.interval.start() < b.interval.start();
        return a.event_id < b.event_id;
    });
    return merged;
}

void AugmentationSpec::validate() const {
    if (window_blind_event_rate < 0.0) throw std::invalid_argument("augment: rate must be >= 0");
    if (sound_range_hi < sound_range_lo) throw std::invalid_argument("augment: malformed sound range");
    if (outdoor_lux_hi < outdoor_lux_lo) throw std::invalid_argument("augment: malformed lux range");
    if (duration_minutes_hi < duration_minutes_lo || duration_minutes_lo <= 0.0)
        throw std::invalid_argument("augment: malformed duration range");
}

std::vector<ServiceEvent> augment(const std::vector<ServiceEvent>& events, const AugmentationSpec& spec) {
    spec.validate();
    std::vector<ServiceEvent> out = events;
    if (events.empty()) return out;

    Rng rng(spec.seed);

    Timestamp lo = events.front().interval.start();
    Timestamp hi = events.front().interval.end();
    std::set<std::string> locations, users;
    for (const auto& e : events) {
        lo = std::min(lo, e.interval.start());
        hi = std::max(hi, e.interval.end());
        locations.insert(normalize_location(e.location));
        users.insert(e.user);
    }
    const std::vector<std::string> location_list(locations.begin(), locations.end());
    const std::vector<std::string> user_list(users.begin(), users.end());

    const double span_days = (hi - lo) / 86400.0;
    const auto count = static_cast<std::size_t>(std::llround(spec.window_blind_event_rate * span_days));

    for (std::size_t i = 0; i < count; ++i) {
        ServiceEvent e;
        e.event_id = "aug-" + std::to_string(i + 1);
        e.service_id = rng.bernoulli(0.5) ? "window" : "blind";
        const double duration_s = rng.uniform(spec.duration_minutes_lo, spec.duration_minutes_hi) * 60.0;
        const double latest_start = std::max(0.0, (hi - lo) - duration_s);
        const Timestamp start = lo + static_cast<std::int64_t>(std::llround(rng.uniform(0.0, latest_start) * 1000.0));
        e.interval = TimeInterval{start, start + static_cast<std::int64_t>(std::llround(duration_s * 1000.0))};
        e.location = location_list[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(location_list.size()) - 1))];
        e.user = user_list[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(user_list.size()) - 1))];
        if (e.service_id == "blind")
            e.qualities.push_back({"illumination", rng.uniform(spec.outdoor_lux_lo, spec.outdoor_lux_hi)});
        out.push_back(std::move(e));
    }

    for (auto& e : out) {
        std::string id_lower = e.service_id;
        std::transform(id_lower.begin(), id_lower.end(), id_lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (id_lower.find("tv") != std::string::npos && !e.quality_value("sound"))
            e.qualities.push_back({"sound", rng.uniform(spec.sound_range_lo, spec.sound_range_hi)});
    }
    return out;
}

void write_events_csv(std::ostream& out, const std::vector<ServiceEvent>& events) {
    out << "event_id,service,attribute,value,start,end,location,user\n";
    for (const auto& e : events) {
        const auto row_tail = [&](std::ostream& o) {
            o << ',' << format_timestamp(e.interval.start()) << ',' << format_timestamp(e.interval.end()) << ','
              << e.location << ',' << e.user << '\n';
        };
        if (e.qualities.empty()) {
            out << e.event_id << ',' << e.service_id << ",,";
            row_tail(out);
        } else {
            for (const auto& q : e.qualities) {
                out << e.event_id << ',' << e.service_id << ',' << q.attribute_name << ','
                    << format_value(q.value);
                row_tail(out);
            }
        }
    }
}

std::vector<ServiceEvent> read_events_csv(std::istream& in) {
    std::string line;
    std::vector<ServiceEvent> events;
    std::map<std::string, std::size_t> index;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true; // header row
            continue;
        }
        std::stringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() == 7) fields.push_back(""); // trailing empty user
        if (fields.size() != 8) throw std::runtime_error("events csv: malformed row '" + line + "'");
        const auto start = parse_timestamp(fields[4]);
        const auto end = parse_timestamp(fields[5]);
        if (!start || !end) throw std::runtime_error("events csv: bad timestamp in '" + line + "'");

        const auto it = index.find(fields[0]);
        if (it == index.end()) {
            ServiceEvent e;
            e.event_id = fields[0];
            e.service_id = fields[1];
            e.interval = TimeInterval{*start, *end};
            e.location = fields[6];
            e.user = fields[7];
            validate_event(e);
            if (!fields[2].empty()) {
                const auto v = parse_double(fields[3]);
                if (!v) throw std::runtime_error("events csv: bad value in '" + line + "'");
                e.qualities.push_back({fields[2], *v});
            }
            index.emplace(fields[0], events.size());
            events.push_back(std::move(e));
        } else if (!fields[2].empty()) {
            const auto v = parse_double(fields[3]);
            if (!v) throw std::runtime_error("events csv: bad value in '" + line + "'");
            events[it->second].qualities.push_back({fields[2], *v});
        }
    }
    return events;
}

void write_rejects_csv(std::ostream& out, const std::vector<Reject>& rejects) {
    out << "line_no,reason,content\n";
    for (const auto& r : rejects) {
        std::string reason = r.reason;
        std::string content = r.content;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(content.begin(), content.end(), ',', ';');
        out << r.line_no << ',' << reason << ',' << content << '\n';
    }
}

} // namespace cohabit
