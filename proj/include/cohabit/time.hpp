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

#ifndef COHABIT_TIME_HPP
#define COHABIT_TIME_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cohabit {

/// Absolute wall-clock instant, milliseconds since the Unix epoch.
/// All duration arithmetic is done in seconds as doubles.
struct Timestamp {
    std::int64_t ms = 0;

    constexpr double seconds() const { return static_cast<double>(ms) / 1000.0; }
    constexpr auto operator<=>(const Timestamp&) const = default;
};

constexpr std::int64_t ms_per_day = 86'400'000;

constexpr Timestamp operator+(Timestamp t, std::int64_t delta_ms) { return Timestamp{t.ms + delta_ms}; }
constexpr Timestamp operator-(Timestamp t, std::int64_t delta_ms) { return Timestamp{t.ms - delta_ms}; }
/// Difference in seconds.
constexpr double operator-(Timestamp a, Timestamp b) { return static_cast<double>(a.ms - b.ms) / 1000.0; }

/// Builds a timestamp from a civil date and time of day (naive local time).
Timestamp make_timestamp(int year, int month, int day,
                         int hour = 0, int minute = 0, int second = 0, int millisecond = 0);

/// Parses "YYYY-MM-DD HH:MM:SS[.fff]" or the ISO-8601 'T' variant.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as ISO-8601 with millisecond precision: "2011-06-15T20:30:00.000".
std::string format_timestamp(Timestamp t);

/// Milliseconds elapsed since local midnight.
std::int64_t ms_of_day(Timestamp t);

/// Closed interval [start, end]; degenerate (start == end) is allowed.
class TimeInterval {
public:
    TimeInterval(Timestamp start, Timestamp end);

    Timestamp start() const { return start_; }
    Timestamp end() const { return end_; }
    double length_seconds() const { return end_ - start_; }
    double length_minutes() const { return (end_ - start_) / 60.0; }

    bool contains(Timestamp t) const { return start_ <= t && t <= end_; }
    bool operator==(const TimeInterval&) const = default;

private:
    Timestamp start_;
    Timestamp end_;
};

/// Intersection of two request/event intervals with positive length.
/// A zero-length intersection is "no overlap" and is encoded by absence.
class OverlapSegment {
public:
    OverlapSegment(Timestamp start, Timestamp end);

    Timestamp start() const { return start_; }
    Timestamp end() const { return end_; }
    double length_seconds() const { return end_ - start_; }
    double length_minutes() const { return (end_ - start_) / 60.0; }

    TimeInterval interval() const { return TimeInterval{start_, end_}; }
    bool operator==(const OverlapSegment&) const = default;

private:
    Timestamp start_;
    Timestamp end_;
};

/// [max of starts, min of ends] when that range has positive length.
std::optional<OverlapSegment> overlap_segment(const TimeInterval& a, const TimeInterval& b);

} // namespace cohabit

#endif
