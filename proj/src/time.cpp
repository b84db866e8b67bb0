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

#include "cohabit/time.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace cohabit {

namespace {

std::int64_t days_from_civil(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    return sys_days{ymd}.time_since_epoch().count();
}

bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace

Timestamp make_timestamp(int year, int month, int day, int hour, int minute, int second, int millisecond) {
    const std::int64_t days = days_from_civil(year, month, day);
    std::int64_t ms = days * ms_per_day;
    ms += static_cast<std::int64_t>(hour) * 3'600'000;
    ms += static_cast<std::int64_t>(minute) * 60'000;
    ms += static_cast<std::int64_t>(second) * 1'000;
    ms += millisecond;
    return Timestamp{ms};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    // YYYY-MM-DD[ T]HH:MM:SS[.fff]
    int y, mo, d, h, mi, s;
    if (text.size() < 19) return std::nullopt;
    if (!parse_int(text, 0, 4, y) || text[4] != '-' || !parse_int(text, 5, 2, mo) || text[7] != '-' ||
        !parse_int(text, 8, 2, d))
        return std::nullopt;
    if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
    if (!parse_int(text, 11, 2, h) || text[13] != ':' || !parse_int(text, 14, 2, mi) || text[16] != ':' ||
        !parse_int(text, 17, 2, s))
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) return std::nullopt;
    int frac = 0;
    if (text.size() > 19) {
        if (text[19] != '.') return std::nullopt;
        std::string_view digits = text.substr(20);
        if (digits.empty() || digits.size() > 9) return std::nullopt;
        // keep millisecond precision, truncate the rest
        int scale = 100;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            const char c = digits[i];
            if (c < '0' || c > '9') return std::nullopt;
            if (i < 3) {
                frac += (c - '0') * scale;
                scale /= 10;
            }
        }
    }
    return make_timestamp(y, mo, d, h, mi, s, frac);
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    std::int64_t days = t.ms / ms_per_day;
    std::int64_t rem = t.ms % ms_per_day;
    if (rem < 0) {
        rem += ms_per_day;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    const int h = static_cast<int>(rem / 3'600'000);
    const int mi = static_cast<int>((rem / 60'000) % 60);
    const int s = static_cast<int>((rem / 1'000) % 60);
    const int f = static_cast<int>(rem % 1'000);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, mi, s, f);
    return buf;
}

std::int64_t ms_of_day(Timestamp t) {
    std::int64_t rem = t.ms % ms_per_day;
    if (rem < 0) rem += ms_per_day;
    return rem;
}

TimeInterval::TimeInterval(Timestamp start, Timestamp end) : start_(start), end_(end) {
    if (end < start) throw std::invalid_argument("TimeInterval: end precedes start");
}

OverlapSegment::OverlapSegment(Timestamp start, Timestamp end) : start_(start), end_(end) {
    if (end <= start) throw std::invalid_argument("OverlapSegment: requires positive length");
}

std::optional<OverlapSegment> overlap_segment(const TimeInterval& a, const TimeInterval& b) {
    const Timestamp start = std::max(a.start(), b.start());
    const Timestamp end = std::min(a.end(), b.end());
    if (end <= start) return std::nullopt;
    return OverlapSegment{start, end};
}

} // namespace cohabit
