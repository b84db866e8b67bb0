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

#include "cohabit/signal.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cohabit {

Signal::Signal(Property property, std::vector<Sample> samples)
    : property_(property), samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("Signal: needs at least one sample");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i].value)) throw std::invalid_argument("Signal: non-finite sample value");
        if (i > 0 && samples_[i].t <= samples_[i - 1].t)
            throw std::invalid_argument("Signal: timestamps must be strictly increasing");
    }
}

double Signal::at(Timestamp t) const { return at_seconds(t.seconds()); }

double Signal::at_seconds(double t_s) const {
    const auto& s = samples_;
    if (t_s <= s.front().t.seconds()) return s.front().value;
    if (t_s >= s.back().t.seconds()) return s.back().value;
    // first sample with time > t_s
    auto it = std::upper_bound(s.begin(), s.end(), t_s,
                               [](double v, const Sample& m) { return v < m.t.seconds(); });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double t0 = lo.t.seconds();
    const double t1 = hi.t.seconds();
    const double w = (t_s - t0) / (t1 - t0);
    return lo.value + w * (hi.value - lo.value);
}

std::pair<double, double> Signal::range_over(const TimeInterval& window) const {
    const double a = window.start().seconds();
    const double b = window.end().seconds();
    double lo = at_seconds(a);
    double hi = lo;
    const double vb = at_seconds(b);
    lo = std::min(lo, vb);
    hi = std::max(hi, vb);
    for (const auto& s : samples_) {
        const double t = s.t.seconds();
        if (t <= a || t >= b) continue;
        lo = std::min(lo, s.value);
        hi = std::max(hi, s.value);
    }
    return {lo, hi};
}

StlRequirement::StlRequirement(Property p, double sp, TimeInterval w, double tol)
    : property(p), setpoint(sp), window(w), tolerance(tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("StlRequirement: tolerance must be >= 0");
    if (!std::isfinite(sp)) throw std::invalid_argument("StlRequirement: non-finite setpoint");
}

double positive_part(double v) { return std::max(v, 0.0); }
double negative_part(double v) { return std::min(v, 0.0); }

namespace {

void check_compatible(const Signal& sig, const StlRequirement& req) {
    if (sig.property() != req.property)
        throw std::invalid_argument("requirement property does not match signal property");
    if (req.window.end() < sig.span_start() || req.window.start() > sig.span_end())
        throw std::invalid_argument("signal does not cover window");
}

double deviation_of(double x, double setpoint, DeviationForm form) {
    return form == DeviationForm::magnitude ? std::abs(x - setpoint) : -negative_part(x - setpoint);
}

// Breakpoints of the window refined so that the deviation is linear between
// consecutive entries: signal samples plus crossings of setpoint and band edges.
std::vector<double> refined_grid(const Signal& sig, const StlRequirement& req) {
    const double a = req.window.start().seconds();
    const double b = req.window.end().seconds();
    std::vector<double> grid{a, b};
    for (const auto& s : sig.samples()) {
        const double t = s.t.seconds();
        if (t > a && t < b) grid.push_back(t);
    }
    std::sort(grid.begin(), grid.end());

    const double levels[3] = {req.setpoint - req.tolerance, req.setpoint, req.setpoint + req.tolerance};
    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i];
        const double t1 = grid[i + 1];
        const double v0 = sig.at_seconds(t0);
        const double v1 = sig.at_seconds(t1);
        if (v0 == v1) continue;
        for (double level : levels) {
            const double w = (level - v0) / (v1 - v0);
            if (w > 0.0 && w < 1.0) crossings.push_back(t0 + w * (t1 - t0));
        }
    }
    grid.insert(grid.end(), crossings.begin(), crossings.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

struct ViolationProfile {
    double window_seconds = 0.0;
    double violating_seconds = 0.0;
    double area_unit_minutes = 0.0;              // integral of (deviation - tolerance)+ in unit*min
    std::vector<std::pair<double, double>> runs; // violating sub-intervals, seconds
};

ViolationProfile violation_profile(const Signal& sig, const StlRequirement& req, DeviationForm form) {
    check_compatible(sig, req);
    ViolationProfile out;
    out.window_seconds = req.window.length_seconds();
    if (out.window_seconds <= 0.0) return out;

    const std::vector<double> grid = refined_grid(sig, req);
    bool in_run = false;
    double run_start = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i];
        const double t1 = grid[i + 1];
        const double mid = 0.5 * (t0 + t1);
        const bool violating = deviation_of(sig.at_seconds(mid), req.setpoint, form) > req.tolerance;
        if (violating) {
            const double d0 = deviation_of(sig.at_seconds(t0), req.setpoint, form) - req.tolerance;
            const double d1 = deviation_of(sig.at_seconds(t1), req.setpoint, form) - req.tolerance;
            // deviation is linear on the refined piece, so the trapezoid is exact
            out.area_unit_minutes += 0.5 * (std::max(d0, 0.0) + std::max(d1, 0.0)) * (t1 - t0) / 60.0;
            out.violating_seconds += t1 - t0;
            if (!in_run) {
                in_run = true;
                run_start = t0;
            }
        } else if (in_run) {
            out.runs.emplace_back(run_start, t0);
            in_run = false;
        }
    }
    if (in_run) out.runs.emplace_back(run_start, grid.back());
    return out;
}

} // namespace

double robustness(const Signal& sig, const StlRequirement& req) {
    check_compatible(sig, req);
    const double a = req.window.start().seconds();
    const double b = req.window.end().seconds();
    double worst = std::abs(sig.at_seconds(a) - req.setpoint);
    worst = std::max(worst, std::abs(sig.at_seconds(b) - req.setpoint));
    for (const auto& s : sig.samples()) {
        const double t = s.t.seconds();
        if (t <= a || t >= b) continue;
        worst = std::max(worst, std::abs(s.value - req.setpoint));
    }
    return worst;
}

double violation_fraction(const Signal& sig, const StlRequirement& req, DeviationForm form) {
    const ViolationProfile p = violation_profile(sig, req, form);
    if (p.window_seconds <= 0.0) return 0.0;
    return p.violating_seconds / p.window_seconds;
}

double deviation_integral(const Signal& sig, const StlRequirement& req, DeviationForm form) {
    const ViolationProfile p = violation_profile(sig, req, form);
    if (p.window_seconds <= 0.0) return 0.0;
    return (p.violating_seconds / p.window_seconds) * p.area_unit_minutes;
}

std::vector<OverlapSegment> violation_intervals(const Signal& sig, const StlRequirement& req, DeviationForm form) {
    const ViolationProfile p = violation_profile(sig, req, form);
    std::vector<OverlapSegment> out;
    for (const auto& [s, e] : p.runs) {
        const auto start_ms = static_cast<std::int64_t>(std::llround(s * 1000.0));
        const auto end_ms = static_cast<std::int64_t>(std::llround(e * 1000.0));
        if (end_ms > start_ms) out.emplace_back(Timestamp{start_ms}, Timestamp{end_ms});
    }
    return out;
}

void write_signal_csv(std::ostream& out, const Signal& sig) {
    out << "timestamp,property,value\n";
    for (const auto& s : sig.samples()) {
        out << format_timestamp(s.t) << ',' << property_name(sig.property()) << ',' << s.value << '\n';
    }
}

Signal read_signal_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("signal csv: empty stream");
    std::vector<Signal::Sample> samples;
    std::optional<Property> property;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string ts, prop, value;
        if (!std::getline(row, ts, ',') || !std::getline(row, prop, ',') || !std::getline(row, value))
            throw std::runtime_error("signal csv: malformed row '" + line + "'");
        const auto t = parse_timestamp(ts);
        if (!t) throw std::runtime_error("signal csv: bad timestamp '" + ts + "'");
        const auto p = property_from_name(prop);
        if (!p) throw std::runtime_error("signal csv: unknown property '" + prop + "'");
        if (property && *property != *p) throw std::runtime_error("signal csv: mixed properties");
        property = *p;
        samples.push_back({*t, std::stod(value)});
    }
    if (!property) throw std::runtime_error("signal csv: no rows");
    return Signal{*property, std::move(samples)};
}

} // namespace cohabit
