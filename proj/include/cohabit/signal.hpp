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

#ifndef COHABIT_SIGNAL_HPP
#define COHABIT_SIGNAL_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include "cohabit/model.hpp"
#include "cohabit/time.hpp"

namespace cohabit {

/// How the deviation of a signal from its setpoint is measured.
/// `magnitude` scores excursions on both sides of the setpoint; `negative_part`
/// scores only drops below it (kept for fidelity experiments).
enum class DeviationForm { magnitude, negative_part };

/// Piecewise-linear trace of one environment property. Linear interpolation
/// between breakpoints, constant extension outside the sampled span.
/// Discontinuities are encoded as breakpoints one millisecond apart.
class Signal {
public:
    struct Sample {
        Timestamp t;
        double value;
    };

    Signal(Property property, std::vector<Sample> samples);

    Property property() const { return property_; }
    const std::vector<Sample>& samples() const { return samples_; }
    Timestamp span_start() const { return samples_.front().t; }
    Timestamp span_end() const { return samples_.back().t; }

    double at(Timestamp t) const;
    double at_seconds(double t_s) const;

    /// [min, max] of the trace restricted to [from, to] (clamped to the span).
    std::pair<double, double> range_over(const TimeInterval& window) const;

private:
    Property property_;
    std::vector<Sample> samples_;
};

/// "Hold property at setpoint throughout the window, within tolerance."
struct StlRequirement {
    Property property = Property::temperature;
    double setpoint = 0.0;                               // lambda
    TimeInterval window{Timestamp{0}, Timestamp{0}};
    double tolerance = 0.0;                               // half-width of the acceptable band

    StlRequirement(Property p, double sp, TimeInterval w, double tol = 0.0);
};

double positive_part(double v);
double negative_part(double v);

/// Worst-case deviation |x(t) - setpoint| over the window. Exact for
/// piecewise-linear signals (the extremum sits on a breakpoint or window edge).
double robustness(const Signal& sig, const StlRequirement& req);

/// Fraction of the window during which the deviation exceeds the tolerance,
/// computed exactly from the band-crossing breakpoints.
double violation_fraction(const Signal& sig, const StlRequirement& req,
                          DeviationForm form = DeviationForm::magnitude);

/// violation_fraction times the accumulated area of deviations beyond the
/// tolerance band, in property-unit x minutes.
double deviation_integral(const Signal& sig, const StlRequirement& req,
                          DeviationForm form = DeviationForm::magnitude);

/// Maximal sub-intervals of the window where the requirement is violated.
std::vector<OverlapSegment> violation_intervals(const Signal& sig, const StlRequirement& req,
                                                DeviationForm form = DeviationForm::magnitude);

/// CSV with header `timestamp,property,value`, ISO-8601 timestamps.
void write_signal_csv(std::ostream& out, const Signal& sig);
Signal read_signal_csv(std::istream& in);

} // namespace cohabit

#endif
