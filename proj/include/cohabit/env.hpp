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

#ifndef COHABIT_ENV_HPP
#define COHABIT_ENV_HPP

#include <optional>
#include <string>
#include <vector>

#include "cohabit/model.hpp"
#include "cohabit/signal.hpp"
#include "cohabit/time.hpp"

namespace cohabit {

struct PhysicsConstants {
    double air_density = 1.2;    // kg/m^3
    double specific_heat = 1.005; // kJ/kg.K
    double latent_heat = 334.0;   // kJ/kg
};

enum class ChangeMode { progressive, instantaneous };
enum class EffectKind { target_setpoint, additive_offset, external_coupling };

/// Ramp speed of a progressive effect: either a fixed slope, or derived from
/// the room volume and AC tonnage via the cooling-time formula.
struct RateSpec {
    std::optional<double> units_per_minute;
    std::optional<double> ac_tons;

    bool specified() const { return units_per_minute.has_value() || ac_tons.has_value(); }
};

/// Links services (by id pattern) to the environment property they influence
/// and how: drive toward the request's setpoint, add a fixed offset, or couple
/// the room to the outdoor value with strength kappa.
///
/// A request quality for the rule's property overrides the configured offset
/// or outdoor coupling amount (e.g. a blind event that records the lux it
/// admits). Patterns support '*' and '?', matched case-insensitively.
struct AffinityRule {
    std::string service_pattern;
    Property property = Property::temperature;
    ChangeMode mode = ChangeMode::instantaneous;
    EffectKind effect = EffectKind::target_setpoint;
    double offset = 0.0;   // additive_offset fallback value
    double coupling = 0.5; // external_coupling kappa in [0, 1]
    RateSpec rate;         // required when mode == progressive
};

/// Throws std::invalid_argument when a progressive rule lacks a rate or the
/// coupling factor leaves [0, 1].
void validate_rule(const AffinityRule& rule);

bool pattern_matches(std::string_view pattern, std::string_view service_id);

/// Room state at prediction time: size, current ambient values, outdoor values.
struct RoomContext {
    std::string location;
    double volume_m3 = 40.0;
    PropertyMap<double> baseline{{22.0, 0.0, 30.0, 50.0}};
    PropertyMap<std::optional<double>> outdoor;
    PhysicsConstants physics;
};

/// Hours to move the room temperature by delta_t degrees with the given AC
/// tonnage. Implemented exactly as stated, units included.
double cooling_time_hours(double volume_m3, double air_density, double delta_t, double specific_heat,
                          double latent_heat, double ac_tons);

/// Energy sum of decibel levels: 10*log10(sum 10^(L/10)).
/// -infinity acts as a silence sentinel.
double combine_sound_db(const std::vector<double>& levels);

/// Ramp slope (property units per second) for a progressive rule in a room.
double ramp_rate_per_second(const AffinityRule& rule, const RoomContext& ctx);

/// Predicted piecewise-linear ambient trace of `property` over `window` when
/// the given requests run concurrently in the room.
///
/// Temperature: setpoint services ramp the room toward their setpoint;
/// external couplings (windows) push a one-shot excursion toward the
/// kappa-shifted outdoor equilibrium, after which the controlling setpoint
/// service re-converges the trace. Illumination/humidity: setpoints apply
/// instantly and couplings/offsets add on top. Sound: every contribution is a
/// source combined with the baseline by energy sum.
Signal predict_signal(Property property, const std::vector<ServiceRequest>& requests, const RoomContext& ctx,
                      const std::vector<AffinityRule>& rules, const TimeInterval& window);

/// Environment properties the service can influence under these rules.
std::vector<Property> influenced_properties(const ServiceRequest& request, const std::vector<AffinityRule>& rules);

/// Canonical rule set covering ac, window, blind, light and tv services.
std::vector<AffinityRule> default_rules();

} // namespace cohabit

#endif
