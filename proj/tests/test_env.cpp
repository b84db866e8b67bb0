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

#include <cmath>

#include <stdexcept>

#include "doctest.h"

#include "cohabit/env.hpp"
#include "support/fixtures.hpp"

using namespace cohabit;

namespace {

const Timestamp day = make_timestamp(2011, 7, 20);

Timestamp at(int h, int m = 0) { return day + h * 3'600'000LL + m * 60'000LL; }

RoomContext living_room() {
    RoomContext ctx;
    ctx.location = "living";
    ctx.volume_m3 = 40.0;
    ctx.baseline[Property::temperature] = 25.0;
    ctx.baseline[Property::illumination] = 0.0;
    ctx.baseline[Property::sound] = 30.0;
    ctx.outdoor[Property::temperature] = 30.0;
    ctx.outdoor[Property::illumination] = 40.0;
    return ctx;
}

} // namespace

TEST_CASE("cooling time follows the stated formula") {
    const double hours = cooling_time_hours(40.0, 1.2, 5.0, 1.005, 334.0, 1.0);
    CHECK(hours == (40.0 * 1.2 * 5.0 * 1.005) / (334.0 * 1.0 * 1000.0 / 24.0));
    CHECK(hours == doctest::Approx(0.01733).epsilon(1e-3));

    CHECK(cooling_time_hours(40.0, 1.2, 0.0, 1.005, 334.0, 1.0) == 0.0);
    CHECK(cooling_time_hours(40.0, 1.2, 5.0, 1.005, 334.0, 2.0) == doctest::Approx(hours / 2.0));
    CHECK_THROWS_AS(cooling_time_hours(0.0, 1.2, 5.0, 1.005, 334.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cooling_time_hours(40.0, 1.2, -1.0, 1.005, 334.0, 1.0), std::invalid_argument);
}

TEST_CASE("sound levels combine by energy sum") {
    CHECK(combine_sound_db({60.0, 60.0}) == doctest::Approx(63.0103).epsilon(1e-5));
    CHECK(combine_sound_db({47.5}) == 47.5);
    CHECK(combine_sound_db({60.0, -std::numeric_limits<double>::infinity()}) == doctest::Approx(60.0));
    CHECK_THROWS_AS(combine_sound_db({}), std::invalid_argument);
}

TEST_CASE("progressive rules need a rate") {
    AffinityRule rule{"ac", Property::temperature, ChangeMode::progressive, EffectKind::target_setpoint, 0.0,
                      0.5, RateSpec{}};
    CHECK_THROWS_AS(validate_rule(rule), std::invalid_argument);
    rule.rate.ac_tons = 1.0;
    CHECK_NOTHROW(validate_rule(rule));
}

TEST_CASE("glob patterns match service ids case-insensitively") {
    CHECK(pattern_matches("ac", "AC"));
    CHECK(pattern_matches("LL*", "ll013"));
    CHECK(pattern_matches("T?01", "t101"));
    CHECK_FALSE(pattern_matches("ac", "window"));
}

TEST_CASE("no matching rule yields the constant baseline") {
    const auto rules = default_rules();
    const auto req = fixtures::request("r", "dishwasher", "R1", "living", at(20), at(21));
    const Signal sig =
        predict_signal(Property::temperature, {req}, living_room(), rules, {at(20), at(21)});
    CHECK(sig.at(at(20)) == 25.0);
    CHECK(sig.at(at(20, 30)) == 25.0);
    CHECK(sig.at(at(21)) == 25.0);
}

TEST_CASE("ac ramps the room to its setpoint and holds it") {
    const auto rules = default_rules();
    const auto ac = fixtures::request("r", "ac", "R1", "living", at(20), at(22), {{"temperature", 20.0}});
    const Signal sig = predict_signal(Property::temperature, {ac}, living_room(), rules, {at(20), at(21)});
    CHECK(sig.at(at(20)) == 25.0);
    // formula rate for 1 ton in 40 m^3 is about 4.8 degC per minute
    const double mid = sig.at(at(20) + 30'000);
    CHECK(mid < 25.0);
    CHECK(mid > 20.0);
    CHECK(sig.at(at(20, 5)) == doctest::Approx(20.0));
    CHECK(sig.at(at(21)) == doctest::Approx(20.0));
}

TEST_CASE("light sets instantly and the blind admits outdoor light") {
    const auto rules = default_rules();
    const auto light = fixtures::request("r1", "light", "R1", "living", at(8), at(10), {{"illumination", 10.0}});
    const auto blind = fixtures::request("r2", "blind", "R2", "living", at(8, 30), at(10));
    const Signal sig =
        predict_signal(Property::illumination, {light, blind}, living_room(), rules, {at(8), at(9, 30)});
    CHECK(sig.at(at(8)) == doctest::Approx(10.0));
    CHECK(sig.at(at(8, 15)) == doctest::Approx(10.0));
    // kappa 0.5 of 40 outdoor lux steps in at 08:30
    CHECK(sig.at(at(8, 45)) == doctest::Approx(30.0));
    CHECK(sig.at(at(9, 30)) == doctest::Approx(30.0));
}

TEST_CASE("a blind quality overrides the outdoor coupling") {
    const auto rules = default_rules();
    const auto light = fixtures::request("r1", "light", "R1", "living", at(8), at(10), {{"illumination", 10.0}});
    const auto blind =
        fixtures::request("r2", "blind", "R2", "living", at(8, 30), at(10), {{"illumination", 25.0}});
    const Signal sig =
        predict_signal(Property::illumination, {light, blind}, living_room(), rules, {at(8), at(9, 30)});
    CHECK(sig.at(at(8, 45)) == doctest::Approx(35.0));
}

TEST_CASE("illumination contributions are additive") {
    const auto rules = default_rules();
    const auto light = fixtures::request("r1", "light", "R1", "living", at(8), at(10), {{"illumination", 10.0}});
    const auto blind = fixtures::request("r2", "blind", "R2", "living", at(8, 30), at(10));
    const RoomContext ctx = living_room();
    const Signal with = predict_signal(Property::illumination, {light, blind}, ctx, rules, {at(8), at(9, 30)});
    const Signal without = predict_signal(Property::illumination, {light}, ctx, rules, {at(8), at(9, 30)});
    CHECK(with.at(at(8, 15)) - without.at(at(8, 15)) == doctest::Approx(0.0));
    for (int minute : {31, 45, 60, 89}) {
        CHECK(with.at(at(8, minute)) - without.at(at(8, minute)) == doctest::Approx(20.0));
    }
}

TEST_CASE("window at indoor temperature leaves the trace unchanged") {
    const auto rules = default_rules();
    RoomContext ctx = living_room();
    ctx.baseline[Property::temperature] = 30.0; // same as outdoors
    const auto window = fixtures::request("r", "window", "R2", "living", at(20), at(22));
    const Signal sig = predict_signal(Property::temperature, {window}, ctx, rules, {at(20), at(21)});
    for (int minute : {0, 15, 30, 60}) CHECK(sig.at(at(20, minute)) == doctest::Approx(30.0));
}

TEST_CASE("window bump recovers to the ac setpoint") {
    const auto rules = default_rules();
    const auto ac = fixtures::request("r1", "ac", "R1", "living", at(20), at(22), {{"temperature", 20.0}});
    const auto window = fixtures::request("r2", "window", "R2", "living", at(20, 30), at(21, 30));
    const Signal sig =
        predict_signal(Property::temperature, {ac, window}, living_room(), rules, {at(20, 30), at(21, 30)});
    double peak = 0.0;
    for (const auto& s : sig.samples()) peak = std::max(peak, s.value);
    // kappa 0.5 between the 20 degC setpoint and 30 degC outdoors
    CHECK(peak == doctest::Approx(25.0));
    CHECK(sig.at(at(20, 30)) == doctest::Approx(20.0));
    CHECK(sig.at(at(21, 30)) == doctest::Approx(20.0));
}

TEST_CASE("sound sources stack on the ambient floor") {
    const auto rules = default_rules();
    const auto tv = fixtures::request("r1", "tv", "R1", "living", at(20), at(22), {{"sound", 60.0}});
    const Signal sig = predict_signal(Property::sound, {tv}, living_room(), rules, {at(20), at(21)});
    const double expected = 10.0 * std::log10(std::pow(10.0, 3.0) + std::pow(10.0, 6.0));
    CHECK(sig.at(at(20, 30)) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("influenced properties come from the rule table") {
    const auto rules = default_rules();
    const auto ac = fixtures::request("r1", "ac", "R1", "living", at(20), at(22));
    const auto window = fixtures::request("r2", "window", "R2", "living", at(20), at(22));
    const auto tv = fixtures::request("r3", "tv", "R1", "living", at(20), at(22));
    CHECK(influenced_properties(ac, rules) == std::vector<Property>{Property::temperature});
    CHECK(influenced_properties(window, rules) == std::vector<Property>{Property::temperature});
    CHECK(influenced_properties(tv, rules) == std::vector<Property>{Property::sound});
}
