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

#include <sstream>

#include <stdexcept>

#include "doctest.h"

#include "cohabit/signal.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace cohabit;

namespace {

const Timestamp t0 = make_timestamp(2011, 7, 20, 20, 0);

Timestamp min(double minutes) { return t0 + static_cast<std::int64_t>(minutes * 60'000.0); }

} // namespace

TEST_CASE("positive and negative parts") {
    CHECK(positive_part(3.5) == 3.5);
    CHECK(positive_part(-2.0) == 0.0);
    CHECK(positive_part(0.0) == 0.0);
    CHECK(negative_part(-2.0) == -2.0);
    CHECK(negative_part(3.5) == 0.0);
    CHECK(negative_part(0.0) == 0.0);
}

TEST_CASE("signal construction rejects bad input") {
    CHECK_THROWS_AS(Signal(Property::temperature, {}), std::invalid_argument);
    CHECK_THROWS_AS(Signal(Property::temperature, {{t0, 1.0}, {t0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Signal(Property::temperature, {{t0, std::nan("")}}), std::invalid_argument);
}

TEST_CASE("linear interpolation with constant extension") {
    const Signal sig{Property::temperature, {{min(0), 20.0}, {min(10), 30.0}}};
    CHECK(sig.at(min(5)) == doctest::Approx(25.0));
    CHECK(sig.at(min(-5)) == 20.0);
    CHECK(sig.at(min(15)) == 30.0);
}

TEST_CASE("robustness of a constant offset trace is the offset") {
    // 25 degC held for half an hour against a 20 degC setpoint
    const Signal sig = fixtures::constant_signal(Property::temperature, min(0), min(30), 25.0);
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(30)}};
    CHECK(robustness(sig, req) == 5.0);
}

TEST_CASE("robustness of a ramp is its endpoint deviation") {
    const Signal sig{Property::temperature, {{min(0), 20.0}, {min(10), 30.0}}};
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(10)}};
    CHECK(robustness(sig, req) == 10.0);
}

TEST_CASE("robustness vanishes on the setpoint") {
    const Signal sig = fixtures::constant_signal(Property::temperature, min(0), min(30), 20.0);
    CHECK(robustness(sig, {Property::temperature, 20.0, {min(0), min(30)}}) == 0.0);
}

TEST_CASE("robustness contract errors") {
    const Signal sig = fixtures::constant_signal(Property::illumination, min(0), min(30), 10.0);
    CHECK_THROWS_AS(robustness(sig, StlRequirement{Property::temperature, 20.0, {min(0), min(30)}}),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        robustness(Signal{Property::temperature, {{min(0), 20.0}, {min(5), 20.0}}},
                   StlRequirement{Property::temperature, 20.0, {min(10), min(20)}}),
        "signal does not cover window", std::invalid_argument);
}

TEST_CASE("violation fraction from an exact band crossing") {
    // flat at the setpoint, then a slow ramp that leaves the band exactly at
    // the 30 minute mark and a plateau outside it
    const Signal sig{Property::temperature,
                     {{min(0), 20.0}, {min(25), 20.0}, {min(35), 22.0}, {min(60), 22.0}}};
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(60)}, 1.0};
    CHECK(violation_fraction(sig, req) == doctest::Approx(0.5).epsilon(1e-9));

    const double integral = deviation_integral(sig, req);
    // 2.5 unit-minutes on the ramp tail plus 25 on the plateau, halved by eta
    CHECK(integral == doctest::Approx(0.5 * 27.5).epsilon(1e-9));

    const auto runs = violation_intervals(sig, req);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].start().ms == min(30).ms);
    CHECK(runs[0].end() == min(60));
}

TEST_CASE("violation fraction edge cases") {
    const Signal inside = fixtures::constant_signal(Property::temperature, min(0), min(60), 20.5);
    const Signal outside = fixtures::constant_signal(Property::temperature, min(0), min(60), 25.0);
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(60)}, 1.0};
    CHECK(violation_fraction(inside, req) == 0.0);
    CHECK(violation_fraction(outside, req) == 1.0);
    CHECK(deviation_integral(inside, req) == 0.0);
}

TEST_CASE("deviation integral of a rectangle of excess") {
    // deviation pinned at 5 beyond the band for the second half hour
    const Signal sig{Property::temperature,
                     {{min(0), 20.0}, {min(30), 20.0}, {min(30.0 + 0.01 / 60.0), 25.0}, {min(60), 25.0}}};
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(60)}};
    CHECK(violation_fraction(sig, req) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(deviation_integral(sig, req) == doctest::Approx(75.0).epsilon(1e-4));
}

TEST_CASE("deviation integral of a triangular excursion") {
    const Signal sig{Property::temperature,
                     {{min(0), 20.0}, {min(25), 20.0}, {min(30), 30.0}, {min(35), 20.0}, {min(60), 20.0}}};
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(60)}};
    CHECK(violation_fraction(sig, req) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(deviation_integral(sig, req) == doctest::Approx(50.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("one-sided deviation form only scores drops below the setpoint") {
    const Signal above = fixtures::constant_signal(Property::temperature, min(0), min(60), 25.0);
    const Signal below = fixtures::constant_signal(Property::temperature, min(0), min(60), 15.0);
    const StlRequirement req{Property::temperature, 20.0, {min(0), min(60)}};
    CHECK(violation_fraction(above, req, DeviationForm::negative_part) == 0.0);
    CHECK(violation_fraction(below, req, DeviationForm::negative_part) == 1.0);
    CHECK(deviation_integral(below, req, DeviationForm::negative_part) ==
          doctest::Approx(5.0 * 60.0).epsilon(1e-9));
}

TEST_CASE("exact integration agrees with a dense Riemann pass") {
    Rng rng(1234);
    const Signal sig = properties::random_signal(rng, Property::temperature, min(0), 45.0);
    const StlRequirement req{Property::temperature, 19.5, {min(0), min(45)}, 0.8};
    const auto oracle = oracles::riemann(sig, req, DeviationForm::magnitude);
    CHECK(violation_fraction(sig, req) == doctest::Approx(oracle.violation_fraction).epsilon(1e-3));
    CHECK(deviation_integral(sig, req) == doctest::Approx(oracle.deviation_integral).epsilon(1e-3));
}

TEST_CASE("signal csv round trip") {
    const Signal sig{Property::illumination, {{min(0), 10.0}, {min(30), 30.0}}};
    std::stringstream buffer;
    write_signal_csv(buffer, sig);
    const Signal back = read_signal_csv(buffer);
    CHECK(back.property() == Property::illumination);
    REQUIRE(back.samples().size() == 2);
    CHECK(back.samples()[1].value == 30.0);
    CHECK(back.samples()[1].t == min(30));
}
