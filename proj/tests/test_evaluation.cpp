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

#include "cohabit/evaluation.hpp"
#include "cohabit/synthetic.hpp"
#include "support/fixtures.hpp"

using namespace cohabit;

namespace {

ScenarioKey key_of(int value_bin) {
    ScenarioKey k;
    k.property = Property::temperature;
    k.value_bin = value_bin;
    k.hour_bin = 6;
    k.location = "living";
    return k;
}

} // namespace

TEST_CASE("ground truth likelihood is conflicts over occurrences") {
    std::vector<ConflictObservation> observations;
    for (int i = 0; i < 4; ++i)
        observations.push_back({"R1", "R2", key_of(10), i == 0}); // one conflict in four
    observations.push_back({"R1", "R2", key_of(11), false});
    const auto table = build_ground_truth(observations);
    CHECK(table.likelihood("R1", "R2", key_of(10)) == doctest::Approx(0.25));
    CHECK(table.likelihood("R2", "R1", key_of(10)) == doctest::Approx(0.25)); // order-insensitive
    CHECK(table.likelihood("R1", "R2", key_of(11)) == doctest::Approx(0.0));
    CHECK_FALSE(table.likelihood("R1", "R2", key_of(99)).has_value());
    CHECK(table.cells() == 2);
}

TEST_CASE("a corpus where every co-occurrence conflicts scores likelihood one") {
    std::vector<ConflictObservation> observations(5, {"R1", "R2", key_of(10), true});
    CHECK(build_ground_truth(observations).likelihood("R1", "R2", key_of(10)) == doctest::Approx(1.0));
}

TEST_CASE("scenario keys bin value, hour and location") {
    ContextBins bins;
    const Timestamp at = make_timestamp(2011, 6, 15, 20, 15);
    const auto key = make_scenario_key(Property::temperature, 31.0, at, " Living", bins);
    CHECK(key.value_bin == 15); // 31 / 2 degC bins
    CHECK(key.hour_bin == 6);   // 20:15 in 3-hour bins
    CHECK(key.location == "living");
}

TEST_CASE("classification metrics on a hand confusion matrix") {
    std::vector<bool> predicted, truth;
    auto add = [&](int n, bool p, bool t) {
        for (int i = 0; i < n; ++i) {
            predicted.push_back(p);
            truth.push_back(t);
        }
    };
    add(8, true, true);
    add(2, true, false);
    add(2, false, true);
    add(8, false, false);
    const auto m = classification_metrics(predicted, truth);
    CHECK(m.accuracy() == doctest::Approx(0.8));
    CHECK(m.precision_conflict() == doctest::Approx(0.8));
    CHECK(m.recall_conflict() == doctest::Approx(0.8));
    CHECK(m.f1_conflict() == doctest::Approx(0.8));
    CHECK(m.precision_no_conflict() == doctest::Approx(0.8));
}

TEST_CASE("perfect and inverted predictions") {
    const std::vector<bool> truth{true, false, true, false};
    const auto perfect = classification_metrics(truth, truth);
    CHECK(perfect.accuracy() == 1.0);
    CHECK(perfect.f1_conflict() == 1.0);
    CHECK(perfect.f1_no_conflict() == 1.0);

    std::vector<bool> inverted;
    for (bool t : truth) inverted.push_back(!t);
    CHECK(classification_metrics(inverted, truth).accuracy() == 0.0);
}

TEST_CASE("classification metrics validate input") {
    CHECK_THROWS_AS(classification_metrics({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(classification_metrics({true}, {true, false}), std::invalid_argument);
}

TEST_CASE("mean absolute error") {
    CHECK(mean_absolute_error({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    CHECK(mean_absolute_error({0.0, 1.0}, {1.0, 0.0}) == 1.0);
    CHECK(mean_absolute_error({0.6}, {0.8}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(mean_absolute_error({0.5}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mean_absolute_error({1.5}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(mean_absolute_error({}, {}), std::invalid_argument);
}

TEST_CASE("the synthetic corpus is reproducible and balanced") {
    SyntheticSpec spec;
    spec.seed = 7;
    const auto a = make_synthetic_corpus(spec);
    const auto b = make_synthetic_corpus(spec);
    REQUIRE(a.episodes.size() == b.episodes.size());
    CHECK(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.episodes.size(); ++i) {
        CHECK(a.episodes[i].truth_conflict == b.episodes[i].truth_conflict);
        CHECK(a.episodes[i].context_value == b.episodes[i].context_value);
    }
    std::size_t conflicts = 0;
    for (const auto& ep : a.episodes) conflicts += ep.truth_conflict ? 1 : 0;
    CHECK(conflicts > 0);
    CHECK(conflicts < a.episodes.size());
}

TEST_CASE("evaluation on the synthetic corpus separates the two detectors") {
    SyntheticSpec spec;
    spec.seed = 42;
    spec.days = 15;
    const auto corpus = make_synthetic_corpus(spec);
    DetectionConfig cfg;

    const auto with_pref = evaluate_corpus(corpus, cfg, {});
    EvaluationOptions baseline_opt;
    baseline_opt.no_preference = true;
    const auto baseline = evaluate_corpus(corpus, cfg, baseline_opt);

    CHECK(with_pref.metrics.accuracy() > baseline.metrics.accuracy());
    CHECK(with_pref.metrics.f1_conflict() > baseline.metrics.f1_conflict());
    CHECK(baseline.metrics.recall_conflict() >= with_pref.metrics.recall_conflict());
    CHECK(with_pref.mae_overall <= baseline.mae_overall);
}

TEST_CASE("a single grid point matches the plain evaluation") {
    SyntheticSpec spec;
    spec.seed = 42;
    spec.days = 8;
    const auto corpus = make_synthetic_corpus(spec);
    DetectionConfig cfg;
    const auto rows = threshold_sweep(corpus, {0.0}, {1.0}, cfg, {});
    REQUIRE(rows.size() == 1);
    const auto direct = evaluate_corpus(corpus, cfg, {});
    CHECK(rows[0].metrics.accuracy() == direct.metrics.accuracy());
    CHECK(rows[0].predicted_positives == direct.predicted_positives);
}

TEST_CASE("sweep csv has the documented header and one row per grid point") {
    SyntheticSpec spec;
    spec.seed = 42;
    spec.days = 6;
    const auto corpus = make_synthetic_corpus(spec);
    const auto rows = threshold_sweep(corpus, {0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, DetectionConfig{}, {});
    REQUIRE(rows.size() == 9);
    std::ostringstream out;
    write_sweep_csv(out, rows);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "tau_t,tau_p,accuracy,precision_c,recall_c,f1_c,precision_nc,recall_nc,f1_nc");
    std::size_t data_rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 9);
}

TEST_CASE("threshold_sweep rejects an empty grid") {
    SyntheticSpec spec;
    spec.days = 2;
    const auto corpus = make_synthetic_corpus(spec);
    CHECK_THROWS_AS(threshold_sweep(corpus, {}, {0.5}, DetectionConfig{}, {}), std::invalid_argument);
}

TEST_CASE("corpus_from_events builds labeled episodes from co-occurrences") {
    const Timestamp day = make_timestamp(2011, 6, 20);
    std::vector<ServiceEvent> events{
        fixtures::event("e1", "ac", "R1", "living", day + 20 * 3'600'000LL, day + 22 * 3'600'000LL,
                        {{"temperature", 20.0}}),
        fixtures::event("e2", "window", "R2", "living", day + 20 * 3'600'000LL + 1'800'000,
                        day + 21 * 3'600'000LL + 1'800'000),
    };
    RoomContext ctx;
    ctx.location = "living";
    ctx.outdoor[Property::temperature] = 30.0;
    const std::map<std::string, RoomContext> rooms{{"living", ctx}};
    PropertyMap<double> margin{{3.0, 10.0, 10.0, 10.0}};
    const auto corpus = corpus_from_events(events, rooms, default_rules(), ContextBins{}, margin);
    REQUIRE(corpus.episodes.size() == 1);
    CHECK(corpus.episodes[0].property == Property::temperature);
    CHECK(corpus.episodes[0].truth_conflict); // |20 - 30| exceeds the 3 degC margin
    CHECK(corpus.episodes[0].context_value == 30.0);

    const auto table = build_ground_truth(events, rooms, default_rules(), ContextBins{}, margin);
    CHECK(table.cells() == 1);
}

TEST_CASE("mean and sample standard deviation") {
    const auto ms = mean_std({1.0, 2.0, 3.0});
    CHECK(ms.mean == doctest::Approx(2.0));
    CHECK(ms.std_dev == doctest::Approx(1.0));
    CHECK(mean_std({5.0}).std_dev == 0.0);
    CHECK(mean_std({}).mean == 0.0);
}
