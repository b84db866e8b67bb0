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

#include "cohabit/synthetic.hpp"

#include <cmath>

#include "cohabit/rng.hpp"

namespace cohabit {

namespace {

constexpr const char* location = "living";

Timestamp day_time(Timestamp day0, int day, double hour) {
    return day0 + static_cast<std::int64_t>(day) * ms_per_day +
           static_cast<std::int64_t>(std::llround(hour * 3'600'000.0));
}

ServiceEvent history_event(std::size_t id, const char* service, const char* user, Timestamp start,
                           double duration_hours, const char* attribute, double value) {
    ServiceEvent e;
    e.event_id = "hist-" + std::to_string(id);
    e.service_id = service;
    e.user = user;
    e.location = location;
    e.interval = TimeInterval{start, start + static_cast<std::int64_t>(std::llround(duration_hours * 3'600'000.0))};
    e.qualities.push_back({attribute, value});
    return e;
}

ServiceRequest make_request(const std::string& id, const char* service, const char* user, Timestamp start,
                            double duration_minutes) {
    ServiceRequest r;
    r.request_id = id;
    r.service_id = service;
    r.user = user;
    r.location = location;
    r.interval =
        TimeInterval{start, start + static_cast<std::int64_t>(std::llround(duration_minutes * 60'000.0))};
    return r;
}

RoomContext make_ctx(double baseline_temp, std::optional<double> outdoor_temp,
                     std::optional<double> outdoor_lux) {
    RoomContext ctx;
    ctx.location = location;
    ctx.volume_m3 = 150.0;
    ctx.baseline[Property::temperature] = baseline_temp;
    ctx.baseline[Property::illumination] = 0.0;
    ctx.baseline[Property::sound] = 30.0;
    ctx.baseline[Property::humidity] = 50.0;
    ctx.outdoor[Property::temperature] = outdoor_temp;
    ctx.outdoor[Property::illumination] = outdoor_lux;
    return ctx;
}

} // namespace

std::vector<AffinityRule> synthetic_rules() {
    std::vector<AffinityRule> rules;
    rules.push_back({"ac", Property::temperature, ChangeMode::progressive, EffectKind::target_setpoint, 0.0, 0.5,
                     RateSpec{0.06, std::nullopt}});
    rules.push_back({"window", Property::temperature, ChangeMode::progressive, EffectKind::external_coupling,
                     0.0, 0.5, RateSpec{0.25, std::nullopt}});
    rules.push_back({"blind", Property::illumination, ChangeMode::instantaneous, EffectKind::external_coupling,
                     0.0, 0.5, RateSpec{}});
    rules.push_back({"light", Property::illumination, ChangeMode::instantaneous, EffectKind::target_setpoint,
                     0.0, 0.5, RateSpec{}});
    rules.push_back({"tv", Property::sound, ChangeMode::instantaneous, EffectKind::additive_offset, 0.0, 0.5,
                     RateSpec{}});
    rules.push_back({"speaker", Property::sound, ChangeMode::instantaneous, EffectKind::additive_offset, 0.0,
                     0.5, RateSpec{}});
    return rules;
}

EvalCorpus make_synthetic_corpus(const SyntheticSpec& spec) {
    Rng rng(spec.seed);
    const Timestamp day0 = make_timestamp(2011, 6, 15);

    EvalCorpus corpus;
    corpus.rules = synthetic_rules();

    // --- thirty days of per-resident routines planting the preference bands
    std::size_t hist_id = 0;
    for (int day = 0; day < spec.days; ++day) {
        const double j1 = rng.uniform(-1.0 / 6.0, 1.0 / 6.0); // +-10 min
        const double j2 = rng.uniform(-1.0 / 6.0, 1.0 / 6.0);
        const double j3 = rng.uniform(-1.0 / 6.0, 1.0 / 6.0);

        corpus.history.push_back(history_event(++hist_id, "ac", "R1", day_time(day0, day, 19.0 + j1), 2.5,
                                               "temperature", rng.uniform(19.2, 20.8)));
        corpus.history.push_back(history_event(++hist_id, "light", "R1", day_time(day0, day, 19.5 + j2), 3.5,
                                               "illumination", rng.uniform(5.5, 14.5)));
        corpus.history.push_back(history_event(++hist_id, "tv", "R1", day_time(day0, day, 20.0 + j3), 2.0,
                                               "sound", rng.uniform(35.5, 44.5)));

        corpus.history.push_back(history_event(++hist_id, "ac", "R2", day_time(day0, day, 13.0 + j1), 2.0,
                                               "temperature", rng.uniform(23.2, 26.8)));
        corpus.history.push_back(history_event(++hist_id, "light", "R2", day_time(day0, day, 6.0 + j2), 1.5,
                                               "illumination", rng.uniform(20.5, 39.5)));
        corpus.history.push_back(history_event(++hist_id, "tv", "R2", day_time(day0, day, 21.0 + j3), 1.5,
                                               "sound", rng.uniform(55.5, 69.5)));
    }

    // --- evaluation episodes, drawn from fixed families
    enum Family {
        temp_strong,
        temp_weak,
        illum_strong,
        illum_benign,
        sound_strong,
        sound_benign,
        zero_night_blind,
        zero_neutral_window
    };
    const std::pair<Family, double> families[] = {
        {temp_strong, 0.15},      {temp_weak, 0.08},    {illum_strong, 0.09},      {illum_benign, 0.07},
        {sound_strong, 0.06},     {sound_benign, 0.05}, {zero_night_blind, 0.28},  {zero_neutral_window, 0.22},
    };

    std::size_t ep_id = 0;
    for (int day = 0; day < spec.days; ++day) {
        for (int k = 0; k < spec.episodes_per_day; ++k) {
            const double roll = rng.uniform();
            Family family = zero_neutral_window;
            double acc = 0.0;
            for (const auto& [f, w] : families) {
                acc += w;
                if (roll < acc) {
                    family = f;
                    break;
                }
            }

            const double start_h = 20.0 + rng.uniform(0.0, 0.25); // within the same hour bin
            const Timestamp t0 = day_time(day0, day, start_h);
            const std::string id = "ep-" + std::to_string(++ep_id);

            EvalEpisode ep;
            switch (family) {
                case temp_strong: {
                    const double sp = rng.uniform(19.5, 20.5);
                    const double outdoor = rng.uniform(30.0, 36.0);
                    ep.a = make_request(id + "-a", "ac", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"temperature", sp});
                    ep.b = make_request(id + "-b", "window", "R2", t0 + 5 * 60'000, 60.0);
                    ep.ctx = make_ctx(sp, outdoor, std::nullopt);
                    ep.property = Property::temperature;
                    ep.context_value = outdoor;
                    ep.truth_conflict = true;
                    break;
                }
                case temp_weak: {
                    const double sp = rng.uniform(19.5, 20.5);
                    const double outdoor = rng.uniform(30.0, 36.0);
                    ep.a = make_request(id + "-a", "ac", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"temperature", sp});
                    ep.b = make_request(id + "-b", "window", "R2", t0 + 5 * 60'000, 8.0);
                    ep.ctx = make_ctx(sp, outdoor, std::nullopt);
                    ep.property = Property::temperature;
                    ep.context_value = outdoor;
                    ep.truth_conflict = false;
                    break;
                }
                case illum_strong: {
                    const double sp = rng.uniform(8.0, 12.0);
                    const double admitted = rng.uniform(24.0, 36.0);
                    ep.a = make_request(id + "-a", "light", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"illumination", sp});
                    ep.b = make_request(id + "-b", "blind", "R2", t0 + 10 * 60'000, 60.0);
                    ep.b.qualities.push_back({"illumination", admitted});
                    ep.ctx = make_ctx(22.0, std::nullopt, admitted / 0.5);
                    ep.property = Property::illumination;
                    ep.context_value = admitted / 0.5;
                    ep.truth_conflict = true;
                    break;
                }
                case illum_benign: {
                    const double sp = rng.uniform(8.0, 12.0);
                    const double admitted = rng.uniform(1.0, 4.0);
                    ep.a = make_request(id + "-a", "light", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"illumination", sp});
                    ep.b = make_request(id + "-b", "blind", "R2", t0 + 10 * 60'000, 60.0);
                    ep.b.qualities.push_back({"illumination", admitted});
                    ep.ctx = make_ctx(22.0, std::nullopt, admitted / 0.5);
                    ep.property = Property::illumination;
                    ep.context_value = admitted / 0.5;
                    ep.truth_conflict = false;
                    break;
                }
                case sound_strong: {
                    const double own = rng.uniform(38.0, 42.0);
                    const double speaker = rng.uniform(60.0, 70.0);
                    ep.a = make_request(id + "-a", "tv", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"sound", own});
                    ep.b = make_request(id + "-b", "speaker", "R2", t0 + 10 * 60'000, 50.0);
                    ep.b.qualities.push_back({"sound", speaker});
                    ep.ctx = make_ctx(22.0, std::nullopt, std::nullopt);
                    ep.property = Property::sound;
                    ep.context_value = speaker;
                    ep.truth_conflict = true;
                    break;
                }
                case sound_benign: {
                    const double own = rng.uniform(38.0, 42.0);
                    const double speaker = own + rng.uniform(-3.0, 0.0); // no louder than the tv
                    ep.a = make_request(id + "-a", "tv", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"sound", own});
                    ep.b = make_request(id + "-b", "speaker", "R2", t0 + 10 * 60'000, 50.0);
                    ep.b.qualities.push_back({"sound", speaker});
                    ep.ctx = make_ctx(22.0, std::nullopt, std::nullopt);
                    ep.property = Property::sound;
                    ep.context_value = speaker;
                    ep.truth_conflict = false;
                    break;
                }
                case zero_night_blind: {
                    const double sp = rng.uniform(8.0, 12.0);
                    ep.a = make_request(id + "-a", "light", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"illumination", sp});
                    ep.b = make_request(id + "-b", "blind", "R2", t0 + 10 * 60'000, 60.0);
                    ep.b.qualities.push_back({"illumination", 0.0});
                    ep.ctx = make_ctx(22.0, std::nullopt, 0.0);
                    ep.property = Property::illumination;
                    ep.context_value = 0.0;
                    ep.truth_conflict = false;
                    break;
                }
                case zero_neutral_window: {
                    const double sp = rng.uniform(19.5, 20.5);
                    ep.a = make_request(id + "-a", "ac", "R1", t0, 60.0);
                    ep.a.qualities.push_back({"temperature", sp});
                    ep.b = make_request(id + "-b", "window", "R2", t0 + 5 * 60'000, 60.0);
                    ep.ctx = make_ctx(sp, sp, std::nullopt); // outdoors at indoor temperature
                    ep.property = Property::temperature;
                    ep.context_value = sp;
                    ep.truth_conflict = false;
                    break;
                }
            }
            corpus.episodes.push_back(std::move(ep));
        }
    }
    return corpus;
}

} // namespace cohabit
