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

#include "cohabit/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cohabit {

using nlohmann::json;

namespace {

json property_map_to_json(const PropertyMap<double>& map) {
    json out = json::object();
    for (Property p : all_properties) out[std::string(property_name(p))] = map[p];
    return out;
}

void property_map_from_json(const json& j, std::string_view field, PropertyMap<double>& map,
                            std::vector<std::string>& errors) {
    if (!j.is_object()) {
        errors.push_back(std::string(field) + ": expected an object keyed by property name");
        return;
    }
    for (const auto& [key, value] : j.items()) {
        const auto p = property_from_name(key);
        if (!p) {
            errors.push_back(std::string(field) + ": unknown property '" + key + "'");
            continue;
        }
        if (!value.is_number()) {
            errors.push_back(std::string(field) + "." + key + ": expected a number");
            continue;
        }
        map[*p] = value.get<double>();
    }
}

json rule_to_json(const AffinityRule& r) {
    json out{{"service", r.service_pattern},
             {"property", std::string(property_name(r.property))},
             {"mode", r.mode == ChangeMode::progressive ? "progressive" : "instantaneous"}};
    switch (r.effect) {
        case EffectKind::target_setpoint: out["effect"] = "target_setpoint"; break;
        case EffectKind::additive_offset:
            out["effect"] = "additive_offset";
            out["offset"] = r.offset;
            break;
        case EffectKind::external_coupling:
            out["effect"] = "external_coupling";
            out["coupling"] = r.coupling;
            break;
    }
    if (r.rate.units_per_minute) out["rate_per_minute"] = *r.rate.units_per_minute;
    if (r.rate.ac_tons) out["rate_ac_tons"] = *r.rate.ac_tons;
    return out;
}

AffinityRule rule_from_json(const json& j, std::size_t index, std::vector<std::string>& errors) {
    AffinityRule r;
    const std::string where = "affinity[" + std::to_string(index) + "]";
    r.service_pattern = j.value("service", "");
    if (r.service_pattern.empty()) errors.push_back(where + ": missing service pattern");
    const std::string prop = j.value("property", "");
    if (const auto p = property_from_name(prop)) {
        r.property = *p;
    } else {
        errors.push_back(where + ": unknown property '" + prop + "'");
    }
    const std::string mode = j.value("mode", "instantaneous");
    if (mode == "progressive") r.mode = ChangeMode::progressive;
    else if (mode == "instantaneous") r.mode = ChangeMode::instantaneous;
    else errors.push_back(where + ": unknown mode '" + mode + "'");
    const std::string effect = j.value("effect", "");
    if (effect == "target_setpoint") r.effect = EffectKind::target_setpoint;
    else if (effect == "additive_offset") r.effect = EffectKind::additive_offset;
    else if (effect == "external_coupling") r.effect = EffectKind::external_coupling;
    else errors.push_back(where + ": unknown effect '" + effect + "'");
    r.offset = j.value("offset", 0.0);
    r.coupling = j.value("coupling", 0.5);
    if (j.contains("rate_per_minute")) r.rate.units_per_minute = j["rate_per_minute"].get<double>();
    if (j.contains("rate_ac_tons")) r.rate.ac_tons = j["rate_ac_tons"].get<double>();
    try {
        validate_rule(r);
    } catch (const std::exception& e) {
        errors.push_back(where + ": " + e.what());
    }
    return r;
}

json room_to_json(const RoomContext& ctx) {
    json out{{"location", ctx.location}, {"volume_m3", ctx.volume_m3}};
    out["baseline"] = property_map_to_json(ctx.baseline);
    json outdoor = json::object();
    for (Property p : all_properties) {
        if (ctx.outdoor[p]) outdoor[std::string(property_name(p))] = *ctx.outdoor[p];
    }
    out["outdoor"] = outdoor;
    return out;
}

RoomContext room_from_json(const json& j, std::size_t index, const PhysicsConstants& physics,
                           std::vector<std::string>& errors) {
    RoomContext ctx;
    ctx.physics = physics;
    const std::string where = "rooms[" + std::to_string(index) + "]";
    ctx.location = normalize_location(j.value("location", ""));
    if (ctx.location.empty()) errors.push_back(where + ": missing location");
    ctx.volume_m3 = j.value("volume_m3", 40.0);
    if (!(ctx.volume_m3 > 0.0)) errors.push_back(where + ": volume must be > 0");
    if (j.contains("baseline")) property_map_from_json(j["baseline"], where + ".baseline", ctx.baseline, errors);
    if (j.contains("outdoor")) {
        if (!j["outdoor"].is_object()) {
            errors.push_back(where + ".outdoor: expected an object");
        } else {
            for (const auto& [key, value] : j["outdoor"].items()) {
                const auto p = property_from_name(key);
                if (!p) {
                    errors.push_back(where + ".outdoor: unknown property '" + key + "'");
                    continue;
                }
                ctx.outdoor[*p] = value.get<double>();
            }
        }
    }
    return ctx;
}

json range_to_json(double lo, double hi) { return json::array({lo, hi}); }

void range_from_json(const json& j, std::string_view field, double& lo, double& hi,
                     std::vector<std::string>& errors) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        errors.push_back(std::string(field) + ": expected [lo, hi]");
        return;
    }
    lo = j[0].get<double>();
    hi = j[1].get<double>();
}

} // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.rules = default_rules();

    RoomContext living;
    living.location = "living";
    living.volume_m3 = 40.0;
    living.baseline[Property::temperature] = 25.0;
    living.baseline[Property::illumination] = 0.0;
    living.baseline[Property::sound] = 30.0;
    living.baseline[Property::humidity] = 50.0;
    living.outdoor[Property::temperature] = 30.0;
    living.outdoor[Property::illumination] = 40.0;
    living.physics = cfg.physics;
    cfg.rooms[living.location] = living;

    cfg.sensor_map = {
        {"T1*", "ac", "temperature", "living", "r"},
        {"LL*", "light", "illumination", "living", "r"},
        {"D0*", "window", "", "living", "r"},
        {"TV*", "tv", "sound", "living", "r"},
    };
    cfg.value_map = {
        {"T0*", "temperature", "living"},
        {"LS*", "illumination", "living"},
    };
    cfg.augmentation.seed = cfg.seed;
    cfg.augmentation.window_blind_event_rate = 2.0;
    return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["physics"] = {{"air_density", cfg.physics.air_density},
                    {"specific_heat", cfg.physics.specific_heat},
                    {"latent_heat", cfg.physics.latent_heat}};
    j["rooms"] = json::array();
    for (const auto& [loc, room] : cfg.rooms) j["rooms"].push_back(room_to_json(room));
    j["affinity"] = json::array();
    for (const auto& rule : cfg.rules) j["affinity"].push_back(rule_to_json(rule));
    j["detection"] = {{"impact_cap", property_map_to_json(cfg.detection.impact_cap)},
                      {"default_tolerance", property_map_to_json(cfg.detection.default_tolerance)},
                      {"temporal_threshold", cfg.detection.temporal_threshold},
                      {"preferential_threshold", cfg.detection.preferential_threshold},
                      {"deviation_form", cfg.detection.deviation_form == DeviationForm::magnitude
                                             ? "magnitude"
                                             : "negative_part"},
                      {"label_threshold", cfg.label_threshold}};
    j["preference"] = {{"eps", property_map_to_json(cfg.detection.preference.eps)},
                       {"min_pts", cfg.detection.preference.min_pts},
                       {"coverage", cfg.detection.preference.coverage_p},
                       {"match", cfg.detection.preference.match == OverlapMatch::daily ? "daily" : "absolute"},
                       {"strict_endpoints", cfg.detection.preference.strict_endpoint_test}};
    json sensors = json::array();
    for (const auto& s : cfg.sensor_map) {
        sensors.push_back({{"pattern", s.sensor_pattern},
                           {"service", s.service_id},
                           {"attribute", s.attribute},
                           {"location", s.location},
                           {"user", s.user}});
    }
    json values = json::array();
    for (const auto& v : cfg.value_map) {
        values.push_back({{"pattern", v.sensor_pattern}, {"attribute", v.attribute}, {"location", v.location}});
    }
    j["ingest"] = {{"horizon_hours", cfg.ingest_horizon_hours}, {"sensors", sensors}, {"values", values}};
    j["augmentation"] = {{"rate_per_day", cfg.augmentation.window_blind_event_rate},
                         {"sound_range", range_to_json(cfg.augmentation.sound_range_lo, cfg.augmentation.sound_range_hi)},
                         {"outdoor_lux_range", range_to_json(cfg.augmentation.outdoor_lux_lo, cfg.augmentation.outdoor_lux_hi)},
                         {"duration_minutes", range_to_json(cfg.augmentation.duration_minutes_lo, cfg.augmentation.duration_minutes_hi)}};
    j["evaluation"] = {{"bins", property_map_to_json(cfg.bins.value_bin)},
                       {"hour_bin_hours", cfg.bins.hour_bin_hours},
                       {"margin", property_map_to_json(cfg.ground_truth_margin)},
                       {"repetitions", cfg.repetitions}};
    return j.dump(2);
}

RunConfig config_from_json(const std::string& text, std::vector<std::string>& errors) {
    RunConfig cfg = default_config();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        errors.push_back(std::string("config: ") + e.what());
        return cfg;
    }
    if (!j.is_object()) {
        errors.push_back("config: top level must be an object");
        return cfg;
    }

    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("physics")) {
        const auto& p = j["physics"];
        cfg.physics.air_density = p.value("air_density", cfg.physics.air_density);
        cfg.physics.specific_heat = p.value("specific_heat", cfg.physics.specific_heat);
        cfg.physics.latent_heat = p.value("latent_heat", cfg.physics.latent_heat);
        if (!(cfg.physics.air_density > 0.0)) errors.push_back("physics.air_density must be > 0");
        if (!(cfg.physics.specific_heat > 0.0)) errors.push_back("physics.specific_heat must be > 0");
        if (!(cfg.physics.latent_heat > 0.0)) errors.push_back("physics.latent_heat must be > 0");
    }
    if (j.contains("rooms")) {
        cfg.rooms.clear();
        std::size_t i = 0;
        for (const auto& room : j["rooms"]) {
            RoomContext ctx = room_from_json(room, i++, cfg.physics, errors);
            cfg.rooms[ctx.location] = ctx;
        }
    }
    if (j.contains("affinity")) {
        cfg.rules.clear();
        std::size_t i = 0;
        for (const auto& rule : j["affinity"]) cfg.rules.push_back(rule_from_json(rule, i++, errors));
    }
    if (j.contains("detection")) {
        const auto& d = j["detection"];
        if (d.contains("impact_cap"))
            property_map_from_json(d["impact_cap"], "detection.impact_cap", cfg.detection.impact_cap, errors);
        if (d.contains("default_tolerance"))
            property_map_from_json(d["default_tolerance"], "detection.default_tolerance",
                                   cfg.detection.default_tolerance, errors);
        cfg.detection.temporal_threshold = d.value("temporal_threshold", cfg.detection.temporal_threshold);
        cfg.detection.preferential_threshold =
            d.value("preferential_threshold", cfg.detection.preferential_threshold);
        const std::string form = d.value("deviation_form", "magnitude");
        if (form == "magnitude") cfg.detection.deviation_form = DeviationForm::magnitude;
        else if (form == "negative_part") cfg.detection.deviation_form = DeviationForm::negative_part;
        else errors.push_back("detection.deviation_form: unknown value '" + form + "'");
        cfg.label_threshold = d.value("label_threshold", cfg.label_threshold);
        if (cfg.label_threshold < 0.0 || cfg.label_threshold > 1.0)
            errors.push_back("detection.label_threshold outside [0,1]");
    }
    if (j.contains("preference")) {
        const auto& p = j["preference"];
        if (p.contains("eps"))
            property_map_from_json(p["eps"], "preference.eps", cfg.detection.preference.eps, errors);
        cfg.detection.preference.min_pts = p.value("min_pts", cfg.detection.preference.min_pts);
        cfg.detection.preference.coverage_p = p.value("coverage", cfg.detection.preference.coverage_p);
        const std::string match = p.value("match", "daily");
        if (match == "daily") cfg.detection.preference.match = OverlapMatch::daily;
        else if (match == "absolute") cfg.detection.preference.match = OverlapMatch::absolute;
        else errors.push_back("preference.match: unknown value '" + match + "'");
        cfg.detection.preference.strict_endpoint_test =
            p.value("strict_endpoints", cfg.detection.preference.strict_endpoint_test);
    }
    if (j.contains("ingest")) {
        const auto& g = j["ingest"];
        cfg.ingest_horizon_hours = g.value("horizon_hours", cfg.ingest_horizon_hours);
        if (!(cfg.ingest_horizon_hours > 0.0)) errors.push_back("ingest.horizon_hours must be > 0");
        if (g.contains("sensors")) {
            cfg.sensor_map.clear();
            for (const auto& s : g["sensors"]) {
                cfg.sensor_map.push_back({s.value("pattern", ""), s.value("service", ""),
                                          s.value("attribute", ""), s.value("location", ""), s.value("user", "")});
                if (cfg.sensor_map.back().sensor_pattern.empty())
                    errors.push_back("ingest.sensors: entry with empty pattern");
            }
        }
        if (g.contains("values")) {
            cfg.value_map.clear();
            for (const auto& v : g["values"]) {
                cfg.value_map.push_back({v.value("pattern", ""), v.value("attribute", ""), v.value("location", "")});
                if (cfg.value_map.back().sensor_pattern.empty())
                    errors.push_back("ingest.values: entry with empty pattern");
            }
        }
    }
    if (j.contains("augmentation")) {
        const auto& a = j["augmentation"];
        cfg.augmentation.window_blind_event_rate = a.value("rate_per_day", cfg.augmentation.window_blind_event_rate);
        if (a.contains("sound_range"))
            range_from_json(a["sound_range"], "augmentation.sound_range", cfg.augmentation.sound_range_lo,
                            cfg.augmentation.sound_range_hi, errors);
        if (a.contains("outdoor_lux_range"))
            range_from_json(a["outdoor_lux_range"], "augmentation.outdoor_lux_range",
                            cfg.augmentation.outdoor_lux_lo, cfg.augmentation.outdoor_lux_hi, errors);
        if (a.contains("duration_minutes"))
            range_from_json(a["duration_minutes"], "augmentation.duration_minutes",
                            cfg.augmentation.duration_minutes_lo, cfg.augmentation.duration_minutes_hi, errors);
        cfg.augmentation.seed = cfg.seed;
        try {
            cfg.augmentation.validate();
        } catch (const std::exception& e) {
            errors.push_back(std::string("augmentation: ") + e.what());
        }
    }
    if (j.contains("evaluation")) {
        const auto& e = j["evaluation"];
        if (e.contains("bins")) property_map_from_json(e["bins"], "evaluation.bins", cfg.bins.value_bin, errors);
        cfg.bins.hour_bin_hours = e.value("hour_bin_hours", cfg.bins.hour_bin_hours);
        if (!(cfg.bins.hour_bin_hours > 0.0)) errors.push_back("evaluation.hour_bin_hours must be > 0");
        if (e.contains("margin"))
            property_map_from_json(e["margin"], "evaluation.margin", cfg.ground_truth_margin, errors);
        cfg.repetitions = e.value("repetitions", cfg.repetitions);
        if (cfg.repetitions < 1) errors.push_back("evaluation.repetitions must be >= 1");
    }

    try {
        cfg.detection.validate();
    } catch (const std::exception& e) {
        errors.push_back(std::string("detection: ") + e.what());
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path, std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) {
        errors.push_back("config: cannot read '" + path + "'");
        return default_config();
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str(), errors);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string canonical = config_to_json(cfg);
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace cohabit
