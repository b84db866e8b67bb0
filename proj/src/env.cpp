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

#include "cohabit/env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace cohabit {

namespace {

constexpr double step_s = 0.001;    // discontinuities are 1 ms ramps
constexpr double value_eps = 1e-9;

char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool glob_match(std::string_view pat, std::string_view str) {
    // iterative glob with '*' backtracking
    std::size_t p = 0, s = 0, star = std::string_view::npos, mark = 0;
    while (s < str.size()) {
        if (p < pat.size() && (pat[p] == '?' || fold(pat[p]) == fold(str[s]))) {
            ++p;
            ++s;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

} // namespace

void validate_rule(const AffinityRule& rule) {
    if (rule.service_pattern.empty()) throw std::invalid_argument("AffinityRule: empty service pattern");
    if (rule.mode == ChangeMode::progressive && !rule.rate.specified())
        throw std::invalid_argument("AffinityRule '" + rule.service_pattern +
                                    "': progressive mode requires a rate");
    if (rule.effect == EffectKind::external_coupling && (rule.coupling < 0.0 || rule.coupling > 1.0))
        throw std::invalid_argument("AffinityRule '" + rule.service_pattern + "': coupling outside [0,1]");
}

bool pattern_matches(std::string_view pattern, std::string_view service_id) {
    return glob_match(pattern, service_id);
}

double cooling_time_hours(double volume_m3, double air_density, double delta_t, double specific_heat,
                          double latent_heat, double ac_tons) {
    if (!(volume_m3 > 0.0) || !(air_density > 0.0) || !(specific_heat > 0.0) || !(latent_heat > 0.0) ||
        !(ac_tons > 0.0))
        throw std::invalid_argument("cooling_time_hours: physical parameters must be positive");
    if (delta_t < 0.0) throw std::invalid_argument("cooling_time_hours: temperature change must be >= 0");
    return (volume_m3 * air_density * delta_t * specific_heat) / (latent_heat * ac_tons * 1000.0 / 24.0);
}

double combine_sound_db(const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("combine_sound_db: no levels");
    double sum = 0.0;
    for (double l : levels) sum += std::pow(10.0, l / 10.0);
    return 10.0 * std::log10(sum);
}

double ramp_rate_per_second(const AffinityRule& rule, const RoomContext& ctx) {
    if (rule.rate.units_per_minute) return *rule.rate.units_per_minute / 60.0;
    if (rule.rate.ac_tons) {
        // hours per degree is linear in delta_t, so the slope is constant
        const double hours_per_degree =
            cooling_time_hours(ctx.volume_m3, ctx.physics.air_density, 1.0, ctx.physics.specific_heat,
                               ctx.physics.latent_heat, *rule.rate.ac_tons);
        return 1.0 / (hours_per_degree * 3600.0);
    }
    throw std::invalid_argument("ramp_rate_per_second: rule has no rate specification");
}

namespace {

struct SetpointEffect {
    double start_s, end_s;
    double value;
    bool instantaneous;
    double rate_s; // 0 when instantaneous
    std::size_t order;
};

struct CouplingEffect {
    double start_s, end_s;
    double kappa;
    double rate_s;
    bool done = false;
};

struct AdditiveEffect {
    double start_s, end_s;
    double magnitude;
    bool instantaneous;
    double rate_s;
};

struct SoundSource {
    double start_s, end_s;
    double level_db;
};

struct Piecewise {
    // strictly handled on emit; times in seconds
    std::vector<std::pair<double, double>> pts;

    void emit(double t, double v) {
        if (!pts.empty() && pts.back().first >= t) {
            pts.back().second = v;
            return;
        }
        pts.emplace_back(t, v);
    }

    double at(double t) const {
        if (pts.empty()) return 0.0;
        if (t <= pts.front().first) return pts.front().second;
        if (t >= pts.back().first) return pts.back().second;
        auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                   [](double x, const auto& p) { return x < p.first; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double w = (t - lo.first) / (hi.first - lo.first);
        return lo.second + w * (hi.second - lo.second);
    }
};

// Event-driven base track: controlling setpoint effects plus, for temperature,
// one-shot coupling excursions toward the outdoor-shifted equilibrium.
Piecewise simulate_base(Property property, std::vector<SetpointEffect> setpoints,
                        std::vector<CouplingEffect> couplings, const RoomContext& ctx, double window_start,
                        double window_end) {
    const double baseline = ctx.baseline[property];
    double sim_begin = window_start;
    for (const auto& e : setpoints) sim_begin = std::min(sim_begin, e.start_s);
    for (const auto& e : couplings) sim_begin = std::min(sim_begin, e.start_s);

    std::set<double> statics{sim_begin, window_end};
    for (const auto& e : setpoints) {
        if (e.start_s > sim_begin && e.start_s < window_end) statics.insert(e.start_s);
        if (e.end_s > sim_begin && e.end_s < window_end) statics.insert(e.end_s);
    }
    for (const auto& e : couplings) {
        if (e.start_s > sim_begin && e.start_s < window_end) statics.insert(e.start_s);
        if (e.end_s > sim_begin && e.end_s < window_end) statics.insert(e.end_s);
    }

    Piecewise track;
    double v = baseline;
    double t = sim_begin;
    int guard = 0;

    while (t < window_end) {
        if (++guard > 100000) throw std::runtime_error("predict_signal: simulation failed to advance");

        const SetpointEffect* ctl = nullptr;
        for (const auto& e : setpoints) {
            if (e.start_s <= t && t < e.end_s) {
                if (!ctl || e.start_s > ctl->start_s || (e.start_s == ctl->start_s && e.order > ctl->order))
                    ctl = &e;
            }
        }

        // coupling pull (temperature only): push toward the shifted equilibrium
        double pull_target = v;
        double pull_rate = 0.0;
        std::vector<CouplingEffect*> active_pulls;
        if (property == Property::temperature) {
            double keep = 1.0;
            for (auto& c : couplings) {
                if (c.start_s <= t && t < c.end_s && !c.done) {
                    active_pulls.push_back(&c);
                    keep *= 1.0 - c.kappa;
                    pull_rate = std::max(pull_rate, c.rate_s);
                }
            }
            if (!active_pulls.empty()) {
                const double ref = ctl ? ctl->value : baseline;
                const double outdoor = ctx.outdoor[property].value_or(ref);
                pull_target = ref + (1.0 - keep) * (outdoor - ref);
            }
        }

        if (!active_pulls.empty() && std::abs(pull_target - v) <= value_eps) {
            // nothing to push (e.g. outdoor equals indoor): the excursion is spent
            for (auto* c : active_pulls) c->done = true;
            continue;
        }

        auto jump_to = [&](double value) {
            if (t > sim_begin) {
                track.emit(t, v);
                v = value;
                track.emit(t + step_s, v);
                t += step_s;
            } else {
                v = value; // a jump at the very start has no pre-jump sample
            }
        };

        if (!active_pulls.empty() && pull_rate <= 0.0) {
            // instantaneous coupling: step straight to the shifted equilibrium
            jump_to(pull_target);
            for (auto* c : active_pulls) c->done = true;
            continue;
        }
        if (ctl && ctl->instantaneous && active_pulls.empty() && std::abs(ctl->value - v) > value_eps) {
            jump_to(ctl->value);
            continue;
        }
        if (!ctl && active_pulls.empty() && property != Property::temperature &&
            std::abs(baseline - v) > value_eps) {
            // non-temperature base state reverts instantly when uncontrolled
            jump_to(baseline);
            continue;
        }

        double slope = 0.0;
        double target = v;
        bool reach_marks_pulls = false;
        if (!active_pulls.empty()) {
            slope = (pull_target > v ? pull_rate : -pull_rate);
            target = pull_target;
            reach_marks_pulls = true;
        } else if (ctl && !ctl->instantaneous && std::abs(ctl->value - v) > value_eps && ctl->rate_s > 0.0) {
            slope = (ctl->value > v ? ctl->rate_s : -ctl->rate_s);
            target = ctl->value;
        }

        auto next_static = statics.upper_bound(t);
        double t_next = (next_static == statics.end()) ? window_end : *next_static;
        bool reached = false;
        if (slope != 0.0) {
            const double t_reach = t + (target - v) / slope;
            if (t_reach <= t_next) {
                t_next = t_reach;
                reached = true;
            }
        }
        track.emit(t, v);
        v += slope * (t_next - t);
        if (reached) {
            v = target; // land exactly on the target
            if (reach_marks_pulls)
                for (auto* c : active_pulls) c->done = true;
        }
        if (t_next <= t) t_next = t + step_s;
        t = t_next;
    }
    track.emit(window_end, v);
    return track;
}

// One effect as its own trapezoid curve. The breakpoint doubles double as the
// union-grid keys, so summing never re-derives ramp fractions from absolute
// times (which loses enough precision to dent a 1 ms step).
Piecewise effect_curve(const AdditiveEffect& e) {
    const double rise = (e.instantaneous || e.rate_s <= 0.0)
                            ? step_s
                            : std::max(step_s, std::abs(e.magnitude) / e.rate_s);
    Piecewise c;
    c.emit(e.start_s, 0.0);
    double plateau;
    if (e.start_s + rise < e.end_s) {
        plateau = e.magnitude;
        c.emit(e.start_s + rise, plateau);
        c.emit(e.end_s, plateau);
    } else {
        plateau = e.magnitude * (e.end_s - e.start_s) / rise;
        c.emit(e.end_s, plateau);
    }
    const double fall = (e.instantaneous || e.rate_s <= 0.0)
                            ? step_s
                            : std::max(step_s, std::abs(plateau) / e.rate_s);
    c.emit(e.end_s + fall, 0.0);
    return c;
}

Piecewise additive_layer(const std::vector<AdditiveEffect>& effects, double window_start, double window_end) {
    std::vector<Piecewise> curves;
    std::set<double> grid{window_start, window_end};
    for (const auto& e : effects) {
        curves.push_back(effect_curve(e));
        for (const auto& [t, v] : curves.back().pts) {
            if (t > window_start && t < window_end) grid.insert(t);
        }
    }
    Piecewise layer;
    for (double t : grid) {
        double sum = 0.0;
        for (const auto& c : curves) sum += c.at(t);
        layer.emit(t, sum);
    }
    return layer;
}

Piecewise sound_track(const std::vector<SoundSource>& sources, double baseline_db, double window_start,
                      double window_end) {
    std::set<double> edges{window_start, window_end};
    for (const auto& s : sources) {
        if (s.start_s > window_start && s.start_s < window_end) edges.insert(s.start_s);
        if (s.end_s > window_start && s.end_s < window_end) edges.insert(s.end_s);
    }
    Piecewise track;
    double prev_level = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> levels;
    double prev_t = window_start;
    bool first = true;
    for (double t : edges) {
        if (!first) {
            levels.clear();
            levels.push_back(baseline_db);
            const double mid = 0.5 * (prev_t + t);
            for (const auto& s : sources)
                if (s.start_s <= mid && mid < s.end_s) levels.push_back(s.level_db);
            const double level = combine_sound_db(levels);
            if (std::isnan(prev_level)) {
                track.emit(prev_t, level);
            } else if (std::abs(level - prev_level) > value_eps) {
                track.emit(prev_t, prev_level);
                track.emit(prev_t + step_s, level);
            }
            track.emit(t, level);
            prev_level = level;
        }
        first = false;
        prev_t = t;
    }
    if (track.pts.empty()) track.emit(window_start, baseline_db);
    return track;
}

Signal to_signal(Property property, const Piecewise& track, double window_start, double window_end) {
    std::vector<Signal::Sample> samples;
    auto push = [&](double t_s, double v) {
        const auto ms = static_cast<std::int64_t>(std::llround(t_s * 1000.0));
        if (!samples.empty() && samples.back().t.ms >= ms) {
            samples.back().value = v;
            return;
        }
        samples.push_back({Timestamp{ms}, v});
    };
    push(window_start, track.at(window_start));
    for (const auto& [t, v] : track.pts) {
        if (t > window_start && t < window_end) push(t, v);
    }
    if (window_end > window_start) push(window_end, track.at(window_end));
    return Signal{property, std::move(samples)};
}

} // namespace

Signal predict_signal(Property property, const std::vector<ServiceRequest>& requests, const RoomContext& ctx,
                      const std::vector<AffinityRule>& rules, const TimeInterval& window) {
    for (const auto& rule : rules) validate_rule(rule);

    const double w0 = window.start().seconds();
    const double w1 = window.end().seconds();

    std::vector<SetpointEffect> setpoints;
    std::vector<CouplingEffect> couplings;
    std::vector<AdditiveEffect> additives;
    std::vector<SoundSource> sources;

    std::size_t order = 0;
    for (const auto& req : requests) {
        const double s = req.interval.start().seconds();
        const double e = req.interval.end().seconds();
        if (e <= s) continue;
        for (const auto& rule : rules) {
            if (rule.property != property || !pattern_matches(rule.service_pattern, req.service_id)) continue;
            const auto quality = req.quality_value(property_name(property));

            if (property == Property::sound) {
                double level;
                if (quality) {
                    level = *quality;
                } else if (rule.effect == EffectKind::additive_offset) {
                    level = rule.offset;
                } else if (rule.effect == EffectKind::external_coupling) {
                    if (!ctx.outdoor[property]) continue;
                    level = rule.coupling * *ctx.outdoor[property];
                } else {
                    continue; // a setpoint source needs an explicit level
                }
                sources.push_back({s, e, level});
                continue;
            }

            switch (rule.effect) {
                case EffectKind::target_setpoint: {
                    if (!quality) break; // nothing to target without a requested value
                    const bool instant = rule.mode == ChangeMode::instantaneous;
                    const double rate = instant ? 0.0 : ramp_rate_per_second(rule, ctx);
                    setpoints.push_back({s, e, *quality, instant, rate, order});
                    break;
                }
                case EffectKind::additive_offset: {
                    const double magnitude = quality.value_or(rule.offset);
                    const bool instant = rule.mode == ChangeMode::instantaneous;
                    const double rate = instant ? 0.0 : ramp_rate_per_second(rule, ctx);
                    additives.push_back({s, e, magnitude, instant, rate});
                    break;
                }
                case EffectKind::external_coupling: {
                    if (property == Property::temperature && !quality) {
                        const double rate =
                            rule.mode == ChangeMode::instantaneous ? 0.0 : ramp_rate_per_second(rule, ctx);
                        couplings.push_back({s, e, rule.coupling, rate});
                    } else {
                        // quality override, or non-temperature coupling: additive inflow
                        double magnitude;
                        if (quality) {
                            magnitude = *quality;
                        } else if (ctx.outdoor[property]) {
                            magnitude = rule.coupling * *ctx.outdoor[property];
                        } else {
                            break;
                        }
                        const bool instant = rule.mode == ChangeMode::instantaneous;
                        const double rate = instant ? 0.0 : ramp_rate_per_second(rule, ctx);
                        additives.push_back({s, e, magnitude, instant, rate});
                    }
                    break;
                }
            }
        }
        ++order;
    }

    if (property == Property::sound) {
        const Piecewise track = sound_track(sources, ctx.baseline[property], w0, w1);
        return to_signal(property, track, w0, w1);
    }

    const Piecewise base = simulate_base(property, std::move(setpoints), std::move(couplings), ctx, w0, w1);
    if (additives.empty()) return to_signal(property, base, w0, w1);

    const Piecewise layer = additive_layer(additives, w0, w1);
    Piecewise sum;
    std::set<double> grid;
    for (const auto& [t, v] : base.pts) grid.insert(t);
    for (const auto& [t, v] : layer.pts) grid.insert(t);
    grid.insert(w0);
    grid.insert(w1);
    for (double t : grid) {
        if (t < w0 || t > w1) continue;
        sum.emit(t, base.at(t) + layer.at(t));
    }
    return to_signal(property, sum, w0, w1);
}

std::vector<Property> influenced_properties(const ServiceRequest& request, const std::vector<AffinityRule>& rules) {
    std::vector<Property> out;
    for (Property p : all_properties) {
        for (const auto& rule : rules) {
            if (rule.property == p && pattern_matches(rule.service_pattern, request.service_id)) {
                out.push_back(p);
                break;
            }
        }
    }
    return out;
}

std::vector<AffinityRule> default_rules() {
    std::vector<AffinityRule> rules;
    rules.push_back({"ac", Property::temperature, ChangeMode::progressive, EffectKind::target_setpoint, 0.0, 0.5,
                     RateSpec{std::nullopt, 1.0}});
    rules.push_back({"window", Property::temperature, ChangeMode::progressive, EffectKind::external_coupling, 0.0,
                     0.5, RateSpec{0.2, std::nullopt}});
    rules.push_back({"blind", Property::illumination, ChangeMode::instantaneous, EffectKind::external_coupling,
                     0.0, 0.5, RateSpec{}});
    rules.push_back({"light", Property::illumination, ChangeMode::instantaneous, EffectKind::target_setpoint, 0.0,
                     0.5, RateSpec{}});
    rules.push_back({"tv", Property::sound, ChangeMode::instantaneous, EffectKind::additive_offset, 0.0, 0.5,
                     RateSpec{}});
    return rules;
}

} // namespace cohabit
