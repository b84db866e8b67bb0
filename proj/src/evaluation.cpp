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

#include "cohabit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cohabit {

ScenarioKey make_scenario_key(Property property, double context_value, Timestamp at, std::string location,
                              const ContextBins& bins) {
    ScenarioKey key;
    key.property = property;
    key.value_bin = static_cast<int>(std::floor(context_value / bins.value_bin[property]));
    const double hour = static_cast<double>(ms_of_day(at)) / 3'600'000.0;
    key.hour_bin = static_cast<int>(std::floor(hour / bins.hour_bin_hours));
    key.location = normalize_location(location);
    return key;
}

void GroundTruthTable::add(const ConflictObservation& obs) {
    auto& tally = table_[{obs.user_a, obs.user_b, obs.key}];
    ++tally.occurrences;
    if (obs.conflicted) ++tally.conflicts;
}

std::optional<double> GroundTruthTable::likelihood(std::string_view user_a, std::string_view user_b,
                                                   const ScenarioKey& key) const {
    std::string a(user_a), b(user_b);
    if (b < a) std::swap(a, b);
    const auto it = table_.find({a, b, key});
    if (it == table_.end()) return std::nullopt;
    return static_cast<double>(it->second.conflicts) / static_cast<double>(it->second.occurrences);
}

GroundTruthTable build_ground_truth(const std::vector<ConflictObservation>& observations) {
    GroundTruthTable table;
    for (const auto& obs : observations) table.add(obs);
    return table;
}

namespace {

ServiceRequest request_from_event(const ServiceEvent& e) {
    ServiceRequest r;
    r.request_id = e.event_id;
    r.service_id = e.service_id;
    r.functions = e.functions;
    r.qualities = e.qualities;
    r.interval = e.interval;
    r.location = e.location;
    r.user = e.user;
    return r;
}

// The desired state an event implies for a property: its own quality value,
// or the outdoor value it admits when its service couples to the outside.
std::optional<double> desired_state(const ServiceEvent& e, Property p, const RoomContext& ctx,
                                    const std::vector<AffinityRule>& rules) {
    if (const auto v = e.quality_value(property_name(p))) return v;
    for (const auto& rule : rules) {
        if (rule.property != p || rule.effect != EffectKind::external_coupling) continue;
        if (!pattern_matches(rule.service_pattern, e.service_id)) continue;
        if (ctx.outdoor[p]) return *ctx.outdoor[p];
    }
    return std::nullopt;
}

} // namespace

std::vector<ConflictObservation> extract_occurrences(const std::vector<ServiceEvent>& events,
                                                     const std::map<std::string, RoomContext>& rooms,
                                                     const std::vector<AffinityRule>& rules,
                                                     const ContextBins& bins,
                                                     const PropertyMap<double>& margin) {
    std::vector<ConflictObservation> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            const ServiceEvent& a = events[i];
            const ServiceEvent& b = events[j];
            if (a.user == b.user || a.service_id == b.service_id) continue;
            const std::string loc = normalize_location(a.location);
            if (loc != normalize_location(b.location)) continue;
            const auto seg = overlap_segment(a.interval, b.interval);
            if (!seg) continue;
            const auto room_it = rooms.find(loc);
            if (room_it == rooms.end()) continue;

            const auto props_a = influenced_properties(request_from_event(a), rules);
            const auto props_b = influenced_properties(request_from_event(b), rules);
            for (Property p : props_a) {
                if (std::find(props_b.begin(), props_b.end(), p) == props_b.end()) continue;
                const auto va = desired_state(a, p, room_it->second, rules);
                const auto vb = desired_state(b, p, room_it->second, rules);

                ConflictObservation obs;
                obs.user_a = std::min(a.user, b.user);
                obs.user_b = std::max(a.user, b.user);
                // the later-starting party is read as the disturbing context
                const ServiceEvent& later = (b.interval.start() >= a.interval.start()) ? b : a;
                const auto later_value = (&later == &a) ? va : vb;
                const double context_value = later_value.value_or(room_it->second.outdoor[p].value_or(0.0));
                obs.key = make_scenario_key(p, context_value, seg->start(), loc, bins);
                obs.conflicted = va && vb && std::abs(*va - *vb) > margin[p];
                out.push_back(std::move(obs));
            }
        }
    }
    return out;
}

GroundTruthTable build_ground_truth(const std::vector<ServiceEvent>& events,
                                    const std::map<std::string, RoomContext>& rooms,
                                    const std::vector<AffinityRule>& rules, const ContextBins& bins,
                                    const PropertyMap<double>& margin) {
    return build_ground_truth(extract_occurrences(events, rooms, rules, bins, margin));
}

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

} // namespace

double ClassificationMetrics::accuracy() const { return ratio(tp + tn, total()); }
double ClassificationMetrics::precision_conflict() const { return ratio(tp, tp + fp); }
double ClassificationMetrics::recall_conflict() const { return ratio(tp, tp + fn); }
double ClassificationMetrics::f1_conflict() const { return harmonic(precision_conflict(), recall_conflict()); }
double ClassificationMetrics::precision_no_conflict() const { return ratio(tn, tn + fn); }
double ClassificationMetrics::recall_no_conflict() const { return ratio(tn, tn + fp); }
double ClassificationMetrics::f1_no_conflict() const {
    return harmonic(precision_no_conflict(), recall_no_conflict());
}

ClassificationMetrics classification_metrics(const std::vector<bool>& predicted,
                                             const std::vector<bool>& truth) {
    if (predicted.empty()) throw std::invalid_argument("classification_metrics: empty input");
    if (predicted.size() != truth.size())
        throw std::invalid_argument("classification_metrics: label lists differ in length");
    ClassificationMetrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] && truth[i]) ++m.tp;
        else if (predicted[i] && !truth[i]) ++m.fp;
        else if (!predicted[i] && truth[i]) ++m.fn;
        else ++m.tn;
    }
    return m;
}

double mean_absolute_error(const std::vector<double>& estimated, const std::vector<double>& truth) {
    if (estimated.size() != truth.size())
        throw std::invalid_argument("mean_absolute_error: length mismatch");
    if (estimated.empty()) throw std::invalid_argument("mean_absolute_error: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < estimated.size(); ++i) {
        if (estimated[i] < 0.0 || estimated[i] > 1.0 || truth[i] < 0.0 || truth[i] > 1.0)
            throw std::invalid_argument("mean_absolute_error: likelihoods must lie in [0,1]");
        sum += std::abs(truth[i] - estimated[i]);
    }
    return sum / static_cast<double>(estimated.size());
}

ScenarioKey episode_key(const EvalEpisode& episode, const ContextBins& bins) {
    const auto seg = overlap_segment(episode.a.interval, episode.b.interval);
    const Timestamp at = seg ? seg->start() : episode.a.interval.start();
    return make_scenario_key(episode.property, episode.context_value, at, episode.a.location, bins);
}

EvalCorpus corpus_from_events(const std::vector<ServiceEvent>& events,
                              const std::map<std::string, RoomContext>& rooms,
                              const std::vector<AffinityRule>& rules, const ContextBins& bins,
                              const PropertyMap<double>& margin) {
    EvalCorpus corpus;
    corpus.history = events;
    corpus.rules = rules;
    corpus.bins = bins;
    for (std::size_t i = 0; i < events.size(); ++i) {
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            const ServiceEvent& a = events[i];
            const ServiceEvent& b = events[j];
            if (a.user == b.user || a.service_id == b.service_id) continue;
            const std::string loc = normalize_location(a.location);
            if (loc != normalize_location(b.location)) continue;
            if (!overlap_segment(a.interval, b.interval)) continue;
            const auto room_it = rooms.find(loc);
            if (room_it == rooms.end()) continue;

            const auto props_a = influenced_properties(request_from_event(a), rules);
            const auto props_b = influenced_properties(request_from_event(b), rules);
            for (Property p : props_a) {
                if (std::find(props_b.begin(), props_b.end(), p) == props_b.end()) continue;
                const auto va = desired_state(a, p, room_it->second, rules);
                const auto vb = desired_state(b, p, room_it->second, rules);

                EvalEpisode ep;
                ep.a = request_from_event(a);
                ep.b = request_from_event(b);
                ep.ctx = room_it->second;
                ep.property = p;
                const ServiceEvent& later = (b.interval.start() >= a.interval.start()) ? b : a;
                const auto later_value = (&later == &a) ? va : vb;
                ep.context_value = later_value.value_or(room_it->second.outdoor[p].value_or(0.0));
                ep.truth_conflict = va && vb && std::abs(*va - *vb) > margin[p];
                corpus.episodes.push_back(std::move(ep));
            }
        }
    }
    return corpus;
}

EvaluationResult evaluate_corpus(const EvalCorpus& corpus, const DetectionConfig& cfg,
                                 const EvaluationOptions& opt) {
    if (corpus.episodes.empty()) throw std::invalid_argument("evaluate_corpus: no episodes");

    DetectionConfig run_cfg = cfg;
    run_cfg.no_preference = opt.no_preference;

    EvaluationResult result;
    std::vector<ScenarioKey> keys;
    std::vector<std::pair<std::string, std::string>> pairs;
    keys.reserve(corpus.episodes.size());

    for (const auto& episode : corpus.episodes) {
        std::map<std::string, RoomContext> rooms{{normalize_location(episode.a.location), episode.ctx}};
        const auto conflicts = detect({episode.a, episode.b}, corpus.history, rooms, corpus.rules, run_cfg);
        bool positive = false;
        for (const auto& c : conflicts) {
            if (c.attribute_name == property_name(episode.property) && c.likelihood >= opt.label_threshold) {
                positive = true;
                break;
            }
        }
        result.predicted.push_back(positive);
        result.truth.push_back(episode.truth_conflict);
        if (positive) ++result.predicted_positives;
        keys.push_back(episode_key(episode, corpus.bins));
        auto ua = episode.a.user;
        auto ub = episode.b.user;
        if (ub < ua) std::swap(ua, ub);
        pairs.emplace_back(std::move(ua), std::move(ub));
    }

    result.metrics = classification_metrics(result.predicted, result.truth);

    // ground truth and per-scenario detection rates from the same tallies
    GroundTruthTable gt;
    std::map<std::tuple<std::string, std::string, ScenarioKey>, std::pair<std::size_t, std::size_t>> rates;
    for (std::size_t i = 0; i < corpus.episodes.size(); ++i) {
        ConflictObservation obs;
        obs.user_a = pairs[i].first;
        obs.user_b = pairs[i].second;
        obs.key = keys[i];
        obs.conflicted = corpus.episodes[i].truth_conflict;
        gt.add(obs);
        auto& rate = rates[{pairs[i].first, pairs[i].second, keys[i]}];
        ++rate.first;
        if (result.predicted[i]) ++rate.second;
    }

    std::vector<double> el, ol;
    PropertyMap<double> mae_sum;
    PropertyMap<std::size_t> mae_n;
    double sum_c = 0.0, sum_nc = 0.0;
    std::size_t n_c = 0, n_nc = 0;
    for (std::size_t i = 0; i < corpus.episodes.size(); ++i) {
        const auto& rate = rates.at({pairs[i].first, pairs[i].second, keys[i]});
        const double estimated = static_cast<double>(rate.second) / static_cast<double>(rate.first);
        const double observed = gt.likelihood(pairs[i].first, pairs[i].second, keys[i]).value_or(0.0);
        el.push_back(estimated);
        ol.push_back(observed);
        const double err = std::abs(observed - estimated);
        result.episode_errors.push_back(err);
        const Property p = corpus.episodes[i].property;
        mae_sum[p] += err;
        ++mae_n[p];
        if (corpus.episodes[i].truth_conflict) {
            sum_c += err;
            ++n_c;
        } else {
            sum_nc += err;
            ++n_nc;
        }
    }
    result.mae_overall = mean_absolute_error(el, ol);
    result.mae_conflict = n_c ? sum_c / static_cast<double>(n_c) : 0.0;
    result.mae_no_conflict = n_nc ? sum_nc / static_cast<double>(n_nc) : 0.0;
    for (Property p : all_properties) {
        result.samples_by_property[p] = mae_n[p];
        result.mae_by_property[p] = mae_n[p] ? mae_sum[p] / static_cast<double>(mae_n[p]) : 0.0;
    }
    return result;
}

std::vector<SweepRow> threshold_sweep(const EvalCorpus& corpus, const std::vector<double>& taus_t,
                                      const std::vector<double>& taus_p, const DetectionConfig& base_cfg,
                                      const EvaluationOptions& opt) {
    if (taus_t.empty() || taus_p.empty()) throw std::invalid_argument("threshold_sweep: empty grid");
    std::vector<SweepRow> rows;
    for (double tt : taus_t) {
        for (double tp : taus_p) {
            DetectionConfig cfg = base_cfg;
            cfg.temporal_threshold = tt;
            cfg.preferential_threshold = tp;
            const EvaluationResult r = evaluate_corpus(corpus, cfg, opt);
            rows.push_back({tt, tp, r.metrics, r.predicted_positives});
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "tau_t,tau_p,accuracy,precision_c,recall_c,f1_c,precision_nc,recall_nc,f1_nc\n";
    for (const auto& r : rows) {
        out << r.tau_t << ',' << r.tau_p << ',' << r.metrics.accuracy() << ',' << r.metrics.precision_conflict()
            << ',' << r.metrics.recall_conflict() << ',' << r.metrics.f1_conflict() << ','
            << r.metrics.precision_no_conflict() << ',' << r.metrics.recall_no_conflict() << ','
            << r.metrics.f1_no_conflict() << '\n';
    }
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

} // namespace cohabit
