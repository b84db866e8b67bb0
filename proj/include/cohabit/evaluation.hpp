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

#ifndef COHABIT_EVALUATION_HPP
#define COHABIT_EVALUATION_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cohabit/detection.hpp"
#include "cohabit/env.hpp"
#include "cohabit/model.hpp"

namespace cohabit {

/// Bin widths used to discretize numerical contexts into scenarios.
struct ContextBins {
    PropertyMap<double> value_bin{{2.0, 10.0, 5.0, 5.0}};
    double hour_bin_hours = 3.0;
};

/// Discretized context cell: property value bin x time-of-day bin x location.
struct ScenarioKey {
    Property property = Property::temperature;
    int value_bin = 0;
    int hour_bin = 0;
    std::string location;

    auto operator<=>(const ScenarioKey&) const = default;
};

ScenarioKey make_scenario_key(Property property, double context_value, Timestamp at, std::string location,
                              const ContextBins& bins);

/// One co-occurrence of two users' services in a context cell, labeled with
/// whether a conflict was observed.
struct ConflictObservation {
    std::string user_a; // lexicographically sorted pair
    std::string user_b;
    ScenarioKey key;
    bool conflicted = false;
};

/// likelihood(pair, scenario) = conflicts / occurrences.
class GroundTruthTable {
public:
    void add(const ConflictObservation& obs);
    std::optional<double> likelihood(std::string_view user_a, std::string_view user_b,
                                     const ScenarioKey& key) const;
    std::size_t cells() const { return table_.size(); }

private:
    struct Tally {
        std::size_t occurrences = 0;
        std::size_t conflicts = 0;
    };
    std::map<std::tuple<std::string, std::string, ScenarioKey>, Tally> table_;
};

GroundTruthTable build_ground_truth(const std::vector<ConflictObservation>& observations);

/// Scans a merged event log for co-occurring service pairs and labels a
/// conflict observation whenever the two desired states of a shared property
/// differ by more than the margin.
std::vector<ConflictObservation> extract_occurrences(const std::vector<ServiceEvent>& events,
                                                     const std::map<std::string, RoomContext>& rooms,
                                                     const std::vector<AffinityRule>& rules,
                                                     const ContextBins& bins,
                                                     const PropertyMap<double>& margin);

GroundTruthTable build_ground_truth(const std::vector<ServiceEvent>& events,
                                    const std::map<std::string, RoomContext>& rooms,
                                    const std::vector<AffinityRule>& rules, const ContextBins& bins,
                                    const PropertyMap<double>& margin);

struct ClassificationMetrics {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    double accuracy() const;
    double precision_conflict() const;
    double recall_conflict() const;
    double f1_conflict() const;
    double precision_no_conflict() const;
    double recall_no_conflict() const;
    double f1_no_conflict() const;
};

/// Confusion-matrix metrics over aligned label lists; throws on empty or
/// mismatched input.
ClassificationMetrics classification_metrics(const std::vector<bool>& predicted,
                                             const std::vector<bool>& truth);

/// (1/N) * sum |ol - el| over aligned likelihood lists in [0, 1].
double mean_absolute_error(const std::vector<double>& estimated, const std::vector<double>& truth);

/// One evaluation sample: a concurrent request pair in a room, the property
/// under test, and the planted/observed truth label.
struct EvalEpisode {
    ServiceRequest a;
    ServiceRequest b;
    RoomContext ctx;
    Property property = Property::temperature;
    double context_value = 0.0; // feeds the scenario key
    bool truth_conflict = false;
};

struct EvalCorpus {
    std::vector<ServiceEvent> history;
    std::vector<EvalEpisode> episodes;
    std::vector<AffinityRule> rules;
    ContextBins bins;
};

ScenarioKey episode_key(const EvalEpisode& episode, const ContextBins& bins);

/// Builds an evaluation corpus from a merged event log: every co-occurring
/// service pair becomes an episode per shared property, labeled by the same
/// margin predicate that drives the ground truth.
EvalCorpus corpus_from_events(const std::vector<ServiceEvent>& events,
                              const std::map<std::string, RoomContext>& rooms,
                              const std::vector<AffinityRule>& rules, const ContextBins& bins,
                              const PropertyMap<double>& margin);

struct EvaluationOptions {
    bool no_preference = false;
    double label_threshold = 0.5; // likelihood >= threshold counts as "conflict"
};

struct EvaluationResult {
    ClassificationMetrics metrics;
    double mae_overall = 0.0;
    double mae_conflict = 0.0;    // over samples whose truth label is "conflict"
    double mae_no_conflict = 0.0; // over the rest
    PropertyMap<double> mae_by_property;
    PropertyMap<std::size_t> samples_by_property;
    std::size_t predicted_positives = 0;
    std::vector<bool> predicted;
    std::vector<bool> truth;
    std::vector<double> episode_errors; // |ol - el| per episode
};

/// Runs the detector over every episode, compares per-episode labels with the
/// planted truth and per-scenario detection rates with the ground-truth
/// likelihoods.
EvaluationResult evaluate_corpus(const EvalCorpus& corpus, const DetectionConfig& cfg,
                                 const EvaluationOptions& opt);

struct SweepRow {
    double tau_t = 0.0;
    double tau_p = 0.0;
    ClassificationMetrics metrics;
    std::size_t predicted_positives = 0;
};

/// Re-runs the evaluation per grid point, varying the pruning thresholds.
std::vector<SweepRow> threshold_sweep(const EvalCorpus& corpus, const std::vector<double>& taus_t,
                                      const std::vector<double>& taus_p, const DetectionConfig& base_cfg,
                                      const EvaluationOptions& opt);

/// CSV with header
/// `tau_t,tau_p,accuracy,precision_c,recall_c,f1_c,precision_nc,recall_nc,f1_nc`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0; // sample standard deviation
};
MeanStd mean_std(const std::vector<double>& values);

} // namespace cohabit

#endif
