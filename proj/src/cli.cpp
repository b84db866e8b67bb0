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

#include "cohabit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cohabit/synthetic.hpp"

namespace cohabit::cli {

using nlohmann::json;

namespace {

std::string metadata_comment(const RunConfig& cfg) {
    return "# config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.seed) + "\n";
}

bool open_output(std::ofstream& out, const std::string& path, std::ostream& err) {
    out.open(path);
    if (!out) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

std::optional<std::vector<ServiceEvent>> load_events(const std::string& path, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "error: cannot read events file '" << path << "'\n";
        return std::nullopt;
    }
    try {
        return read_events_csv(in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return std::nullopt;
    }
}

std::vector<double> linspace01(int steps) {
    std::vector<double> out;
    if (steps == 1) {
        out.push_back(0.0);
        return out;
    }
    for (int i = 0; i < steps; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(steps - 1));
    return out;
}

json metrics_to_json(const ClassificationMetrics& m) {
    return {{"accuracy", m.accuracy()},
            {"conflict", {{"precision", m.precision_conflict()},
                          {"recall", m.recall_conflict()},
                          {"f1", m.f1_conflict()}}},
            {"no_conflict", {{"precision", m.precision_no_conflict()},
                             {"recall", m.recall_no_conflict()},
                             {"f1", m.f1_no_conflict()}}},
            {"tp", m.tp},
            {"fp", m.fp},
            {"fn", m.fn},
            {"tn", m.tn}};
}

} // namespace

std::optional<RunConfig> resolve_config(const CommonArgs& args, std::ostream& err) {
    std::vector<std::string> errors;
    RunConfig cfg = args.config_path.empty() ? default_config() : load_config_file(args.config_path, errors);
    if (!errors.empty()) {
        err << "config validation failed:\n";
        for (const auto& e : errors) err << "  - " << e << '\n';
        return std::nullopt;
    }
    if (args.seed) {
        cfg.seed = *args.seed;
        cfg.augmentation.seed = *args.seed;
    }
    return cfg;
}

std::vector<ServiceRequest> read_requests_jsonl(std::istream& in) {
    std::vector<ServiceRequest> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("requests line " + std::to_string(line_no) + ": " + e.what());
        }
        ServiceRequest r;
        r.request_id = j.value("request_id", "req-" + std::to_string(line_no));
        r.service_id = j.value("service", "");
        r.user = j.value("user", "");
        r.location = j.value("location", "");
        const auto start = parse_timestamp(j.value("start", ""));
        const auto end = parse_timestamp(j.value("end", ""));
        if (r.service_id.empty() || !start || !end)
            throw std::runtime_error("requests line " + std::to_string(line_no) +
                                     ": needs service, start and end");
        r.interval = TimeInterval{*start, *end};
        if (j.contains("functions"))
            for (const auto& f : j["functions"]) r.functions.push_back(f.get<std::string>());
        if (j.contains("qualities"))
            for (const auto& [name, value] : j["qualities"].items())
                r.qualities.push_back({name, value.get<double>()});
        out.push_back(std::move(r));
    }
    return out;
}

void write_requests_jsonl(std::ostream& out, const std::vector<ServiceRequest>& requests) {
    for (const auto& r : requests) {
        json qualities = json::object();
        for (const auto& q : r.qualities) qualities[q.attribute_name] = q.value;
        json j{{"request_id", r.request_id}, {"service", r.service_id},
               {"user", r.user},             {"location", r.location},
               {"start", format_timestamp(r.interval.start())},
               {"end", format_timestamp(r.interval.end())},
               {"qualities", qualities}};
        out << j.dump() << '\n';
    }
}

int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err) {
    const auto cfg = resolve_config(args.common, err);
    if (!cfg) return exit_usage;
    if (args.logs.empty()) {
        err << "error: no input logs\n";
        return exit_usage;
    }

    std::vector<std::pair<std::string, std::vector<ServiceEvent>>> datasets;
    std::vector<Reject> all_rejects;
    std::size_t parsed_lines = 0, ignored = 0;
    for (std::size_t i = 0; i < args.logs.size(); ++i) {
        std::ifstream in(args.logs[i]);
        if (!in) {
            err << "error: cannot read log '" << args.logs[i] << "'\n";
            return exit_usage;
        }
        const ParseResult parsed = parse_casas(in);
        parsed_lines += parsed.lines.size();
        for (const auto& r : parsed.rejects) all_rejects.push_back(r);
        const ReconstructResult events =
            reconstruct_events(parsed.lines, cfg->sensor_map, cfg->value_map, cfg->ingest_horizon_hours);
        ignored += events.ignored_lines;
        for (const auto& r : events.rejects) all_rejects.push_back(r);
        const std::string label = i < args.labels.size() ? args.labels[i] : "R" + std::to_string(i + 1);
        datasets.emplace_back(label, events.events);
    }

    std::vector<ServiceEvent> merged = merge_residents(datasets);
    if (args.do_augment) {
        AugmentationSpec spec = cfg->augmentation;
        spec.seed = cfg->seed;
        merged = augment(merged, spec);
    }

    std::filesystem::create_directories(args.out_dir);
    std::ofstream events_out;
    if (!open_output(events_out, args.out_dir + "/events.csv", err)) return exit_usage;
    events_out << metadata_comment(*cfg);
    write_events_csv(events_out, merged);

    std::ofstream rejects_out;
    if (!open_output(rejects_out, args.out_dir + "/rejects.csv", err)) return exit_usage;
    rejects_out << metadata_comment(*cfg);
    write_rejects_csv(rejects_out, all_rejects);

    out << "parsed " << parsed_lines << " lines, ignored " << ignored << ", events " << merged.size()
        << ", rejects " << all_rejects.size() << '\n';
    return exit_ok;
}

int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err) {
    const auto cfg = resolve_config(args.common, err);
    if (!cfg) return exit_usage;

    const auto history = load_events(args.events_path, err);
    if (!history) return exit_usage;

    std::ifstream req_in(args.requests_path);
    if (!req_in) {
        err << "error: cannot read requests file '" << args.requests_path << "'\n";
        return exit_usage;
    }
    std::vector<ServiceRequest> requests;
    try {
        requests = read_requests_jsonl(req_in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    std::vector<std::string> missing;
    for (const auto& r : requests) {
        const std::string loc = normalize_location(r.location);
        if (!cfg->rooms.count(loc)) missing.push_back(loc);
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        err << "config validation failed:\n";
        for (const auto& m : missing) err << "  - no room context for location '" << m << "'\n";
        return exit_usage;
    }

    DetectionConfig detection = cfg->detection;
    detection.no_preference = args.no_preference;
    const auto conflicts = detect(requests, *history, cfg->rooms, cfg->rules, detection);

    std::ofstream report;
    if (!open_output(report, args.out_path, err)) return exit_usage;
    report << json{{"config_hash", config_hash(*cfg)}, {"seed", cfg->seed}}.dump() << '\n';
    write_conflicts_jsonl(report, conflicts);

    out << "requests " << requests.size() << ", conflicts " << conflicts.size() << '\n';
    if (args.gate && !conflicts.empty()) return exit_gate_conflict;
    return exit_ok;
}

namespace {

std::optional<EvalCorpus> build_corpus(bool synthetic, const std::string& events_path, const RunConfig& cfg,
                                       std::ostream& err) {
    if (synthetic) {
        SyntheticSpec spec;
        spec.seed = cfg.seed;
        return make_synthetic_corpus(spec);
    }
    const auto events = load_events(events_path, err);
    if (!events) return std::nullopt;
    EvalCorpus corpus = corpus_from_events(*events, cfg.rooms, cfg.rules, cfg.bins, cfg.ground_truth_margin);
    if (corpus.episodes.empty()) {
        err << "error: no co-occurring service pairs found in '" << events_path << "'\n";
        return std::nullopt;
    }
    return corpus;
}

} // namespace

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
    const auto cfg = resolve_config(args.common, err);
    if (!cfg) return exit_usage;
    const auto corpus = build_corpus(args.synthetic, args.events_path, *cfg, err);
    if (!corpus) return exit_usage;

    EvaluationOptions opt;
    opt.no_preference = args.no_preference;
    opt.label_threshold = cfg->label_threshold;

    const EvaluationResult result = evaluate_corpus(*corpus, cfg->detection, opt);

    std::filesystem::create_directories(args.out_dir);
    std::ofstream metrics_out;
    if (!open_output(metrics_out, args.out_dir + "/metrics.json", err)) return exit_usage;
    json metrics = metrics_to_json(result.metrics);
    metrics["mae_overall"] = result.mae_overall;
    metrics["mae_conflict"] = result.mae_conflict;
    metrics["mae_no_conflict"] = result.mae_no_conflict;
    json by_prop = json::object();
    for (Property p : all_properties) {
        if (result.samples_by_property[p] > 0)
            by_prop[std::string(property_name(p))] = result.mae_by_property[p];
    }
    metrics["mae_by_property"] = by_prop;
    metrics["episodes"] = corpus->episodes.size();
    metrics["config_hash"] = config_hash(*cfg);
    metrics["seed"] = cfg->seed;
    metrics_out << metrics.dump(2) << '\n';

    // Table-style MAE rows: repeated seeded runs, mean and sample std
    std::ofstream mae_out;
    if (!open_output(mae_out, args.out_dir + "/mae.csv", err)) return exit_usage;
    mae_out << metadata_comment(*cfg);
    mae_out << "property,conflict_mean,conflict_std,no_conflict_mean,no_conflict_std,overall_mean,overall_std\n";
    const int reps = args.synthetic ? cfg->repetitions : 1;
    PropertyMap<std::vector<double>> overall;
    PropertyMap<std::vector<double>> conflict_err, no_conflict_err;
    for (int rep = 0; rep < reps; ++rep) {
        EvaluationResult r = result;
        std::optional<EvalCorpus> rep_corpus;
        if (rep > 0) {
            SyntheticSpec spec;
            spec.seed = cfg->seed + static_cast<std::uint64_t>(rep);
            rep_corpus = make_synthetic_corpus(spec);
            r = evaluate_corpus(*rep_corpus, cfg->detection, opt);
        }
        const EvalCorpus& used = rep_corpus ? *rep_corpus : *corpus;
        PropertyMap<double> sum_c, sum_nc, sum_all;
        PropertyMap<std::size_t> n_c, n_nc, n_all;
        for (std::size_t i = 0; i < used.episodes.size(); ++i) {
            const Property p = used.episodes[i].property;
            const bool truth = used.episodes[i].truth_conflict;
            const double error = r.episode_errors[i];
            sum_all[p] += error;
            ++n_all[p];
            if (truth) {
                sum_c[p] += error;
                ++n_c[p];
            } else {
                sum_nc[p] += error;
                ++n_nc[p];
            }
        }
        for (Property p : all_properties) {
            if (n_all[p] == 0) continue;
            overall[p].push_back(sum_all[p] / static_cast<double>(n_all[p]));
            conflict_err[p].push_back(n_c[p] ? sum_c[p] / static_cast<double>(n_c[p]) : 0.0);
            no_conflict_err[p].push_back(n_nc[p] ? sum_nc[p] / static_cast<double>(n_nc[p]) : 0.0);
        }
    }
    for (Property p : all_properties) {
        if (overall[p].empty()) continue;
        const MeanStd c = mean_std(conflict_err[p]);
        const MeanStd nc = mean_std(no_conflict_err[p]);
        const MeanStd all = mean_std(overall[p]);
        mae_out << property_name(p) << ',' << c.mean << ',' << c.std_dev << ',' << nc.mean << ',' << nc.std_dev
                << ',' << all.mean << ',' << all.std_dev << '\n';
    }

    out << "episodes " << corpus->episodes.size() << ", accuracy " << result.metrics.accuracy()
        << ", conflict f1 " << result.metrics.f1_conflict() << ", mae " << result.mae_overall << '\n';
    return exit_ok;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    const auto cfg = resolve_config(args.common, err);
    if (!cfg) return exit_usage;
    const auto corpus = build_corpus(args.synthetic, args.events_path, *cfg, err);
    if (!corpus) return exit_usage;

    int nt = 0, np = 0;
    if (std::sscanf(args.grid.c_str(), "%dx%d", &nt, &np) != 2 || nt < 1 || np < 1) {
        err << "error: bad grid '" << args.grid << "', expected e.g. 5x5\n";
        return exit_usage;
    }

    EvaluationOptions opt;
    opt.no_preference = args.no_preference;
    opt.label_threshold = cfg->label_threshold;

    const auto rows = threshold_sweep(*corpus, linspace01(nt), linspace01(np), cfg->detection, opt);

    std::ofstream csv;
    if (!open_output(csv, args.out_path, err)) return exit_usage;
    csv << metadata_comment(*cfg);
    write_sweep_csv(csv, rows);

    out << "grid " << nt << "x" << np << ", rows " << rows.size() << '\n';
    return exit_ok;
}

int cmd_explain(const ExplainArgs& args, std::ostream& out, std::ostream& err) {
    const auto cfg = resolve_config(args.common, err);
    if (!cfg) return exit_usage;

    const auto history = load_events(args.events_path, err);
    if (!history) return exit_usage;

    std::ifstream req_in(args.requests_path);
    if (!req_in) {
        err << "error: cannot read requests file '" << args.requests_path << "'\n";
        return exit_usage;
    }
    std::vector<ServiceRequest> requests;
    try {
        requests = read_requests_jsonl(req_in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    int first = args.pair_first, second = args.pair_second;
    if (first < 0 || second < 0) {
        bool found = false;
        for (std::size_t i = 0; i < requests.size() && !found; ++i) {
            for (std::size_t j = i + 1; j < requests.size() && !found; ++j) {
                if (impact_preconditions(requests[i], requests[j], cfg->rules)) {
                    first = static_cast<int>(i);
                    second = static_cast<int>(j);
                    found = true;
                }
            }
        }
        if (!found) {
            err << "error: no request pair passes the impact preconditions\n";
            return exit_usage;
        }
    }
    if (first >= static_cast<int>(requests.size()) || second >= static_cast<int>(requests.size()) ||
        first == second) {
        err << "error: bad pair indices\n";
        return exit_usage;
    }

    const ServiceRequest& a = requests[static_cast<std::size_t>(first)];
    const ServiceRequest& b = requests[static_cast<std::size_t>(second)];
    const std::string loc = normalize_location(a.location);
    const auto room_it = cfg->rooms.find(loc);
    if (room_it == cfg->rooms.end()) {
        err << "config validation failed:\n  - no room context for location '" << loc << "'\n";
        return exit_usage;
    }

    const auto conflicts = detect({a, b}, *history, cfg->rooms, cfg->rules, cfg->detection);

    // surface the predicted trace for the first shared property
    const auto seg = overlap_segment(a.interval, b.interval);
    if (!seg) {
        err << "error: requests do not overlap\n";
        return exit_usage;
    }
    const auto props_a = influenced_properties(a, cfg->rules);
    const auto props_b = influenced_properties(b, cfg->rules);
    std::optional<Property> shared;
    for (Property p : props_a) {
        if (std::find(props_b.begin(), props_b.end(), p) != props_b.end()) {
            shared = p;
            break;
        }
    }
    if (!shared) {
        err << "error: requests share no environment property\n";
        return exit_usage;
    }

    const Signal trace = predict_signal(*shared, {a, b}, room_it->second, cfg->rules, seg->interval());

    std::filesystem::create_directories(args.out_dir);
    std::ofstream signal_out;
    if (!open_output(signal_out, args.out_dir + "/signal.csv", err)) return exit_usage;
    signal_out << metadata_comment(*cfg);
    write_signal_csv(signal_out, trace);

    std::vector<PreferenceBand> bands;
    for (const auto* r : {&a, &b}) {
        const auto band = estimate_preference(*history, r->user, property_name(*shared), *seg, loc,
                                              cfg->detection.preference);
        if (band) bands.push_back(*band);
    }
    std::ofstream bands_out;
    if (!open_output(bands_out, args.out_dir + "/bands.csv", err)) return exit_usage;
    bands_out << metadata_comment(*cfg);
    write_bands_csv(bands_out, bands);

    json explain{{"config_hash", config_hash(*cfg)},
                 {"seed", cfg->seed},
                 {"pair", json::array({a.request_id, b.request_id})},
                 {"property", std::string(property_name(*shared))},
                 {"overlap_start", format_timestamp(seg->start())},
                 {"overlap_end", format_timestamp(seg->end())},
                 {"conflicts", json::array()}};
    for (const auto& c : conflicts) {
        explain["conflicts"].push_back({{"user", c.user},
                                        {"service", c.service_id},
                                        {"attribute", c.attribute_name},
                                        {"impact", c.impact_value},
                                        {"pref_prox", c.pref_prox},
                                        {"temp_prox", c.temp_prox},
                                        {"raw_cl", c.raw_cl},
                                        {"likelihood", c.likelihood}});
    }
    std::ofstream explain_out;
    if (!open_output(explain_out, args.out_dir + "/explain.json", err)) return exit_usage;
    explain_out << explain.dump(2) << '\n';

    out << "pair (" << a.request_id << ", " << b.request_id << "), conflicts " << conflicts.size() << '\n';
    return exit_ok;
}

} // namespace cohabit::cli
