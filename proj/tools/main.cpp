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

#include <iostream>

#include "CLI11.hpp"

#include "cohabit/cli.hpp"

int main(int argc, char** argv) {
    using namespace cohabit;

    CLI::App app{"Impact conflict detection for IoT services in multi-resident smart homes"};
    app.require_subcommand(0, 1);
    app.fallthrough(); // --config/--seed may follow the subcommand

    bool print_config = false;
    app.add_flag("--print-config", print_config, "Print the default configuration as JSON and exit");

    std::string config_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "Configuration file (JSON)");
    app.add_option("--seed", seed, "Seed override, recorded in every output");

    cli::IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse sensor logs into the canonical event CSV");
    ingest_cmd->add_option("--logs", ingest.logs, "Sensor log files, one per resident")->required();
    ingest_cmd->add_option("--labels", ingest.labels, "Resident labels (default R1..Rn)");
    ingest_cmd->add_option("--out", ingest.out_dir, "Output directory")->required();
    ingest_cmd->add_flag("--augment", ingest.do_augment, "Insert seeded window/blind events and sound volumes");

    cli::DetectArgs detect_args;
    auto* detect_cmd = app.add_subcommand("detect", "Detect impact conflicts among current requests");
    detect_cmd->add_option("--events", detect_args.events_path, "Event history CSV")->required();
    detect_cmd->add_option("--requests", detect_args.requests_path, "Current requests (JSON lines)")->required();
    detect_cmd->add_option("--out", detect_args.out_path, "Conflict report path (JSON lines)")->required();
    detect_cmd->add_flag("--gate", detect_args.gate, "Exit 1 when at least one conflict is found");
    detect_cmd->add_flag("--no-preference", detect_args.no_preference,
                         "Baseline mode: any positive impact is a conflict");

    cli::EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score the detector against ground truth");
    eval_cmd->add_flag("--synthetic", eval_args.synthetic, "Use the seeded synthetic two-resident corpus");
    eval_cmd->add_option("--events", eval_args.events_path, "Event history CSV (unless --synthetic)");
    eval_cmd->add_option("--out", eval_args.out_dir, "Output directory")->required();
    eval_cmd->add_flag("--no-preference", eval_args.no_preference, "Evaluate the baseline detector");

    cli::SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Metrics over a temporal/preferential threshold grid");
    sweep_cmd->add_flag("--synthetic", sweep_args.synthetic, "Use the seeded synthetic corpus");
    sweep_cmd->add_option("--events", sweep_args.events_path, "Event history CSV (unless --synthetic)");
    sweep_cmd->add_option("--grid", sweep_args.grid, "Grid size, e.g. 5x5");
    sweep_cmd->add_option("--out", sweep_args.out_path, "Sweep CSV path")->required();
    sweep_cmd->add_flag("--no-preference", sweep_args.no_preference, "Sweep the baseline detector");

    cli::ExplainArgs explain_args;
    auto* explain_cmd = app.add_subcommand("explain", "Trace one request pair: signal, band, proximities");
    explain_cmd->add_option("--events", explain_args.events_path, "Event history CSV")->required();
    explain_cmd->add_option("--requests", explain_args.requests_path, "Requests (JSON lines)")->required();
    explain_cmd->add_option("--pair", explain_args.pair_first, "Index of the first request");
    explain_cmd->add_option("--with", explain_args.pair_second, "Index of the second request");
    explain_cmd->add_option("--out", explain_args.out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return cli::exit_usage;
    }

    const cli::CommonArgs common{config_path, seed};
    if (print_config) {
        const auto cfg = cli::resolve_config(common, std::cerr);
        if (!cfg) return cli::exit_usage;
        std::cout << config_to_json(*cfg) << '\n';
        return cli::exit_ok;
    }

    ingest.common = common;
    detect_args.common = common;
    eval_args.common = common;
    sweep_args.common = common;
    explain_args.common = common;

    try {
        if (ingest_cmd->parsed()) return cli::cmd_ingest(ingest, std::cout, std::cerr);
        if (detect_cmd->parsed()) return cli::cmd_detect(detect_args, std::cout, std::cerr);
        if (eval_cmd->parsed()) return cli::cmd_evaluate(eval_args, std::cout, std::cerr);
        if (sweep_cmd->parsed()) return cli::cmd_sweep(sweep_args, std::cout, std::cerr);
        if (explain_cmd->parsed()) return cli::cmd_explain(explain_args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_usage;
    }

    std::cout << app.help();
    return cli::exit_ok;
}
