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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"

#include "cohabit/cli.hpp"
#include "support/fixtures.hpp"

using namespace cohabit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() / ("cohabit-test-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    static int& counter() {
        static int c = 0;
        return c;
    }

    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }

    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

const char* scenario_requests_jsonl =
    R"({"request_id":"sr-ac","service":"ac","user":"R1","location":"living","start":"2011-07-20T20:00:00.000","end":"2011-07-20T22:00:00.000","qualities":{"temperature":20.0}}
{"request_id":"sr-window","service":"window","user":"R2","location":"living","start":"2011-07-20T20:30:00.000","end":"2011-07-20T21:30:00.000","qualities":{}}
)";

} // namespace

TEST_CASE("ingest writes events and rejects") {
    TempDir dir;
    const std::string log = dir.file("home.txt",
                                     "2011-06-15 08:30:00.000 LL001 ON\n"
                                     "2011-06-15 09:10:00.000 LL001 OFF\n"
                                     "2011-06-15 09:20:00.000 LL001\n"
                                     "bad-date 09:00:00 LL001 ON\n"
                                     "2011-06-15 10:00:00.000 LL001 MAYBE\n");
    cli::IngestArgs args;
    args.logs = {log};
    args.out_dir = dir.sub("out");
    std::ostringstream out, err;
    CHECK(cli::cmd_ingest(args, out, err) == cli::exit_ok);

    const std::string events = slurp(dir.sub("out") + "/events.csv");
    CHECK(events.find("# config_hash=") == 0);
    CHECK(events.find("R1:se-1,light") != std::string::npos);

    const std::string rejects = slurp(dir.sub("out") + "/rejects.csv");
    CHECK(line_count(rejects) == 5); // metadata + header + three rejected lines
    CHECK(out.str().find("rejects 3") != std::string::npos);
}

TEST_CASE("ingest with a missing path exits with usage error") {
    TempDir dir;
    cli::IngestArgs args;
    args.logs = {dir.sub("nonexistent.txt")};
    args.out_dir = dir.sub("out");
    std::ostringstream out, err;
    CHECK(cli::cmd_ingest(args, out, err) == cli::exit_usage);
    CHECK(err.str().find("cannot read") != std::string::npos);
}

TEST_CASE("detect reports the hot-window conflict and honours the gate") {
    TempDir dir;
    const std::string events = dir.file("events.csv", "event_id,service,attribute,value,start,end,location,user\n");
    const std::string requests = dir.file("requests.jsonl", scenario_requests_jsonl);

    cli::DetectArgs args;
    args.events_path = events;
    args.requests_path = requests;
    args.out_path = dir.sub("report.jsonl");
    std::ostringstream out, err;
    CHECK(cli::cmd_detect(args, out, err) == cli::exit_ok);

    const std::string report = slurp(args.out_path);
    CHECK(line_count(report) == 2); // metadata line plus one conflict
    CHECK(report.find("\"user\":\"R1\"") != std::string::npos);
    CHECK(report.find("config_hash") != std::string::npos);

    args.gate = true;
    std::ostringstream out2, err2;
    CHECK(cli::cmd_detect(args, out2, err2) == cli::exit_gate_conflict);
}

TEST_CASE("detect output is byte-identical across runs") {
    TempDir dir;
    const std::string events = dir.file("events.csv", "event_id,service,attribute,value,start,end,location,user\n");
    const std::string requests = dir.file("requests.jsonl", scenario_requests_jsonl);

    cli::DetectArgs args;
    args.events_path = events;
    args.requests_path = requests;
    std::ostringstream out, err;
    args.out_path = dir.sub("a.jsonl");
    CHECK(cli::cmd_detect(args, out, err) == cli::exit_ok);
    args.out_path = dir.sub("b.jsonl");
    CHECK(cli::cmd_detect(args, out, err) == cli::exit_ok);
    CHECK(slurp(dir.sub("a.jsonl")) == slurp(dir.sub("b.jsonl")));
}

TEST_CASE("an empty request file produces an empty report and success") {
    TempDir dir;
    const std::string events = dir.file("events.csv", "event_id,service,attribute,value,start,end,location,user\n");
    const std::string requests = dir.file("requests.jsonl", "");
    cli::DetectArgs args;
    args.events_path = events;
    args.requests_path = requests;
    args.out_path = dir.sub("report.jsonl");
    args.gate = true;
    std::ostringstream out, err;
    CHECK(cli::cmd_detect(args, out, err) == cli::exit_ok);
    CHECK(line_count(slurp(args.out_path)) == 1); // metadata only
}

TEST_CASE("a malformed config is reported exhaustively with exit 2") {
    TempDir dir;
    const std::string config = dir.file("bad.json", R"({
        "physics": {"air_density": -1.0},
        "detection": {"temporal_threshold": 3.0},
        "affinity": [{"service": "", "property": "warmth", "mode": "sometimes", "effect": "target_setpoint"}]
    })");
    cli::DetectArgs args;
    args.common.config_path = config;
    args.events_path = "unused";
    args.requests_path = "unused";
    args.out_path = "unused";
    std::ostringstream out, err;
    CHECK(cli::cmd_detect(args, out, err) == cli::exit_usage);
    const std::string text = err.str();
    CHECK(text.find("air_density") != std::string::npos);
    CHECK(text.find("temporal threshold") != std::string::npos);
    CHECK(text.find("unknown property 'warmth'") != std::string::npos);
    CHECK(text.find("unknown mode 'sometimes'") != std::string::npos);
}

TEST_CASE("a request in an unknown room is a config error") {
    TempDir dir;
    const std::string events = dir.file("events.csv", "event_id,service,attribute,value,start,end,location,user\n");
    const std::string requests = dir.file(
        "requests.jsonl",
        R"({"request_id":"r","service":"ac","user":"R1","location":"attic","start":"2011-07-20T20:00:00.000","end":"2011-07-20T21:00:00.000","qualities":{"temperature":20.0}})"
        "\n");
    cli::DetectArgs args;
    args.events_path = events;
    args.requests_path = requests;
    args.out_path = dir.sub("report.jsonl");
    std::ostringstream out, err;
    CHECK(cli::cmd_detect(args, out, err) == cli::exit_usage);
    CHECK(err.str().find("no room context for location 'attic'") != std::string::npos);
}

TEST_CASE("synthetic evaluation writes metrics and the mae table") {
    TempDir dir;
    cli::EvaluateArgs args;
    args.synthetic = true;
    args.out_dir = dir.sub("eval");
    std::ostringstream out, err;
    CHECK(cli::cmd_evaluate(args, out, err) == cli::exit_ok);
    const std::string metrics = slurp(dir.sub("eval") + "/metrics.json");
    CHECK(metrics.find("\"accuracy\"") != std::string::npos);
    CHECK(metrics.find("\"config_hash\"") != std::string::npos);
    const std::string mae = slurp(dir.sub("eval") + "/mae.csv");
    CHECK(mae.find("property,conflict_mean") != std::string::npos);
    CHECK(mae.find("temperature,") != std::string::npos);
}

TEST_CASE("sweep emits one row per grid point") {
    TempDir dir;
    cli::SweepArgs args;
    args.synthetic = true;
    args.grid = "3x3";
    args.out_path = dir.sub("sweep.csv");
    std::ostringstream out, err;
    CHECK(cli::cmd_sweep(args, out, err) == cli::exit_ok);
    const std::string csv = slurp(args.out_path);
    CHECK(line_count(csv) == 11); // metadata + header + 9 rows
    CHECK(csv.find("tau_t,tau_p,accuracy") != std::string::npos);

    args.grid = "0x3";
    std::ostringstream out2, err2;
    CHECK(cli::cmd_sweep(args, out2, err2) == cli::exit_usage);
}

TEST_CASE("explain surfaces the stepping illumination trace") {
    TempDir dir;
    const std::string events = dir.file("events.csv", "event_id,service,attribute,value,start,end,location,user\n");
    const std::string requests = dir.file(
        "requests.jsonl",
        R"({"request_id":"sr-light","service":"light","user":"R1","location":"living","start":"2011-07-20T08:00:00.000","end":"2011-07-20T10:00:00.000","qualities":{"illumination":10.0}}
{"request_id":"sr-blind","service":"blind","user":"R2","location":"living","start":"2011-07-20T08:30:00.000","end":"2011-07-20T09:30:00.000","qualities":{}}
)");
    cli::ExplainArgs args;
    args.events_path = events;
    args.requests_path = requests;
    args.out_dir = dir.sub("explain");
    std::ostringstream out, err;
    CHECK(cli::cmd_explain(args, out, err) == cli::exit_ok);

    std::ifstream signal_csv(dir.sub("explain") + "/signal.csv");
    std::string line;
    std::getline(signal_csv, line); // metadata
    std::getline(signal_csv, line); // header
    CHECK(line == "timestamp,property,value");
    std::vector<std::string> rows;
    while (std::getline(signal_csv, line)) rows.push_back(line);
    REQUIRE(rows.size() >= 2);
    // default config: 40 outdoor lux through a 0.5 blind on top of a 10 lux light
    CHECK(rows.front().find("2011-07-20T08:30:00.000,illumination,10") != std::string::npos);
    CHECK(rows.back().find("illumination,30") != std::string::npos);

    const std::string explain = slurp(dir.sub("explain") + "/explain.json");
    CHECK(explain.find("\"likelihood\"") != std::string::npos);
    CHECK(explain.find("\"pref_prox\"") != std::string::npos);
    CHECK(explain.find("\"temp_prox\"") != std::string::npos);

    const std::string bands = slurp(dir.sub("explain") + "/bands.csv");
    CHECK(bands.find("user,attribute,lo,hi,support,coverage") != std::string::npos);
}

TEST_CASE("requests jsonl round trips") {
    const auto day = make_timestamp(2011, 7, 20);
    std::vector<ServiceRequest> requests{
        fixtures::request("r1", "ac", "R1", "living", day + 20 * 3'600'000LL, day + 22 * 3'600'000LL,
                          {{"temperature", 20.0}}),
    };
    std::stringstream buffer;
    cli::write_requests_jsonl(buffer, requests);
    const auto back = cli::read_requests_jsonl(buffer);
    REQUIRE(back.size() == 1);
    CHECK(back[0].request_id == "r1");
    CHECK(back[0].quality_value("temperature") == 20.0);
    CHECK(back[0].interval == requests[0].interval);
}

TEST_CASE("config json round trips through parse") {
    const RunConfig cfg = default_config();
    const std::string text = config_to_json(cfg);
    std::vector<std::string> errors;
    const RunConfig back = config_from_json(text, errors);
    CHECK(errors.empty());
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(back.rules.size() == cfg.rules.size());
    CHECK(back.rooms.count("living") == 1);
}
