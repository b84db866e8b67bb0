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

#ifndef COHABIT_CLI_HPP
#define COHABIT_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cohabit/config.hpp"

namespace cohabit::cli {

// Exit codes: 0 success; 1 gate mode with at least one conflict; 2 usage or
// config errors.
inline constexpr int exit_ok = 0;
inline constexpr int exit_gate_conflict = 1;
inline constexpr int exit_usage = 2;

struct CommonArgs {
    std::string config_path;            // empty: built-in defaults
    std::optional<std::uint64_t> seed;  // overrides the config seed
};

/// Loads the config (or defaults), applies the seed override, and reports
/// every validation problem. Returns nullopt after printing errors.
std::optional<RunConfig> resolve_config(const CommonArgs& args, std::ostream& err);

struct IngestArgs {
    CommonArgs common;
    std::vector<std::string> logs;   // one CASAS text file per resident
    std::vector<std::string> labels; // defaults to R1..Rn
    std::string out_dir;
    bool do_augment = false;
};
int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err);

struct DetectArgs {
    CommonArgs common;
    std::string events_path;   // canonical event CSV (history)
    std::string requests_path; // JSON lines of current requests
    std::string out_path;      // conflict report JSONL
    bool gate = false;
    bool no_preference = false;
};
int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err);

struct EvaluateArgs {
    CommonArgs common;
    bool synthetic = false;
    std::string events_path; // used when not synthetic
    std::string out_dir;
    bool no_preference = false;
};
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
    CommonArgs common;
    bool synthetic = false;
    std::string events_path;
    std::string out_path;
    std::string grid = "5x5"; // tau_t steps x tau_p steps over [0,1]
    bool no_preference = false;
};
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

struct ExplainArgs {
    CommonArgs common;
    std::string events_path;
    std::string requests_path;
    std::string out_dir;
    int pair_first = -1; // indices into the request list; -1: first viable pair
    int pair_second = -1;
};
int cmd_explain(const ExplainArgs& args, std::ostream& out, std::ostream& err);

/// Requests JSONL: one object per line with request_id, service, user,
/// location, start, end and a qualities object.
std::vector<ServiceRequest> read_requests_jsonl(std::istream& in);
void write_requests_jsonl(std::ostream& out, const std::vector<ServiceRequest>& requests);

} // namespace cohabit::cli

#endif
