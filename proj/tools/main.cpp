// Copyright 2026 The IFM Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ifm: run interaction-free measurement scenarios from the command line.
//
//   ifm ev_bomb --seed 7 --trials 1000000
//   ifm field_scan_electric --seed 1 --set source_charge=2e-5 --output scan.json
//   ifm run config.json
//   ifm config zeno > zeno.json

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenario.hpp"

namespace {

using nlohmann::json;
using namespace ifm::cli;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::int64_t> trials;
    std::vector<std::string> sets;
    bool quiet = false;
};

std::string trials_key(Scenario s) {
    switch (s) {
        case Scenario::field_scan_electric:
        case Scenario::field_scan_magnetic: return "trials_per_position";
        case Scenario::gravity_deflection: return "";
        default: return "trials";
    }
}

// key=value with a dotted key relative to "parameters"; the value is JSON if
// it parses as JSON, otherwise a plain string.
void apply_set(json& parameters, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(std::vector<ValidationError>{{"--set", "expected key=value, got '" + assignment + "'"}});
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    json* node = &parameters;
    std::stringstream parts(key);
    std::string part;
    std::vector<std::string> path;
    while (std::getline(parts, part, '.')) path.push_back(part);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        node = &(*node)[path[i]];
        if (!node->is_object()) *node = json::object();
    }
    (*node)[path.back()] = std::move(value);
}

void apply_overrides(json& document, Scenario scenario, const Overrides& o) {
    if (o.seed) document["seed"] = *o.seed;
    if (o.output) document["output_path"] = *o.output;
    if (o.trials) {
        const std::string key = trials_key(scenario);
        if (key.empty()) {
            throw ConfigError(std::vector<ValidationError>{{"--trials", "gravity_deflection has no trials"}});
        }
        document["parameters"][key] = *o.trials;
    }
    for (const auto& s : o.sets) apply_set(document["parameters"], s);
}

int execute(const json& document) {
    const ScenarioConfig config = parse_config(document);
    const ResultRecord record = run_scenario(config);
    const auto written = write_outputs(record, config.output_path);
    std::cout << record.summary;
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interaction-free measurement simulator"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Overrides overrides;
    std::optional<Scenario> chosen;
    std::string config_path;
    std::string config_scenario;

    for (Scenario s : all_scenarios()) {
        const std::string name(to_string(s));
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " scenario");
        sub->add_option("--seed", overrides.seed, "RNG seed")->required();
        sub->add_option("--output,-o", overrides.output, "Result record path");
        if (!trials_key(s).empty()) {
            sub->add_option("--trials", overrides.trials, "Trials (per position for scans)")
                ->check(CLI::PositiveNumber);
        }
        sub->add_option("--set", overrides.sets, "Parameter override key=value (repeatable)");
        sub->callback([&chosen, s] { chosen = s; });
    }

    CLI::App* run = app.add_subcommand("run", "Run a JSON config file");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", overrides.seed, "Override the config seed");
    run->add_option("--output,-o", overrides.output, "Override the output path");
    run->add_option("--trials", overrides.trials, "Override the trial count")
        ->check(CLI::PositiveNumber);

    CLI::App* config = app.add_subcommand("config", "Print a default config");
    config->add_option("scenario", config_scenario, "Scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (config->parsed()) {
            const auto s = scenario_from_string(config_scenario);
            if (!s) {
                throw ConfigError(std::vector<ValidationError>{{"scenario", "unknown scenario '" + config_scenario + "'"}});
            }
            std::cout << emit_config(default_config(*s)).dump(2) << "\n";
            return 0;
        }
        if (run->parsed()) {
            std::ifstream in(config_path, std::ios::binary);
            std::stringstream buffer;
            buffer << in.rdbuf();
            json document = json::parse(buffer.str(), nullptr, false);
            if (document.is_discarded()) {
                throw ConfigError(std::vector<ValidationError>{{"<document>", "malformed JSON in " + config_path}});
            }
            if (document.is_object() && document.contains("scenario") &&
                document["scenario"].is_string()) {
                if (const auto s = scenario_from_string(document["scenario"].get<std::string>())) {
                    apply_overrides(document, *s, overrides);
                }
            }
            return execute(document);
        }
        json document = emit_config(default_config(*chosen));
        apply_overrides(document, *chosen, overrides);
        return execute(document);
    } catch (const ConfigError& e) {
        std::cerr << "ifm: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "ifm: " << e.what() << "\n";
        return kExitRuntime;
    }
}
