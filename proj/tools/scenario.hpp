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

#ifndef IFM_TOOLS_SCENARIO_HPP
#define IFM_TOOLS_SCENARIO_HPP

// Scenario configuration documents and result records for the ifm tool.
//
// A config is a JSON object:
//
//   {
//     "scenario": "ev_bomb",
//     "seed": 42,
//     "output_path": "ev_bomb.json",
//     "parameters": { "object_present": true, "trials": 1000000 }
//   }
//
// A result record is {"metadata": {...}, "payload": {...}}. Only metadata
// carries the timestamp and tool version, so payloads of identical runs are
// byte-identical.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ifm/errors.hpp"
#include "ifm/matter_mz.hpp"

namespace ifm::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Scenario {
    ev_bomb,
    zeno,
    matter_null,
    field_scan_electric,
    field_scan_magnetic,
    gravity_deflection,
};

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view name);
const std::vector<Scenario>& all_scenarios();

struct EvBombParams {
    bool object_present = true;
    std::string object_arm = "arm_m2";
    double arm_phase = 0.0;
    std::int64_t trials = 100000;
    bool operator==(const EvBombParams&) const = default;
};

struct ZenoParams {
    int n_cycles = 8;
    bool object_present = true;
    std::int64_t trials = 100000;
    bool operator==(const ZenoParams&) const = default;
};

struct MatterNullParams {
    GratingSpec g1 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    GratingSpec g2 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    GratingSpec g3 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    double arm_extra_phase = 0.0;
    bool block_upper = false;
    bool block_lower = false;
    std::int64_t trials = 100000;
    bool operator==(const MatterNullParams&) const = default;
};

struct ParticleParams {
    double charge = -4.8e-10;  // statC
    double mass = 9.11e-28;    // g
    double speed = 1.0e8;      // cm/s along the beam
    bool operator==(const ParticleParams&) const = default;
};

/// Keys shared by both field-scan scenarios.
struct ScanParams {
    ParticleParams particle;
    double path_length = 10.0;     // cm, first to second grating
    double path_separation = 1.0;  // cm between the two primary paths
    std::vector<double> positions;
    GratingSpec g1 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    GratingSpec g2 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    GratingSpec g3 = GratingSpec::from_orders(1.0 / 3, 1.0 / 3, 1.0 / 3);
    double phi_c = 1.0e-3;
    std::int64_t trials_per_position = 200;
    double confidence_target = 0.999;
    double dt = 1.0e-10;
    bool recalibrate = true;
    bool operator==(const ScanParams&) const = default;
};

struct ElectricScanParams {
    ScanParams scan;
    double source_charge = 1.0e-5;  // statC
    bool operator==(const ElectricScanParams&) const = default;
};

struct MagneticScanParams {
    ScanParams scan;
    double field_gauss = 0.5;
    double region_half_length = 2.0;
    double region_half_width = 1.5;
    double region_half_height = 1.0;
    bool operator==(const MagneticScanParams&) const = default;
};

struct GravityParams {
    double delta_phi = 1.0e-9;
    double density = 22.6;
    std::optional<double> mass;
    std::optional<double> impact_parameter;
    bool operator==(const GravityParams&) const = default;
};

using Parameters = std::variant<EvBombParams, ZenoParams, MatterNullParams, ElectricScanParams,
                                MagneticScanParams, GravityParams>;

struct ScenarioConfig {
    Parameters parameters;
    std::uint64_t seed = 0;
    std::string output_path;

    Scenario scenario() const { return static_cast<Scenario>(parameters.index()); }
    bool operator==(const ScenarioConfig&) const = default;
};

struct ValidationError {
    std::string path;
    std::string message;
};

/// Every problem found in a config document, not just the first.
class ConfigError : public Error {
  public:
    explicit ConfigError(std::vector<ValidationError> errors);
    const std::vector<ValidationError>& errors() const { return errors_; }

  private:
    std::vector<ValidationError> errors_;
};

/// Config with every parameter at its default (seed 0).
ScenarioConfig default_config(Scenario scenario);

ScenarioConfig parse_config(const nlohmann::json& document);
/// Throws ConfigError (with a single "<document>" entry) on malformed JSON.
ScenarioConfig parse_config(std::string_view text);

nlohmann::json emit_config(const ScenarioConfig& config);

struct ResultRecord {
    nlohmann::json metadata;
    nlohmann::json payload;
    std::string summary;
    /// Per-position CSV rows for scan scenarios; empty otherwise.
    std::string scan_table;

    std::string payload_text() const { return payload.dump(2); }
    std::string record_text() const;
};

/// Dispatches to the core library. Library errors propagate with the scenario
/// name prepended.
ResultRecord run_scenario(const ScenarioConfig& config);

/// Record at `path`; the scan table (if any) next to it as <stem>.scan.csv.
/// Returns the paths written.
std::vector<std::string> write_outputs(const ResultRecord& record, const std::string& path);

/// Value with 12 significant digits, as emitted in records.
double round_sig12(double value);

}  // namespace ifm::cli

#endif  // IFM_TOOLS_SCENARIO_HPP
