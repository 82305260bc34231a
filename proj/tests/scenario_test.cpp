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

#include "scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace ifm::cli {
namespace {

using nlohmann::json;

bool has_error_at(const ConfigError& e, const std::string& path) {
    return std::any_of(e.errors().begin(), e.errors().end(),
                       [&](const ValidationError& v) { return v.path == path; });
}

ConfigError parse_failure(const json& document) {
    try {
        parse_config(document);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "config unexpectedly valid: " << document.dump();
    return ConfigError({});
}

json electric_document() {
    json doc = emit_config(default_config(Scenario::field_scan_electric));
    doc["seed"] = 3;
    return doc;
}

TEST(ParseConfig, MinimalEvBombIsValid) {
    const auto config = parse_config(std::string_view(
        R"({"scenario": "ev_bomb", "seed": 42, "parameters": {"object_present": true}})"));
    ASSERT_EQ(config.scenario(), Scenario::ev_bomb);
    EXPECT_EQ(config.seed, 42u);
    EXPECT_TRUE(std::get<EvBombParams>(config.parameters).object_present);
    EXPECT_EQ(config.output_path, "ev_bomb.json");
}

TEST(ParseConfig, MissingSeedNamesTheField) {
    const auto e = parse_failure(
        json::parse(R"({"scenario": "ev_bomb", "parameters": {"object_present": true}})"));
    EXPECT_TRUE(has_error_at(e, "seed"));
    EXPECT_NE(std::string(e.what()).find("seed"), std::string::npos);
}

TEST(ParseConfig, ZeroTrialsPerPositionIsRangeError) {
    json doc = electric_document();
    doc["parameters"]["trials_per_position"] = 0;
    const auto e = parse_failure(doc);
    ASSERT_EQ(e.errors().size(), 1u) << e.what();
    EXPECT_EQ(e.errors()[0].path, "parameters.trials_per_position");
    EXPECT_NE(e.errors()[0].message.find(">= 1"), std::string::npos);
}

TEST(ParseConfig, ReportsEveryError) {
    json doc = electric_document();
    doc.erase("seed");
    doc["parameters"]["trials_per_position"] = 0;
    doc["parameters"]["phi_c"] = -1.0;
    doc["parameters"]["g1"]["p_0"] = 1.5;
    doc["parameters"]["positions"] = {3.0, 4.0};
    doc["parameters"]["colour"] = "blue";
    const auto e = parse_failure(doc);
    for (const char* path :
         {"seed", "parameters.trials_per_position", "parameters.phi_c", "parameters.g1.p_0",
          "parameters.positions[1]", "parameters.colour"}) {
        EXPECT_TRUE(has_error_at(e, path)) << path;
    }
}

TEST(ParseConfig, UnknownScenario) {
    const auto e =
        parse_failure(json::parse(R"({"scenario": "teleport", "seed": 1, "parameters": {}})"));
    EXPECT_TRUE(has_error_at(e, "scenario"));
}

TEST(ParseConfig, SeedMustBeUnsigned) {
    json doc = emit_config(default_config(Scenario::zeno));
    doc["seed"] = -5;
    EXPECT_TRUE(has_error_at(parse_failure(doc), "seed"));
    doc["seed"] = 1.5;
    EXPECT_TRUE(has_error_at(parse_failure(doc), "seed"));
    doc["seed"] = std::uint64_t{18446744073709551615u};
    EXPECT_EQ(parse_config(doc).seed, 18446744073709551615u);
}

TEST(ParseConfig, MalformedText) {
    try {
        parse_config(std::string_view("{\"scenario\": "));
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_TRUE(has_error_at(e, "<document>"));
    }
}

TEST(ParseConfig, GratingsMustNotExceedUnitTotal) {
    json doc = emit_config(default_config(Scenario::matter_null));
    doc["parameters"]["g2"] = {{"p_minus1", 0.5}, {"p_0", 0.4}, {"p_plus1", 0.3}};
    EXPECT_TRUE(has_error_at(parse_failure(doc), "parameters.g2"));
}

TEST(ParseConfig, SpeedMustBeNonRelativistic) {
    json doc = electric_document();
    doc["parameters"]["particle"]["speed"] = 1e9;
    EXPECT_TRUE(has_error_at(parse_failure(doc), "parameters.particle.speed"));
}

ScenarioConfig random_config(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> count(1, 1'000'000);
    auto grating = [&] {
        const double a = u(gen) / 3.0;
        const double b = u(gen) / 3.0;
        return GratingSpec::from_orders(u(gen) * (1.0 - a - b), a, b);
    };
    auto scan = [&] {
        ScanParams p;
        p.particle.charge = (u(gen) - 0.5) * 1e-9;
        p.particle.speed = 1e6 + u(gen) * 1e8;
        p.path_length = 1.0 + 20.0 * u(gen);
        double d = 10.0 + 100.0 * u(gen);
        for (int i = 0, n = 1 + static_cast<int>(u(gen) * 12); i < n; ++i) {
            p.positions.push_back(d);
            d *= 0.3 + 0.6 * u(gen);
        }
        p.g1 = grating();
        p.g2 = grating();
        p.g3 = grating();
        p.phi_c = 1e-5 + u(gen);
        p.trials_per_position = count(gen);
        p.confidence_target = 0.01 + 0.98 * u(gen);
        p.dt = 1e-12 + 1e-9 * u(gen);
        p.recalibrate = u(gen) < 0.5;
        return p;
    };

    ScenarioConfig c = default_config(static_cast<Scenario>(pick(gen)));
    c.seed = gen();
    c.output_path = "out/run_" + std::to_string(gen() % 1000) + ".json";
    std::visit(
        [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, EvBombParams>) {
                p.object_present = u(gen) < 0.5;
                p.object_arm = u(gen) < 0.5 ? "arm_m1" : "arm_m2";
                p.arm_phase = 10.0 * (u(gen) - 0.5);
                p.trials = count(gen);
            } else if constexpr (std::is_same_v<T, ZenoParams>) {
                p.n_cycles = 1 + static_cast<int>(u(gen) * 500);
                p.object_present = u(gen) < 0.5;
                p.trials = count(gen);
            } else if constexpr (std::is_same_v<T, MatterNullParams>) {
                p.g1 = grating();
                p.g2 = grating();
                p.g3 = grating();
                p.arm_extra_phase = 7.0 * u(gen);
                p.block_upper = u(gen) < 0.5;
                p.block_lower = u(gen) < 0.5;
                p.trials = count(gen);
            } else if constexpr (std::is_same_v<T, ElectricScanParams>) {
                p.scan = scan();
                p.source_charge = (u(gen) - 0.5) * 1e-3;
            } else if constexpr (std::is_same_v<T, MagneticScanParams>) {
                p.scan = scan();
                p.field_gauss = 5.0 * u(gen);
                p.region_half_length = 0.1 + u(gen);
            } else {
                p.delta_phi = 1e-12 + u(gen) * 1e-6;
                p.density = 0.1 + 30.0 * u(gen);
                if (u(gen) < 0.5) {
                    p.mass = 1e33 * u(gen);
                    p.impact_parameter = 1e10 * (0.01 + u(gen));
                }
            }
        },
        c.parameters);
    return c;
}

TEST(ConfigProperty, ParseOfEmitIsIdentity) {
    std::mt19937_64 gen(20261015);
    for (int i = 0; i < 500; ++i) {
        const ScenarioConfig c = random_config(gen);
        const json emitted = emit_config(c);
        EXPECT_EQ(parse_config(emitted), c) << emitted.dump();
        EXPECT_EQ(parse_config(std::string_view(emitted.dump())), c);
    }
}

TEST(ConfigProperty, EveryDefaultParses) {
    for (Scenario s : all_scenarios()) {
        EXPECT_EQ(parse_config(emit_config(default_config(s))), default_config(s)) << to_string(s);
        EXPECT_EQ(scenario_from_string(to_string(s)), s);
    }
}

TEST(RoundSig12, KeepsTwelveDigits) {
    EXPECT_EQ(round_sig12(0.1234567890123456), 0.123456789012);
    EXPECT_EQ(round_sig12(-2.0 / 3.0), -0.666666666667);
    EXPECT_EQ(round_sig12(0.0), 0.0);
    EXPECT_EQ(round_sig12(1e300), 1e300);
}

TEST(RunScenario, EvBombDarkFractionNearQuarter) {
    ScenarioConfig c = default_config(Scenario::ev_bomb);
    c.seed = 11;
    std::get<EvBombParams>(c.parameters).trials = 1'000'000;
    const ResultRecord r = run_scenario(c);
    const double dd = r.payload["monte_carlo"]["dark_fraction"].get<double>();
    // 4 sigma of a binomial(1e6, 0.25) fraction.
    EXPECT_NEAR(dd, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / 1e6));
    EXPECT_DOUBLE_EQ(r.payload["analytic"]["p_dark_detector"].get<double>(), 0.25);
    EXPECT_EQ(r.payload["monte_carlo"]["trials"].get<std::int64_t>(), 1'000'000);
}

TEST(RunScenario, GravityReportsBothRadii) {
    ScenarioConfig c = default_config(Scenario::gravity_deflection);
    const ResultRecord r = run_scenario(c);
    const json& a = r.payload["analytic"];
    EXPECT_NEAR(a["radius_km"].get<double>(), 1887.68627374, 1e-6);
    EXPECT_EQ(a["quoted_radius_km"].get<double>(), 18900.0);
    EXPECT_NEAR(a["quoted_over_computed"].get<double>(), 10.0122569428, 1e-9);
    EXPECT_NEAR(a["round_trip_deflection"].get<double>(), 1e-9, 1e-20);
    EXPECT_NE(r.summary.find("18900"), std::string::npos);
}

TEST(RunScenario, PayloadIsDeterministic) {
    for (Scenario s : all_scenarios()) {
        ScenarioConfig c = default_config(s);
        c.seed = 99;
        const ResultRecord a = run_scenario(c);
        const ResultRecord b = run_scenario(c);
        EXPECT_EQ(a.payload_text(), b.payload_text()) << to_string(s);
        EXPECT_EQ(a.scan_table, b.scan_table) << to_string(s);
        EXPECT_FALSE(a.payload.contains("timestamp"));
        EXPECT_EQ(a.metadata["tool_version"].get<std::string>(), std::string(kToolVersion));
    }
}

TEST(RunScenario, SeedChangesCounts) {
    ScenarioConfig c = default_config(Scenario::ev_bomb);
    c.seed = 1;
    const auto a = run_scenario(c).payload["monte_carlo"];
    c.seed = 2;
    const auto b = run_scenario(c).payload["monte_carlo"];
    EXPECT_NE(a, b);
}

TEST(RunScenario, ElectricScanWritesTable) {
    ScenarioConfig c = default_config(Scenario::field_scan_electric);
    c.seed = 5;
    const ResultRecord r = run_scenario(c);
    const auto& positions = r.payload["scan"]["positions"];
    const auto lines = std::count(r.scan_table.begin(), r.scan_table.end(), '\n');
    EXPECT_EQ(static_cast<std::size_t>(lines), positions.size() + 1);
    EXPECT_TRUE(r.payload["scan"]["conclusive"].get<bool>());
    EXPECT_FALSE(r.payload["analytic"]["critical_distance_cm"].is_null());
}

TEST(RunScenario, ModuleErrorsCarryScenarioName) {
    ScenarioConfig c = default_config(Scenario::ev_bomb);
    std::get<EvBombParams>(c.parameters).trials = 0;
    try {
        run_scenario(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(std::string(e.what()).rfind("ev_bomb: ", 0), 0u) << e.what();
    }
}

}  // namespace
}  // namespace ifm::cli
