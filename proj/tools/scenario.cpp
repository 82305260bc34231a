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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ifm/fields.hpp"
#include "ifm/photon_mz.hpp"
#include "ifm/protocol.hpp"
#include "ifm/rng.hpp"

namespace ifm::cli {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array<std::string_view, 6> kScenarioNames{
    "ev_bomb",           "zeno",  "matter_null", "field_scan_electric", "field_scan_magnetic",
    "gravity_deflection"};

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Reading

using Check = std::function<std::optional<std::string>(double)>;

Check positive() {
    return [](double v) -> std::optional<std::string> {
        if (v > 0.0) return std::nullopt;
        return "must be > 0";
    };
}

Check in_unit_interval() {
    return [](double v) -> std::optional<std::string> {
        if (v >= 0.0 && v <= 1.0) return std::nullopt;
        return "must lie in [0, 1]";
    };
}

Check open_unit_interval() {
    return [](double v) -> std::optional<std::string> {
        if (v > 0.0 && v < 1.0) return std::nullopt;
        return "must lie in (0, 1)";
    };
}

// Walks one JSON object, recording every problem with its dotted path.
class Reader {
  public:
    Reader(const json* object, std::string path, std::vector<ValidationError>& errors)
        : object_(object), path_(std::move(path)), errors_(errors) {
        if (object_ != nullptr && !object_->is_object()) {
            error("", "must be an object");
            object_ = nullptr;
        }
    }

    std::string where(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    void error(std::string_view key, std::string message) {
        errors_.push_back({key.empty() ? path_ : where(key), std::move(message)});
    }

    const json* find(std::string_view key, bool required) {
        seen_.insert(std::string(key));
        if (object_ == nullptr) {
            return nullptr;
        }
        auto it = object_->find(key);
        if (it == object_->end()) {
            if (required) error(key, "is required");
            return nullptr;
        }
        return &*it;
    }

    bool boolean(std::string_view key, std::optional<bool> fallback) {
        const json* v = find(key, !fallback);
        if (v == nullptr) return fallback.value_or(false);
        if (!v->is_boolean()) {
            error(key, "must be a boolean");
            return fallback.value_or(false);
        }
        return v->get<bool>();
    }

    double number(std::string_view key, std::optional<double> fallback, const Check& check = {}) {
        const json* v = find(key, !fallback);
        if (v == nullptr) return fallback.value_or(0.0);
        if (!v->is_number()) {
            error(key, "must be a number");
            return fallback.value_or(0.0);
        }
        const double x = v->get<double>();
        if (!std::isfinite(x)) {
            error(key, "must be finite");
        } else if (check) {
            if (auto problem = check(x)) error(key, *problem);
        }
        return x;
    }

    std::optional<double> optional_number(std::string_view key, const Check& check = {}) {
        if (object_ == nullptr || !object_->contains(key)) {
            seen_.insert(std::string(key));
            return std::nullopt;
        }
        return number(key, 0.0, check);
    }

    std::int64_t integer(std::string_view key, std::optional<std::int64_t> fallback,
                         std::int64_t minimum) {
        const json* v = find(key, !fallback);
        if (v == nullptr) return fallback.value_or(minimum);
        if (!v->is_number_integer()) {
            error(key, "must be an integer");
            return fallback.value_or(minimum);
        }
        const auto x = v->get<std::int64_t>();
        if (x < minimum) {
            error(key, "must be >= " + std::to_string(minimum));
        }
        return x;
    }

    std::string text(std::string_view key, std::optional<std::string> fallback) {
        const json* v = find(key, !fallback);
        if (v == nullptr) return fallback.value_or("");
        if (!v->is_string()) {
            error(key, "must be a string");
            return fallback.value_or("");
        }
        return v->get<std::string>();
    }

    std::vector<double> numbers(std::string_view key) {
        const json* v = find(key, true);
        std::vector<double> out;
        if (v == nullptr) return out;
        if (!v->is_array()) {
            error(key, "must be an array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& item = (*v)[i];
            if (!item.is_number()) {
                error(std::string(key) + "[" + std::to_string(i) + "]", "must be a number");
                continue;
            }
            out.push_back(item.get<double>());
        }
        return out;
    }

    Reader child(std::string_view key, bool required) {
        return Reader(find(key, required), where(key), errors_);
    }

    bool present() const { return object_ != nullptr; }

    void reject_unknown_keys() {
        if (object_ == nullptr) return;
        for (const auto& [key, value] : object_->items()) {
            if (!seen_.contains(key)) {
                error(key, "unknown key");
            }
        }
    }

  private:
    const json* object_;
    std::string path_;
    std::vector<ValidationError>& errors_;
    std::set<std::string, std::less<>> seen_;
};

GratingSpec read_grating(Reader& parent, std::string_view key, const GratingSpec& fallback) {
    Reader r = parent.child(key, false);
    if (!r.present()) {
        return fallback;
    }
    const double pm = r.number("p_minus1", std::nullopt, in_unit_interval());
    const double p0 = r.number("p_0", std::nullopt, in_unit_interval());
    const double pp = r.number("p_plus1", std::nullopt, in_unit_interval());
    r.reject_unknown_keys();
    if (pm + p0 + pp > 1.0 + kAlgebraTolerance) {
        parent.error(key, "diffraction probabilities sum to more than 1");
        return fallback;
    }
    try {
        return GratingSpec::from_orders(pm, p0, pp);
    } catch (const Error&) {
        return fallback;  // range problems already recorded above
    }
}

EvBombParams read_ev(Reader& r) {
    EvBombParams p;
    p.object_present = r.boolean("object_present", std::nullopt);
    p.object_arm = r.text("object_arm", p.object_arm);
    if (p.object_arm != kArmViaM1 && p.object_arm != kArmViaM2) {
        r.error("object_arm", "must be 'arm_m1' or 'arm_m2'");
    }
    p.arm_phase = r.number("arm_phase", p.arm_phase);
    p.trials = r.integer("trials", p.trials, 1);
    return p;
}

ZenoParams read_zeno(Reader& r) {
    ZenoParams p;
    const auto n = r.integer("n_cycles", std::nullopt, 1);
    if (n > 1'000'000) {
        r.error("n_cycles", "must be <= 1000000");
    }
    p.n_cycles = static_cast<int>(std::min<std::int64_t>(n, 1'000'000));
    p.object_present = r.boolean("object_present", std::nullopt);
    p.trials = r.integer("trials", p.trials, 1);
    return p;
}

MatterNullParams read_matter(Reader& r) {
    MatterNullParams p;
    p.g1 = read_grating(r, "g1", p.g1);
    p.g2 = read_grating(r, "g2", p.g2);
    p.g3 = read_grating(r, "g3", p.g3);
    p.arm_extra_phase = r.number("arm_extra_phase", p.arm_extra_phase);
    p.block_upper = r.boolean("block_upper", p.block_upper);
    p.block_lower = r.boolean("block_lower", p.block_lower);
    p.trials = r.integer("trials", p.trials, 1);
    return p;
}

ScanParams read_scan(Reader& r) {
    ScanParams p;
    {
        Reader particle = r.child("particle", false);
        p.particle.charge = particle.number("charge", p.particle.charge);
        p.particle.mass = particle.number("mass", p.particle.mass, positive());
        const PhysicalConstants k;
        p.particle.speed = particle.number("speed", p.particle.speed, [k](double v) {
            return v > 0.0 && v < 0.01 * k.c ? std::nullopt
                                             : std::optional<std::string>("must lie in (0, 0.01 c)");
        });
        particle.reject_unknown_keys();
    }
    p.path_length = r.number("path_length", p.path_length, positive());
    p.path_separation = r.number("path_separation", p.path_separation, positive());
    p.positions = r.numbers("positions");
    if (r.present() && p.positions.empty()) {
        r.error("positions", "must not be empty");
    }
    for (std::size_t i = 0; i < p.positions.size(); ++i) {
        const std::string key = "positions[" + std::to_string(i) + "]";
        if (!(p.positions[i] > 0.0)) {
            r.error(key, "must be > 0");
        }
        if (i > 0 && !(p.positions[i] < p.positions[i - 1])) {
            r.error(key, "positions must strictly decrease (source approaches the beam)");
        }
    }
    p.g1 = read_grating(r, "g1", p.g1);
    p.g2 = read_grating(r, "g2", p.g2);
    p.g3 = read_grating(r, "g3", p.g3);
    p.phi_c = r.number("phi_c", p.phi_c, positive());
    p.trials_per_position = r.integer("trials_per_position", std::nullopt, 1);
    p.confidence_target = r.number("confidence_target", p.confidence_target, open_unit_interval());
    p.dt = r.number("dt", p.dt, positive());
    p.recalibrate = r.boolean("recalibrate", p.recalibrate);
    return p;
}

GravityParams read_gravity(Reader& r) {
    GravityParams p;
    p.delta_phi = r.number("delta_phi", p.delta_phi, positive());
    p.density = r.number("density", p.density, positive());
    p.mass = r.optional_number("mass", [](double m) {
        return m >= 0.0 ? std::nullopt : std::optional<std::string>("must be >= 0");
    });
    p.impact_parameter = r.optional_number("impact_parameter", positive());
    if (p.mass.has_value() != p.impact_parameter.has_value()) {
        r.error(p.mass ? "impact_parameter" : "mass",
                "mass and impact_parameter must be given together");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Emitting

json grating_json(const GratingSpec& g) {
    return {{"p_minus1", g.p_minus1}, {"p_0", g.p_0}, {"p_plus1", g.p_plus1}};
}

json scan_json(const ScanParams& p) {
    return {
        {"particle",
         {{"charge", p.particle.charge}, {"mass", p.particle.mass}, {"speed", p.particle.speed}}},
        {"path_length", p.path_length},
        {"path_separation", p.path_separation},
        {"positions", p.positions},
        {"g1", grating_json(p.g1)},
        {"g2", grating_json(p.g2)},
        {"g3", grating_json(p.g3)},
        {"phi_c", p.phi_c},
        {"trials_per_position", p.trials_per_position},
        {"confidence_target", p.confidence_target},
        {"dt", p.dt},
        {"recalibrate", p.recalibrate},
    };
}

json parameters_json(const Parameters& parameters) {
    return std::visit(
        overloaded{
            [](const EvBombParams& p) -> json {
                return {{"object_present", p.object_present},
                        {"object_arm", p.object_arm},
                        {"arm_phase", p.arm_phase},
                        {"trials", p.trials}};
            },
            [](const ZenoParams& p) -> json {
                return {{"n_cycles", p.n_cycles},
                        {"object_present", p.object_present},
                        {"trials", p.trials}};
            },
            [](const MatterNullParams& p) -> json {
                return {{"g1", grating_json(p.g1)},
                        {"g2", grating_json(p.g2)},
                        {"g3", grating_json(p.g3)},
                        {"arm_extra_phase", p.arm_extra_phase},
                        {"block_upper", p.block_upper},
                        {"block_lower", p.block_lower},
                        {"trials", p.trials}};
            },
            [](const ElectricScanParams& p) -> json {
                json j = scan_json(p.scan);
                j["source_charge"] = p.source_charge;
                return j;
            },
            [](const MagneticScanParams& p) -> json {
                json j = scan_json(p.scan);
                j["field_gauss"] = p.field_gauss;
                j["region_half_length"] = p.region_half_length;
                j["region_half_width"] = p.region_half_width;
                j["region_half_height"] = p.region_half_height;
                return j;
            },
            [](const GravityParams& p) -> json {
                json j = {{"delta_phi", p.delta_phi}, {"density", p.density}};
                if (p.mass) j["mass"] = *p.mass;
                if (p.impact_parameter) j["impact_parameter"] = *p.impact_parameter;
                return j;
            },
        },
        parameters);
}

// ---------------------------------------------------------------------------
// Running

json r12(double v) { return std::isfinite(v) ? json(round_sig12(v)) : json(nullptr); }

json fraction(std::int64_t count, std::int64_t total) {
    return r12(static_cast<double>(count) / static_cast<double>(total));
}

ResultRecord start_record(const ScenarioConfig& config) {
    ResultRecord rec;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    rec.metadata = {{"tool", "ifm"}, {"tool_version", kToolVersion}, {"timestamp", stamp}};
    rec.payload = {{"scenario", to_string(config.scenario())},
                   {"seed", config.seed},
                   {"parameters", parameters_json(config.parameters)}};
    return rec;
}

void run_ev(const ScenarioConfig& config, const EvBombParams& p, ResultRecord& rec) {
    const EvSetup setup{p.object_present, p.object_arm, p.arm_phase};
    const EvDistribution d = ev_outcome_distribution(setup);
    RngStream rng(config.seed);
    const EvCounts c = run_ev_trials(setup, p.trials, rng);
    rec.payload["analytic"] = {{"p_light_detector", r12(d.p_light_detector)},
                               {"p_dark_detector", r12(d.p_dark_detector)},
                               {"p_absorbed", r12(d.p_absorbed)}};
    rec.payload["monte_carlo"] = {{"trials", p.trials},
                                  {"light_detector", c.light_detector},
                                  {"dark_detector", c.dark_detector},
                                  {"absorbed", c.absorbed},
                                  {"light_fraction", fraction(c.light_detector, p.trials)},
                                  {"dark_fraction", fraction(c.dark_detector, p.trials)},
                                  {"absorbed_fraction", fraction(c.absorbed, p.trials)}};
    std::ostringstream s;
    s << "Bomb test (object " << (p.object_present ? "present in " + p.object_arm : "absent")
      << ", arm phase " << fmt12(p.arm_phase) << ")\n"
      << "  analytic   LD " << fmt12(d.p_light_detector) << "  DD " << fmt12(d.p_dark_detector)
      << "  absorbed " << fmt12(d.p_absorbed) << "\n"
      << "  " << p.trials << " photons: LD " << c.light_detector << "  DD " << c.dark_detector
      << "  absorbed " << c.absorbed << "\n";
    rec.summary = s.str();
}

void run_zeno(const ScenarioConfig& config, const ZenoParams& p, ResultRecord& rec) {
    const ZenoDistribution d = zeno_ifm_distribution(p.n_cycles, p.object_present);
    RngStream rng(config.seed);
    const ZenoCounts c = run_zeno_trials(p.n_cycles, p.object_present, p.trials, rng);
    rec.payload["analytic"] = {{"p_success_detect", r12(d.p_success_detect)},
                               {"p_absorbed", r12(d.p_absorbed)},
                               {"p_inconclusive", r12(d.p_inconclusive)},
                               {"closed_form_success", r12(zeno_success_closed_form(p.n_cycles))}};
    rec.payload["monte_carlo"] = {{"trials", p.trials},
                                  {"success", c.success},
                                  {"absorbed", c.absorbed},
                                  {"inconclusive", c.inconclusive}};
    std::ostringstream s;
    s << "Zeno interrogation, " << p.n_cycles << " cycles, object "
      << (p.object_present ? "present" : "absent") << "\n"
      << "  analytic   success " << fmt12(d.p_success_detect) << "  absorbed "
      << fmt12(d.p_absorbed) << "  inconclusive " << fmt12(d.p_inconclusive) << "\n"
      << "  " << p.trials << " photons: success " << c.success << "  absorbed " << c.absorbed
      << "  inconclusive " << c.inconclusive << "\n";
    rec.summary = s.str();
}

void run_matter(const ScenarioConfig& config, const MatterNullParams& p, ResultRecord& rec) {
    InterferometerModel model;
    model.g1 = p.g1;
    model.g2 = p.g2;
    model.g3 = p.g3;
    model.arm_extra_phase = p.arm_extra_phase;
    const NullSolution null = solve_ideal_offset(model);
    model.third_grating_phase = null.third_grating_phase;
    const PathBlockSet blocks{p.block_upper, p.block_lower};
    const double p_null = detector_probability(model, PathBlockSet::none());
    const double p_blocked = detector_probability(model, blocks);

    Complex amplitude{0.0, 0.0};
    for (Path path : {Path::upper, Path::lower}) {
        if (!blocks.blocks(path)) amplitude += path_amplitude(model, path);
    }
    const ModeState at_detector{{"detector", amplitude}};
    RngStream rng(config.seed);
    std::int64_t detections = 0;
    for (std::int64_t i = 0; i < p.trials; ++i) {
        detections += sample_outcome(at_detector, rng) == "detector";
    }

    rec.payload["analytic"] = {
        {"null",
         {{"third_grating_phase", r12(null.third_grating_phase)},
          {"perfect", null.perfect},
          {"residual", r12(null.residual)}}},
        {"detector_probability_no_blocks", r12(p_null)},
        {"detector_probability_with_blocks", r12(p_blocked)},
        {"ifm_efficiency", r12(ifm_efficiency(p.g1, p.g2))}};
    rec.payload["monte_carlo"] = {{"trials", p.trials}, {"detections", detections}};
    std::ostringstream s;
    s << "Three-grating interferometer\n"
      << "  null at third-grating phase " << fmt12(null.third_grating_phase)
      << (null.perfect ? " (perfect)" : " (imperfect, residual " + fmt12(null.residual) + ")")
      << "\n  detector probability: calibrated " << fmt12(p_null) << ", with blocks "
      << fmt12(p_blocked) << "\n  efficiency p1*p2 = " << fmt12(ifm_efficiency(p.g1, p.g2))
      << "\n  " << p.trials << " particles: " << detections << " detected\n";
    rec.summary = s.str();
}

struct ScanSetup {
    InterferometerModel model;
    TestParticle particle;
    ScanGeometry geometry;
    ScanConfig config;
};

ScanSetup build_scan(const ScanParams& p, std::uint64_t seed) {
    ScanSetup s;
    s.model.g1 = p.g1;
    s.model.g2 = p.g2;
    s.model.g3 = p.g3;
    s.model = with_ideal_offset(s.model);
    s.particle = {p.particle.charge, p.particle.mass, Vec3::Zero(), Vec3(p.particle.speed, 0, 0)};
    s.geometry.beam.anchor = Vec3(p.path_length / 2.0, 0.0, 0.0);
    s.geometry.beam.approach_direction = Vec3::UnitY();
    s.geometry.beam.exit_plane_x = p.path_length;
    s.geometry.beam.dt = p.dt;
    s.geometry.path_separation = p.path_separation;
    s.config.positions = p.positions;
    s.config.trials_per_position = p.trials_per_position;
    s.config.confidence_target = p.confidence_target;
    s.config.phi_c = p.phi_c;
    s.config.seed = seed;
    if (p.recalibrate) {
        s.config.cage_transit_time = p.path_length / p.particle.speed;
    }
    return s;
}

void run_scan(const ScenarioConfig& config, const ScanParams& p, const FieldSource& source,
              const char* field_unit, ResultRecord& rec) {
    const ScanSetup setup = build_scan(p, config.seed);
    const ScanResult result = run_field_scan(setup.model, source, setup.particle, setup.geometry,
                                             setup.config);

    json analytic = {{"single_trial_efficiency", r12(result.single_trial_efficiency)},
                     {"field_unit", field_unit}};
    if (result.single_trial_efficiency > 0.0) {
        analytic["required_trials_for_confidence"] =
            required_trials(result.single_trial_efficiency, p.confidence_target);
    }
    try {
        const double d_c = critical_distance(setup.particle, source, setup.geometry.beam, p.phi_c,
                                             {p.positions.back(), p.positions.front()});
        analytic["critical_distance_cm"] = r12(d_c);
        analytic["critical_field"] = r12(field_magnitude(
            source.at(setup.geometry.beam.source_position(d_c)), setup.geometry.beam.anchor));
    } catch (const Error& e) {
        analytic["critical_distance_cm"] = nullptr;
        analytic["critical_distance_note"] = e.what();
    }
    rec.payload["analytic"] = analytic;

    json rows = json::array();
    std::ostringstream csv;
    csv << "index,distance_cm,deflection_rad,upper_blocked,detect_probability,trials,detections,"
           "field_magnitude,arm_extra_phase,third_grating_phase\n";
    std::int64_t total_trials = 0;
    std::int64_t total_detections = 0;
    for (std::size_t i = 0; i < result.per_position.size(); ++i) {
        const ScanPosition& row = result.per_position[i];
        total_trials += row.trials;
        total_detections += row.detections;
        rows.push_back({{"distance_cm", r12(row.distance)},
                        {"deflection_rad", r12(row.deflection_angle)},
                        {"upper_blocked", row.upper_blocked},
                        {"detect_probability", r12(row.detect_probability)},
                        {"trials", row.trials},
                        {"detections", row.detections},
                        {"field_magnitude", r12(row.field_magnitude)},
                        {"arm_extra_phase", r12(row.arm_extra_phase)},
                        {"third_grating_phase", r12(row.third_grating_phase)}});
        csv << i << ',' << fmt12(row.distance) << ',' << fmt12(row.deflection_angle) << ','
            << (row.upper_blocked ? 1 : 0) << ',' << fmt12(row.detect_probability) << ','
            << row.trials << ',' << row.detections << ',' << fmt12(row.field_magnitude) << ','
            << fmt12(row.arm_extra_phase) << ',' << fmt12(row.third_grating_phase) << '\n';
    }
    json scan = {{"conclusive", result.conclusive},
                 {"trials_sufficient", result.trials_sufficient},
                 {"first_detecting_position_cm", nullptr},
                 {"field_bound", nullptr},
                 {"positions", rows}};
    if (result.first_detecting_position) {
        scan["first_detecting_position_cm"] = r12(*result.first_detecting_position);
    }
    if (result.field_bound) {
        scan["field_bound"] = {{"lower_bound", r12(result.field_bound->lower_bound)},
                               {"error", result.field_bound->error
                                             ? r12(*result.field_bound->error)
                                             : json(nullptr)}};
    }
    rec.payload["scan"] = scan;
    rec.payload["monte_carlo"] = {{"trials", total_trials}, {"detections", total_detections}};
    rec.scan_table = csv.str();

    std::ostringstream s;
    s << "Field scan over " << result.per_position.size() << " of " << p.positions.size()
      << " positions, " << p.trials_per_position << " particles each (p1*p2 = "
      << fmt12(result.single_trial_efficiency) << ")\n";
    if (result.conclusive) {
        s << "  detection at " << fmt12(*result.first_detecting_position)
          << " cm: field at the order-1 path exceeds the critical value; |field| = "
          << fmt12(result.field_bound->lower_bound) << ' ' << field_unit;
        if (result.field_bound->error) {
            s << " (step error " << fmt12(*result.field_bound->error) << ')';
        }
        s << "\n";
    } else {
        s << "  no detection: field too weak to measure at every position"
          << (result.trials_sufficient ? "" : " (trials below the confidence requirement)")
          << "\n";
    }
    rec.summary = s.str();
}

void run_gravity(const GravityParams& p, ResultRecord& rec) {
    const double radius = sphere_radius_for_deflection(p.delta_phi, p.density);
    const double mass = sphere_mass(radius, p.density);
    const double radius_km = radius / 1e5;
    json analytic = {{"radius_cm", r12(radius)},
                     {"radius_km", r12(radius_km)},
                     {"sphere_mass_g", r12(mass)},
                     {"round_trip_deflection", r12(light_deflection(mass, radius))},
                     {"quoted_radius_km", kQuotedIridiumRadiusKm},
                     {"quoted_over_computed", r12(kQuotedIridiumRadiusKm / radius_km)}};
    std::ostringstream s;
    s << "Grazing-ray deflection " << fmt12(p.delta_phi) << " rad by a sphere of density "
      << fmt12(p.density) << " g/cm^3\n"
      << "  computed radius " << fmt12(radius_km) << " km\n"
      << "  quoted radius   " << fmt12(kQuotedIridiumRadiusKm) << " km (ratio "
      << fmt12(kQuotedIridiumRadiusKm / radius_km) << ")\n";
    if (p.mass && p.impact_parameter) {
        const double d = light_deflection(*p.mass, *p.impact_parameter);
        analytic["light_deflection_rad"] = r12(d);
        s << "  deflection for M = " << fmt12(*p.mass) << " g, b = " << fmt12(*p.impact_parameter)
          << " cm: " << fmt12(d) << " rad\n";
    }
    rec.payload["analytic"] = analytic;
    rec.summary = s.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Scenario s) { return kScenarioNames[static_cast<std::size_t>(s)]; }

std::optional<Scenario> scenario_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kScenarioNames.size(); ++i) {
        if (kScenarioNames[i] == name) return static_cast<Scenario>(i);
    }
    return std::nullopt;
}

const std::vector<Scenario>& all_scenarios() {
    static const std::vector<Scenario> all{
        Scenario::ev_bomb,           Scenario::zeno,  Scenario::matter_null,
        Scenario::field_scan_electric, Scenario::field_scan_magnetic, Scenario::gravity_deflection};
    return all;
}

ConfigError::ConfigError(std::vector<ValidationError> errors)
    : Error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& e : errors) msg += "\n  " + e.path + ": " + e.message;
          return msg;
      }()),
      errors_(std::move(errors)) {}

double round_sig12(double value) {
    if (!std::isfinite(value) || value == 0.0) return value;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return std::strtod(buf, nullptr);
}

ScenarioConfig default_config(Scenario scenario) {
    ScenarioConfig c;
    switch (scenario) {
        case Scenario::ev_bomb: c.parameters = EvBombParams{}; break;
        case Scenario::zeno: c.parameters = ZenoParams{}; break;
        case Scenario::matter_null: c.parameters = MatterNullParams{}; break;
        case Scenario::field_scan_electric: {
            ElectricScanParams p;
            for (double d = 20.0; d > 0.19; d *= 0.85) p.scan.positions.push_back(round_sig12(d));
            c.parameters = p;
            break;
        }
        case Scenario::field_scan_magnetic: {
            MagneticScanParams p;
            p.scan.positions = {6.0, 5.0, 4.0, 3.0, 2.5, 2.0, 1.75, 1.6, 1.4, 1.2, 1.0, 0.5};
            c.parameters = p;
            break;
        }
        case Scenario::gravity_deflection: c.parameters = GravityParams{}; break;
    }
    c.output_path = std::string(to_string(scenario)) + ".json";
    return c;
}

ScenarioConfig parse_config(const json& document) {
    std::vector<ValidationError> errors;
    Reader top(&document, "", errors);
    ScenarioConfig config;

    const std::string name = top.text("scenario", std::nullopt);
    const auto scenario = scenario_from_string(name);
    if (!scenario && top.present() && document.contains("scenario")) {
        top.error("scenario", "unknown scenario '" + name + "'");
    }

    if (const json* seed = top.find("seed", true)) {
        const bool non_negative_integer =
            seed->is_number_unsigned() ||
            (seed->is_number_integer() && seed->get<std::int64_t>() >= 0);
        if (!non_negative_integer) {
            top.error("seed", "must be an unsigned 64-bit integer");
        } else {
            config.seed = seed->get<std::uint64_t>();
        }
    }
    if (scenario) {
        config.output_path = top.text("output_path", std::string(to_string(*scenario)) + ".json");
    } else {
        top.text("output_path", std::string());
    }

    Reader params = top.child("parameters", true);
    if (scenario && params.present()) {
        switch (*scenario) {
            case Scenario::ev_bomb: config.parameters = read_ev(params); break;
            case Scenario::zeno: config.parameters = read_zeno(params); break;
            case Scenario::matter_null: config.parameters = read_matter(params); break;
            case Scenario::field_scan_electric: {
                ElectricScanParams p;
                p.scan = read_scan(params);
                p.source_charge = params.number("source_charge", std::nullopt);
                config.parameters = p;
                break;
            }
            case Scenario::field_scan_magnetic: {
                MagneticScanParams p;
                p.scan = read_scan(params);
                p.field_gauss = params.number("field_gauss", std::nullopt);
                p.region_half_length =
                    params.number("region_half_length", p.region_half_length, positive());
                p.region_half_width =
                    params.number("region_half_width", p.region_half_width, positive());
                p.region_half_height =
                    params.number("region_half_height", p.region_half_height, positive());
                config.parameters = p;
                break;
            }
            case Scenario::gravity_deflection: config.parameters = read_gravity(params); break;
        }
        params.reject_unknown_keys();
    }
    top.reject_unknown_keys();

    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return config;
}

ScenarioConfig parse_config(std::string_view text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::vector<ValidationError>{{"<document>", std::string("malformed JSON: ") + e.what()}});
    }
    return parse_config(document);
}

json emit_config(const ScenarioConfig& config) {
    return {{"scenario", to_string(config.scenario())},
            {"seed", config.seed},
            {"output_path", config.output_path},
            {"parameters", parameters_json(config.parameters)}};
}

std::string ResultRecord::record_text() const {
    return json{{"metadata", metadata}, {"payload", payload}}.dump(2) + "\n";
}

ResultRecord run_scenario(const ScenarioConfig& config) {
    ResultRecord rec = start_record(config);
    try {
        std::visit(
            overloaded{
                [&](const EvBombParams& p) { run_ev(config, p, rec); },
                [&](const ZenoParams& p) { run_zeno(config, p, rec); },
                [&](const MatterNullParams& p) { run_matter(config, p, rec); },
                [&](const ElectricScanParams& p) {
                    run_scan(config, p.scan, FieldSource{PointCharge{p.source_charge}, Vec3::Zero()},
                             "statV/cm", rec);
                },
                [&](const MagneticScanParams& p) {
                    const Vec3 half(p.region_half_length, p.region_half_width,
                                    p.region_half_height);
                    run_scan(config, p.scan,
                             FieldSource{UniformBRegion{Vec3(0.0, 0.0, p.field_gauss), {-half, half}},
                                         Vec3::Zero()},
                             "gauss", rec);
                },
                [&](const GravityParams& p) { run_gravity(p, rec); },
            },
            config.parameters);
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw DomainError(std::string(to_string(config.scenario())) + ": " + e.what());
    } catch (const Error& e) {
        throw Error(std::string(to_string(config.scenario())) + ": " + e.what());
    }
    return rec;
}

std::vector<std::string> write_outputs(const ResultRecord& record, const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    auto write = [&](const fs::path& target, const std::string& content) {
        if (target.has_parent_path()) {
            fs::create_directories(target.parent_path());
        }
        std::ofstream out(target, std::ios::binary);
        out << content;
        if (!out) {
            throw Error("cannot write '" + target.string() + "'");
        }
        written.push_back(target.string());
    };
    const fs::path record_path(path);
    write(record_path, record.record_text());
    if (!record.scan_table.empty()) {
        fs::path table = record_path;
        table.replace_extension(".scan.csv");
        write(table, record.scan_table);
    }
    return written;
}

}  // namespace ifm::cli
