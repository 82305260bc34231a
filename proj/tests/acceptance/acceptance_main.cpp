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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ifm/errors.hpp"
#include "ifm/fields.hpp"
#include "ifm/matter_mz.hpp"
#include "ifm/photon_mz.hpp"
#include "ifm/protocol.hpp"
#include "ifm/rng.hpp"
#include "scenario.hpp"

namespace {

using namespace ifm;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

bool within_4_sigma(std::int64_t count, std::int64_t n, double p) {
    // p may sit a rounding error outside [0, 1].
    p = std::clamp(p, 0.0, 1.0);
    const double mean = static_cast<double>(n) * p;
    const double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    return std::abs(static_cast<double>(count) - mean) <= 4.0 * sigma;
}

GratingSpec all_equal(double p) { return GratingSpec::from_orders(p, p, p); }

TestParticle electron() { return {-4.8e-10, 9.11e-28, Vec3::Zero(), Vec3(1.0e8, 0.0, 0.0)}; }

// 1 ------------------------------------------------------------------------
Outcome ev_analytic() {
    Outcome o;
    const EvDistribution free = ev_outcome_distribution({});
    o.require(std::abs(free.p_light_detector - 1.0) < 1e-12, "LD != 1 without object");
    o.require(std::abs(free.p_dark_detector) < 1e-12, "DD != 0 without object");
    o.require(std::abs(free.p_absorbed) < 1e-12, "absorbed != 0 without object");
    EvSetup bomb;
    bomb.object_present = true;
    const EvDistribution with = ev_outcome_distribution(bomb);
    o.require(std::abs(with.p_absorbed - 0.5) < 1e-12, "absorbed != 0.5");
    o.require(std::abs(with.p_dark_detector - 0.25) < 1e-12, "DD != 0.25");
    o.require(std::abs(with.p_light_detector - 0.25) < 1e-12, "LD != 0.25");
    if (o.pass) {
        o.detail = fmt("object: LD %.15g DD %.15g absorbed %.15g", with.p_light_detector,
                       with.p_dark_detector, with.p_absorbed);
    }
    return o;
}

// 2 ------------------------------------------------------------------------
Outcome ev_monte_carlo() {
    Outcome o;
    constexpr std::int64_t n = 1'000'000;
    for (bool present : {false, true}) {
        EvSetup setup;
        setup.object_present = present;
        const EvDistribution d = ev_outcome_distribution(setup);
        RngStream rng(present ? 2024 : 2023);
        const EvCounts c = run_ev_trials(setup, n, rng);
        o.require(c.total() == n, "counts do not sum to n");
        o.require(within_4_sigma(c.light_detector, n, d.p_light_detector), "LD outside 4 sigma");
        o.require(within_4_sigma(c.dark_detector, n, d.p_dark_detector), "DD outside 4 sigma");
        o.require(within_4_sigma(c.absorbed, n, d.p_absorbed), "absorbed outside 4 sigma");
        if (present && o.pass) {
            o.detail = fmt("1e6 photons with object: LD %.0f DD %.0f absorbed %.0f",
                           static_cast<double>(c.light_detector),
                           static_cast<double>(c.dark_detector), static_cast<double>(c.absorbed));
        }
    }
    return o;
}

// 3 ------------------------------------------------------------------------
Outcome ideal_null() {
    Outcome o;
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> p(1e-3, 1.0 / 3.0);
    double worst_null = 0.0;
    double worst_block = 0.0;
    for (int i = 0; i < 100; ++i) {
        InterferometerModel m;
        m.g1 = all_equal(p(gen));
        m.g2 = all_equal(p(gen));
        m.g3 = all_equal(p(gen));
        m.arm_extra_phase = 2.0 * std::numbers::pi * p(gen);
        m = with_ideal_offset(m);
        const double null = detector_probability(m, PathBlockSet::none());
        const double blocked = detector_probability(m, PathBlockSet::upper_only());
        const double p1p2 = m.g1.p_0 * m.g2.p_plus1;
        worst_null = std::max(worst_null, null);
        worst_block = std::max(worst_block, std::abs(blocked - p1p2));
        o.require(null < 1e-12, "null above 1e-12");
        // |sqrt(p1 p2)|^2 recovers p1 p2 up to rounding.
        o.require(std::abs(blocked - p1p2) <= 4.0 * std::numeric_limits<double>::epsilon() * p1p2,
                  "upper-blocked probability differs from p1 p2");
        o.require(ifm_efficiency(m.g1, m.g2) == p1p2, "ifm_efficiency differs from p1 p2");
    }
    if (o.pass) {
        o.detail = fmt("100 gratings: max null %.3g, max |blocked - p1p2| %.3g", worst_null,
                       worst_block);
    }
    return o;
}

// 4 ------------------------------------------------------------------------
Outcome efficiency_ceiling() {
    Outcome o;
    std::mt19937_64 gen(44);
    std::uniform_real_distribution<double> half(0.0, 0.5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double best = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        auto draw = [&] {
            const double p0 = half(gen);
            const double pp = half(gen);
            return GratingSpec::from_orders((1.0 - p0 - pp) * u(gen), p0, pp);
        };
        const double e = ifm_efficiency(draw(), draw());
        best = std::max(best, e);
        o.require(e <= 0.25, "efficiency above 0.25");
    }
    if (o.pass) o.detail = fmt("1e4 draws: max efficiency %.6f", best);
    return o;
}

// 5 ------------------------------------------------------------------------
Outcome lorentz_numerics() {
    Outcome o;
    const PhysicalConstants k;
    const AxisBox everywhere{Vec3::Constant(-1e3), Vec3::Constant(1e3)};
    const TestParticle p = electron();

    // Constant force: vy = a L / vx at the plane x = L.
    double worst_force = 0.0;
    for (double e_y : {1e-6, 3e-5, -2e-4}) {
        const FieldSource field{UniformERegion{Vec3(0.0, e_y, 0.0), everywhere}, Vec3::Zero()};
        const double L = 10.0;
        const double vy = p.q * e_y / p.m * (L / p.v0.x());
        const double exact = std::atan2(std::abs(vy), p.v0.x());
        const double got = integrate_trajectory(p, field, L, 1e-10).deflection_angle;
        worst_force = std::max(worst_force, std::abs(got - exact) / exact);
    }
    o.require(worst_force < 1e-6, fmt("constant-force deflection off by %.3g relative", worst_force));

    // Magnetic field alone does no work.
    const FieldSource magnetic{UniformBRegion{Vec3(0.0, 0.0, 0.2847), everywhere}, Vec3::Zero()};
    const TrajectoryResult r = integrate_trajectory(p, magnetic, 10.0, 1e-9);
    const double ke0 = p.v0.squaredNorm();
    double worst_ke = 0.0;
    for (const auto& s : r.samples) {
        worst_ke = std::max(worst_ke, std::abs(s.v.squaredNorm() / ke0 - 1.0));
    }
    o.require(worst_ke < 1e-9, fmt("kinetic energy drift %.3g", worst_ke));

    // Symmetrized force against q (E + v x B / c).
    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto vec = [&](double scale) { return Vec3(u(gen), u(gen), u(gen)) * scale; };
    double worst_sym = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const double q = u(gen) * 1e-9;
        const Vec3 v = vec(1e8);
        const Vec3 E = vec(1e2);
        const Vec3 B = vec(1e3);
        const Vec3 ref = q * (E + v.cross(B) / k.c);
        const double scale = std::abs(q) * (E.norm() + v.norm() * B.norm() / k.c);
        const double err = (lorentz_force(q, v, E, B, k) - ref).norm() / scale;
        worst_sym = std::max(worst_sym, err);
    }
    o.require(worst_sym < 1e-12, fmt("symmetrized force off by %.3g", worst_sym));
    if (o.pass) {
        o.detail = fmt("force rel err %.3g, KE drift %.3g, symmetrized %.3g", worst_force, worst_ke,
                       worst_sym);
    }
    return o;
}

// 6 ------------------------------------------------------------------------
Outcome scan_bracket() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();

    InterferometerModel model;
    model.g1 = model.g2 = model.g3 = all_equal(1.0 / 3.0);
    model = with_ideal_offset(model);
    ScanGeometry geometry;
    geometry.beam.anchor = Vec3(5.0, 0.0, 0.0);
    geometry.beam.approach_direction = Vec3::UnitY();
    geometry.beam.exit_plane_x = 10.0;
    geometry.beam.dt = 1e-10;
    geometry.path_separation = 1.0;

    ScanConfig config;
    for (double d = 20.0; d > 0.199; d *= std::pow(0.01, 1.0 / 24.0)) config.positions.push_back(d);
    config.phi_c = 1e-3;
    config.confidence_target = 0.999999;
    config.trials_per_position = required_trials(1.0 / 9.0, config.confidence_target);
    config.cage_transit_time = 1e-7;

    std::mt19937_64 gen(66);
    std::uniform_real_distribution<double> log_q(std::log(3e-6), std::log(1e-4));
    int conclusive = 0;
    std::int64_t detected = 0;
    for (int run = 0; run < 50 && o.pass; ++run) {
        const double sign = (gen() & 1u) ? 1.0 : -1.0;
        const FieldSource source{PointCharge{sign * std::exp(log_q(gen))}, Vec3::Zero()};
        config.seed = gen();
        const ScanResult r = run_field_scan(model, source, electron(), geometry, config);
        for (const auto& row : r.per_position) {
            for (const auto& e : row.events) {
                ++detected;
                o.require(e.path == Path::lower, "detection not on the lower path");
                o.require(e.v_final.norm() == e.v_initial.norm(), "detected |v_final| != |v_0|");
            }
            o.require(row.detections == 0 || row.upper_blocked, "detection with both paths open");
        }
        if (!r.conclusive) continue;
        ++conclusive;
        const double d_c = critical_distance(electron(), source, geometry.beam, config.phi_c,
                                             {config.positions.back(), config.positions.front()});
        const std::size_t k = r.per_position.size() - 1;
        const double near = r.per_position[k].distance;
        o.require(d_c > near, fmt("critical distance %.6g not beyond detecting %.6g", d_c, near));
        if (k > 0) {
            const double far = r.per_position[k - 1].distance;
            o.require(d_c < far, fmt("critical distance %.6g not inside step to %.6g", d_c, far));
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(conclusive > 0, "no conclusive run");
    o.require(seconds < 60.0, fmt("took %.1f s", seconds));
    if (o.pass) {
        o.detail = fmt("50 runs, %.0f conclusive, %.0f detections, %.1f s", conclusive,
                       static_cast<double>(detected), seconds);
    }
    return o;
}

// 7 ------------------------------------------------------------------------
Outcome gravity() {
    Outcome o;
    const PhysicalConstants k;
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double M = u(gen) * 1e30;
        const double b = u(gen) * 1e9;
        const double a = u(gen);
        const double base = light_deflection(M, b);
        o.require(std::abs(light_deflection(a * M, b) / (a * base) - 1.0) < 1e-12,
                  "not linear in M");
        o.require(std::abs(light_deflection(M, a * b) * a / base - 1.0) < 1e-12,
                  "not inverse in b");
        o.require(std::abs(base / (4.0 * k.G * M / (b * k.c * k.c)) - 1.0) < 1e-12,
                  "differs from 4GM/(bc^2)");
    }
    const double sun = light_deflection(1.99e33, 6.96e10);
    o.require(std::abs(sun / 8.5e-6 - 1.0) < 0.01, fmt("solar grazing deflection %.4g", sun));

    cli::ScenarioConfig c = cli::default_config(cli::Scenario::gravity_deflection);
    const auto record = cli::run_scenario(c);
    const auto& a = record.payload["analytic"];
    o.require(a.contains("radius_km") && a.contains("quoted_radius_km"),
              "record lacks either radius");
    const double computed_km = a.value("radius_km", 0.0);
    const double oracle_km =
        std::sqrt(3.0 * 1e-9 * k.c * k.c / (16.0 * std::numbers::pi * k.G * 22.6)) / 1e5;
    o.require(std::abs(computed_km / oracle_km - 1.0) < 1e-11, "radius differs from the oracle");
    if (o.pass) {
        o.detail = fmt("sun %.4g rad; Iridium radius computed %.1f km vs quoted %.0f km", sun,
                       computed_km, a.value("quoted_radius_km", 0.0));
    }
    return o;
}

// 8 ------------------------------------------------------------------------
using Mat2 = std::array<std::array<std::complex<double>, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int m = 0; m < 2; ++m) out[i][j] += a[i][m] * b[m][j];
    return out;
}

double zeno_oracle(int n) {
    const double th = std::numbers::pi / (2.0 * n);
    const Mat2 rot{{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}}};
    const Mat2 keep_h{{{1.0, 0.0}, {0.0, 0.0}}};
    Mat2 total{{{1.0, 0.0}, {0.0, 1.0}}};
    for (int i = 0; i < n; ++i) total = mul(keep_h, mul(rot, total));
    return std::norm(total[0][0]);
}

Outcome zeno() {
    Outcome o;
    double previous = 0.0;
    double worst = 0.0;
    for (int n = 1; n <= 64; ++n) {
        const double p = zeno_ifm_distribution(n, true).p_success_detect;
        worst = std::max(worst, std::abs(p - zeno_oracle(n)));
        o.require(std::abs(p - zeno_oracle(n)) < 1e-12, fmt("N=%.0f differs from oracle", n));
        o.require(p >= previous, fmt("decreases at N=%.0f", n));
        if (n >= 3) o.require(p > 0.25, fmt("N=%.0f not above 0.25", n));
        previous = p;
    }
    if (o.pass) o.detail = fmt("N=1..64 max |diff| %.3g, N=64 success %.6f", worst, previous);
    return o;
}

// 9 ------------------------------------------------------------------------
Outcome determinism() {
    Outcome o;
    for (cli::Scenario s : cli::all_scenarios()) {
        cli::ScenarioConfig c = cli::default_config(s);
        c.seed = 909;
        const auto first = cli::run_scenario(c);
        const auto second = cli::run_scenario(cli::parse_config(cli::emit_config(c)));
        o.require(first.payload_text() == second.payload_text(),
                  std::string(cli::to_string(s)) + " payload differs");
        o.require(first.scan_table == second.scan_table,
                  std::string(cli::to_string(s)) + " scan table differs");
    }
    if (o.pass) o.detail = "all six scenarios reproduce byte-identical payloads";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"EV bomb analytic distribution", ev_analytic},
        {"EV bomb Monte Carlo within 4 sigma", ev_monte_carlo},
        {"Three-grating ideal null and p1p2 signal", ideal_null},
        {"Efficiency ceiling 0.25", efficiency_ceiling},
        {"Lorentz force and RK4 numerics", lorentz_numerics},
        {"Electric scan bracket and interaction-free detections", scan_bracket},
        {"Gravitational deflection and Iridium radius", gravity},
        {"Zeno success against matrix-product oracle", zeno},
        {"Deterministic payloads", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str());
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
    return failures == 0 ? 0 : 1;
}
