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

#include "ifm/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ifm/errors.hpp"
#include "ifm/quantum_core.hpp"
#include "ifm/rng.hpp"

namespace ifm {

namespace {

constexpr std::string_view kDetectorMode = "detector";

double overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
    return std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
}

}  // namespace

double potential_phase_unreduced(double q, double delta_v, double transit_time,
                                 const PhysicalConstants& constants) {
    return -q * delta_v * transit_time / constants.hbar;
}

double potential_phase(double q, double delta_v, double transit_time,
                       const PhysicalConstants& constants) {
    return wrap_phase(potential_phase_unreduced(q, delta_v, transit_time, constants));
}

double ab_phase(double q, double flux, const PhysicalConstants& constants) {
    return wrap_phase(q * flux / (constants.hbar * constants.c));
}

void CalibrationSetup::validate() const {
    if (!(transit_time > 0.0) || !std::isfinite(transit_time)) {
        throw DomainError("cage transit time must be positive");
    }
    if (!std::isfinite(cage_potential_upper) || !std::isfinite(cage_potential_lower) ||
        !std::isfinite(enclosed_flux)) {
        throw DomainError("cage potentials and flux must be finite");
    }
}

double calibration_arm_phase(const CalibrationSetup& setup, double q,
                             const PhysicalConstants& constants) {
    setup.validate();
    const double electric = potential_phase_unreduced(
        q, setup.cage_potential_lower - setup.cage_potential_upper, setup.transit_time, constants);
    const double magnetic = q * setup.enclosed_flux / (constants.hbar * constants.c);
    return wrap_phase(electric + magnetic);
}

Calibration calibrate(const InterferometerModel& model, const CalibrationSetup& setup, double q,
                      const PhysicalConstants& constants) {
    Calibration out{model, {}};
    out.model.arm_extra_phase = calibration_arm_phase(setup, q, constants);
    out.null = solve_ideal_offset(out.model);
    out.model.third_grating_phase = out.null.third_grating_phase;
    return out;
}

std::int64_t required_trials(double p_detect, double confidence) {
    if (!(p_detect > 0.0)) {
        throw DomainError("detection probability 0: no finite number of trials suffices");
    }
    if (!(p_detect <= 1.0)) {
        throw DomainError("detection probability must be at most 1");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw DomainError("confidence must lie in (0, 1)");
    }
    if (p_detect == 1.0) {
        return 1;
    }
    auto reached = [&](std::int64_t m) {
        return 1.0 - std::pow(1.0 - p_detect, static_cast<double>(m)) >= confidence;
    };
    auto m = static_cast<std::int64_t>(
        std::ceil(std::log1p(-confidence) / std::log1p(-p_detect)));
    m = std::max<std::int64_t>(m, 1);
    while (!reached(m)) {
        ++m;
    }
    while (m > 1 && reached(m - 1)) {
        --m;
    }
    return m;
}

void ScanGeometry::validate() const {
    const Vec3 dir = beam.approach_direction.normalized();
    if (!beam.approach_direction.allFinite() || std::abs(dir.x()) > 1e-12 ||
        std::abs(dir.z()) > 1e-12) {
        throw DomainError("approach direction must be +y or -y");
    }
    if (!(path_separation > 0.0)) {
        throw DomainError("path separation must be positive");
    }
    if (!(beam.dt > 0.0)) {
        throw DomainError("integration step must be positive");
    }
}

Vec3 ScanGeometry::lower_anchor() const {
    return beam.anchor - path_separation * beam.approach_direction.normalized();
}

void ScanConfig::validate() const {
    if (positions.empty()) {
        throw DomainError("scan needs at least one source position");
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!(positions[i] > 0.0) || !std::isfinite(positions[i])) {
            throw DomainError("source distances must be positive");
        }
        if (i > 0 && !(positions[i] < positions[i - 1])) {
            throw DomainError("source positions must approach the beam strictly monotonically");
        }
    }
    if (trials_per_position < 1) {
        throw DomainError("trials per position must be at least 1");
    }
    if (!(confidence_target > 0.0 && confidence_target < 1.0)) {
        throw DomainError("confidence target must lie in (0, 1)");
    }
    if (!(phi_c > 0.0)) {
        throw DomainError("critical angle must be positive");
    }
    if (cage_transit_time && !(*cage_transit_time > 0.0)) {
        throw DomainError("cage transit time must be positive");
    }
}

double enclosed_flux(const FieldSource& placed_source, const ScanGeometry& geometry,
                     double start_x) {
    const auto* region = std::get_if<UniformBRegion>(&placed_source.kind);
    if (region == nullptr) {
        return 0.0;
    }
    const AxisBox box = region->region.shifted(placed_source.position);
    const Vec3 upper = geometry.beam.anchor;
    const Vec3 lower = geometry.lower_anchor();
    if (upper.z() < box.lo.z() || upper.z() > box.hi.z()) {
        return 0.0;
    }
    const double x_lo = std::min(start_x, geometry.beam.exit_plane_x);
    const double x_hi = std::max(start_x, geometry.beam.exit_plane_x);
    const double y_lo = std::min(upper.y(), lower.y());
    const double y_hi = std::max(upper.y(), lower.y());
    const double area = overlap(x_lo, x_hi, box.lo.x(), box.hi.x()) *
                        overlap(y_lo, y_hi, box.lo.y(), box.hi.y());
    return region->B.z() * area;
}

CalibrationSetup cage_setup(const FieldSource& placed_source, const ScanGeometry& geometry,
                            double start_x, double transit_time) {
    CalibrationSetup setup;
    setup.cage_potential_upper = scalar_potential(placed_source, geometry.beam.anchor);
    setup.cage_potential_lower = scalar_potential(placed_source, geometry.lower_anchor());
    setup.transit_time = transit_time;
    setup.enclosed_flux = enclosed_flux(placed_source, geometry, start_x);
    return setup;
}

ScanResult run_field_scan(const InterferometerModel& model, const FieldSource& source_template,
                          const TestParticle& particle, const ScanGeometry& geometry,
                          const ScanConfig& config, const PhysicalConstants& constants) {
    model.validate();
    geometry.validate();
    config.validate();
    particle.validate(constants);
    source_template.validate();
    if (!config.cage_transit_time &&
        detector_probability(model, PathBlockSet::none()) >= kAlgebraTolerance) {
        throw ProtocolError("interferometer is not calibrated to the ideal condition");
    }

    const BeamLine& beam = geometry.beam;
    ScanResult result;
    result.single_trial_efficiency = ifm_efficiency(model.g1, model.g2);
    result.trials_sufficient =
        result.single_trial_efficiency > 0.0 &&
        config.trials_per_position >=
            required_trials(result.single_trial_efficiency, config.confidence_target);

    TestParticle lower_particle = particle;
    lower_particle.r0 = particle.r0 - geometry.path_separation * beam.approach_direction.normalized();
    IntegrationOptions end_only = beam.options;
    end_only.sample_stride = end_only.max_steps;

    double previous_deflection = 0.0;
    for (std::size_t i = 0; i < config.positions.size(); ++i) {
        const double distance = config.positions[i];
        const FieldSource placed = source_template.at(beam.source_position(distance));

        // Source moves only here, between batches: no particle is in flight.
        InterferometerModel position_model = model;
        if (config.cage_transit_time) {
            const Calibration cal = calibrate(
                model, cage_setup(placed, geometry, particle.r0.x(), *config.cage_transit_time),
                particle.q, constants);
            if (!cal.null.perfect) {
                throw ProtocolError("calibration cannot null the detector (residual " +
                                    std::to_string(cal.null.residual) + ")");
            }
            position_model = cal.model;
        }

        const TrajectoryResult upper =
            integrate_trajectory(particle, placed, beam.exit_plane_x, beam.dt, end_only, constants);
        if (i > 0 && upper.deflection_angle < previous_deflection * (1.0 - 1e-9) - 1e-15) {
            throw ProtocolError("deflection decreased as the source approached the beam");
        }
        previous_deflection = upper.deflection_angle;

        ScanPosition row;
        row.distance = distance;
        row.trials = config.trials_per_position;
        row.deflection_angle = upper.deflection_angle;
        row.upper_blocked = !upper.reached_plane || upper.deflection_angle > config.phi_c;
        row.field_magnitude = field_magnitude(placed, beam.anchor);
        row.arm_extra_phase = position_model.arm_extra_phase;
        row.third_grating_phase = position_model.third_grating_phase;

        const PathBlockSet blocks =
            row.upper_blocked ? PathBlockSet::upper_only() : PathBlockSet::none();
        row.detect_probability = detector_probability(position_model, blocks);
        Complex detector_amplitude{0.0, 0.0};
        for (Path p : {Path::upper, Path::lower}) {
            if (!blocks.blocks(p)) {
                detector_amplitude += path_amplitude(position_model, p);
            }
        }
        const ModeState at_detector{{std::string(kDetectorMode), detector_amplitude}};

        std::optional<Vec3> lower_exit_velocity;
        RngStream rng = RngStream::derived(config.seed, i);
        for (std::int64_t trial = 0; trial < config.trials_per_position; ++trial) {
            if (sample_outcome(at_detector, rng) != kDetectorMode) {
                continue;
            }
            ++row.detections;
            DetectionEvent event;
            event.trial = trial;
            event.v_initial = particle.v0;
            if (row.upper_blocked) {
                // The click came through the lower path, which the source's
                // field does not reach.
                event.path = Path::lower;
                if (!lower_exit_velocity) {
                    lower_exit_velocity =
                        integrate_trajectory(lower_particle, std::span<const FieldSource>{},
                                             beam.exit_plane_x, beam.dt, end_only, constants)
                            .final()
                            .v;
                }
                event.v_final = *lower_exit_velocity;
            } else {
                event.v_final = particle.v0;
            }
            row.events.push_back(event);
        }

        result.per_position.push_back(std::move(row));
        const ScanPosition& last = result.per_position.back();
        if (last.detections > 0) {
            result.conclusive = true;
            result.first_detecting_position = distance;
            FieldBound bound{last.field_magnitude, std::nullopt};
            if (i > 0) {
                bound.error = std::abs(last.field_magnitude -
                                       result.per_position[i - 1].field_magnitude);
            }
            result.field_bound = bound;
            break;
        }
    }
    return result;
}

}  // namespace ifm
