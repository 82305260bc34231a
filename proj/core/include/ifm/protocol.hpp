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

#ifndef IFM_PROTOCOL_HPP
#define IFM_PROTOCOL_HPP

// Interaction-free field measurement with the three-grating interferometer.
//
// A field source C is moved in discrete steps toward the upper (order +1)
// path. At each position the interferometer is recalibrated with the cages in
// place, then C's field is allowed to act on the upper path. If it bends that
// path beyond the critical angle the upper beam misses the second grating and
// the detector, previously dark, fires with probability p1 * p2 per particle.
// Particles that click took the lower path, far from C.

#include <cstdint>
#include <optional>
#include <vector>

#include "ifm/fields.hpp"
#include "ifm/matter_mz.hpp"

namespace ifm {

/// -q dV T / hbar, unreduced.
double potential_phase_unreduced(double q, double delta_v, double transit_time,
                                 const PhysicalConstants& constants = {});

/// potential_phase_unreduced() reduced into [0, 2*pi).
double potential_phase(double q, double delta_v, double transit_time,
                       const PhysicalConstants& constants = {});

/// Aharonov-Bohm phase q Phi / (hbar c), reduced into [0, 2*pi).
double ab_phase(double q, double flux, const PhysicalConstants& constants = {});

struct CalibrationSetup {
    double cage_potential_upper = 0.0;  // statV
    double cage_potential_lower = 0.0;  // statV
    double transit_time = 1.0;          // s spent inside a cage
    double enclosed_flux = 0.0;         // gauss cm^2 between the two paths

    void validate() const;
};

/// Lower-path phase relative to the upper one produced by the cage potentials
/// and the enclosed flux.
double calibration_arm_phase(const CalibrationSetup& setup, double q,
                             const PhysicalConstants& constants = {});

struct Calibration {
    InterferometerModel model;
    NullSolution null;
};

/// Sets arm_extra_phase from the cage setup and moves the third grating to the
/// resulting null. No trajectory is integrated: inside the cages there is no
/// force. An imperfect null is reported in `null`, not thrown.
Calibration calibrate(const InterferometerModel& model, const CalibrationSetup& setup, double q,
                      const PhysicalConstants& constants = {});

/// Smallest M with 1 - (1 - p_detect)^M >= confidence. Throws DomainError for
/// p_detect <= 0 (no finite M) or arguments outside their ranges.
std::int64_t required_trials(double p_detect, double confidence);

/// Upper path runs along +x from the particle's start to the second grating at
/// beam.exit_plane_x; the source approaches beam.anchor along
/// beam.approach_direction (must be +y or -y). The lower path runs parallel,
/// `path_separation` further from the source.
struct ScanGeometry {
    BeamLine beam;
    double path_separation = 1.0;  // cm

    void validate() const;
    Vec3 lower_anchor() const;
};

struct ScanConfig {
    /// Source distances from the upper-path anchor, strictly decreasing.
    std::vector<double> positions;
    std::int64_t trials_per_position = 1;
    double confidence_target = 0.95;
    double phi_c = 0.0;
    std::uint64_t seed = 0;
    /// When set, recalibrate at every position using cage potentials and
    /// enclosed flux computed from the placed source.
    std::optional<double> cage_transit_time;

    void validate() const;
};

struct DetectionEvent {
    std::int64_t trial = 0;
    /// Lower whenever the upper path was removed; empty if the click came
    /// from the (calibrated-away) two-path interference.
    std::optional<Path> path;
    Vec3 v_initial = Vec3::Zero();
    Vec3 v_final = Vec3::Zero();
};

struct ScanPosition {
    double distance = 0.0;
    std::int64_t detections = 0;
    std::int64_t trials = 0;
    double deflection_angle = 0.0;
    bool upper_blocked = false;
    double detect_probability = 0.0;
    /// Field magnitude at the upper-path anchor (closest approach to C).
    double field_magnitude = 0.0;
    double arm_extra_phase = 0.0;
    double third_grating_phase = 0.0;
    std::vector<DetectionEvent> events;
};

struct FieldBound {
    /// The field at the upper-path anchor exceeded the critical value; this is
    /// its magnitude at the detecting position.
    double lower_bound = 0.0;
    /// Field change across the last step; empty if the first position fired.
    std::optional<double> error;
};

struct ScanResult {
    std::vector<ScanPosition> per_position;
    std::optional<double> first_detecting_position;
    std::optional<FieldBound> field_bound;
    /// A detection occurred.
    bool conclusive = false;
    /// p1 * p2 for the configured gratings.
    double single_trial_efficiency = 0.0;
    /// trials_per_position >= required_trials(p1 p2, confidence_target), so a
    /// run of zeros at a blocked position is improbable to that confidence.
    bool trials_sufficient = false;
};

/// Flux of a uniform B region (already placed) through the strip between the
/// two paths from x = start_x to the second grating: B_z times the overlap
/// area. Zero for every other source kind.
double enclosed_flux(const FieldSource& placed_source, const ScanGeometry& geometry,
                     double start_x);

/// What the cages register with `placed_source` in position: the potential of
/// each cage at its path anchor plus the enclosed flux.
CalibrationSetup cage_setup(const FieldSource& placed_source, const ScanGeometry& geometry,
                            double start_x, double transit_time);

ScanResult run_field_scan(const InterferometerModel& model, const FieldSource& source_template,
                          const TestParticle& particle, const ScanGeometry& geometry,
                          const ScanConfig& config, const PhysicalConstants& constants = {});

}  // namespace ifm

#endif  // IFM_PROTOCOL_HPP
