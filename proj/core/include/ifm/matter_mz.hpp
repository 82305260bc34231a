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

#ifndef IFM_MATTER_MZ_HPP
#define IFM_MATTER_MZ_HPP

// Three-grating Mach-Zehnder for matter waves.
//
// Two primary paths connect the first grating to the overlap at the third:
//
//   lower: order 0 at G1, then order +1 at G2
//   upper: order +1 at G1, then order -1 at G2
//
// Every other diffraction order leaves the apparatus and is counted as loss.
// A path amplitude is the product of sqrt(p) for the orders it takes. The
// detector is a wire much wider than a grating period sitting on the port
// where the two paths overlap, so G3 enters only through its position, which
// sets the relative phase `third_grating_phase` of the lower path. A
// field-induced relative phase `arm_extra_phase` also rides on the lower path:
//
//   A_det = A_upper + A_lower * exp(i * (arm_extra_phase + third_grating_phase))

#include <complex>
#include <string>
#include <vector>

#include "ifm/quantum_core.hpp"

namespace ifm {

struct GratingSpec {
    double p_minus1 = 0.0;
    double p_0 = 0.0;
    double p_plus1 = 0.0;
    /// Probability lost to every higher order.
    double loss = 1.0;

    /// Fills `loss` so the four entries sum to 1.
    static GratingSpec from_orders(double p_minus1, double p_0, double p_plus1);

    /// Throws DomainError unless every entry lies in [0, 1] and they sum to 1
    /// within kAlgebraTolerance.
    void validate() const;

    bool operator==(const GratingSpec&) const = default;
};

enum class Path { upper, lower };

const char* to_string(Path path);

struct PathBlockSet {
    bool upper = false;
    bool lower = false;

    static PathBlockSet none() { return {}; }
    static PathBlockSet upper_only() { return {true, false}; }
    static PathBlockSet lower_only() { return {false, true}; }
    static PathBlockSet both() { return {true, true}; }

    bool blocks(Path path) const { return path == Path::upper ? upper : lower; }
};

struct InterferometerModel {
    GratingSpec g1;
    GratingSpec g2;
    GratingSpec g3;
    /// Mode labels visited by each path; the two share only "G3".
    std::vector<std::string> path_upper{"G1:+1", "G2:-1", "G3"};
    std::vector<std::string> path_lower{"G1:0", "G2:+1", "G3"};
    /// Radians in [0, 2*pi), set by the third grating's transverse position.
    double third_grating_phase = 0.0;
    double arm_extra_phase = 0.0;

    void validate() const;
};

/// Amplitude of one path at the detector, phases included.
Complex path_amplitude(const InterferometerModel& model, Path path);

double detector_probability(const InterferometerModel& model, const PathBlockSet& blocks);

struct NullSolution {
    double third_grating_phase = 0.0;
    /// false when the path moduli differ and no phase reaches zero.
    bool perfect = true;
    /// Detector probability at the returned phase, (|A_u| - |A_l|)^2.
    double residual = 0.0;
};

/// Smallest phase in [0, 2*pi) putting the two paths in antiphase. When the
/// moduli differ this is still the minimising phase, flagged imperfect.
NullSolution solve_ideal_offset(const InterferometerModel& model);

/// Copy of `model` with the third grating moved to its null.
InterferometerModel with_ideal_offset(const InterferometerModel& model);

/// g1.p_0 * g2.p_plus1: detection probability once the upper path is removed.
double ifm_efficiency(const GratingSpec& g1, const GratingSpec& g2);

}  // namespace ifm

#endif  // IFM_MATTER_MZ_HPP
