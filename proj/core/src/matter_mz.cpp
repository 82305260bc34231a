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

#include "ifm/matter_mz.hpp"

#include <cmath>
#include <numbers>

#include "ifm/errors.hpp"

namespace ifm {

GratingSpec GratingSpec::from_orders(double p_minus1, double p_0, double p_plus1) {
    GratingSpec g{p_minus1, p_0, p_plus1, 1.0 - (p_minus1 + p_0 + p_plus1)};
    // Absorb rounding so a sum of exactly 1 yields zero loss, not -1e-17.
    if (std::abs(g.loss) < kAlgebraTolerance) {
        g.loss = 0.0;
    }
    g.validate();
    return g;
}

void GratingSpec::validate() const {
    for (double p : {p_minus1, p_0, p_plus1, loss}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("grating probabilities must lie in [0, 1]");
        }
    }
    if (std::abs(p_minus1 + p_0 + p_plus1 + loss - 1.0) > kAlgebraTolerance) {
        throw DomainError("grating probabilities must sum to 1");
    }
}

const char* to_string(Path path) { return path == Path::upper ? "upper" : "lower"; }

void InterferometerModel::validate() const {
    g1.validate();
    g2.validate();
    g3.validate();
    if (!(third_grating_phase >= 0.0 && third_grating_phase < 2.0 * std::numbers::pi)) {
        throw DomainError("third_grating_phase must lie in [0, 2*pi)");
    }
    if (!std::isfinite(arm_extra_phase)) {
        throw DomainError("arm_extra_phase must be finite");
    }
    if (path_upper.empty() || path_lower.empty() || path_upper.back() != path_lower.back()) {
        throw StructuralError("paths must both end on the shared third-grating mode");
    }
    for (std::size_t i = 0; i + 1 < path_upper.size(); ++i) {
        for (const auto& label : path_lower) {
            if (label == path_upper[i]) {
                throw StructuralError("paths may only share the third-grating mode");
            }
        }
    }
}

Complex path_amplitude(const InterferometerModel& model, Path path) {
    if (path == Path::upper) {
        return {std::sqrt(model.g1.p_plus1 * model.g2.p_minus1), 0.0};
    }
    const double modulus = std::sqrt(model.g1.p_0 * model.g2.p_plus1);
    return std::polar(modulus, model.arm_extra_phase + model.third_grating_phase);
}

double detector_probability(const InterferometerModel& model, const PathBlockSet& blocks) {
    model.validate();
    Complex total{0.0, 0.0};
    for (Path p : {Path::upper, Path::lower}) {
        if (!blocks.blocks(p)) {
            total += path_amplitude(model, p);
        }
    }
    return std::norm(total);
}

NullSolution solve_ideal_offset(const InterferometerModel& model) {
    model.validate();
    const double upper = std::abs(path_amplitude(model, Path::upper));
    const double lower = std::abs(path_amplitude(model, Path::lower));
    NullSolution out;
    out.third_grating_phase = wrap_phase(std::numbers::pi - model.arm_extra_phase);
    const double gap = upper - lower;
    out.residual = gap * gap;
    out.perfect = out.residual < kAlgebraTolerance;
    return out;
}

InterferometerModel with_ideal_offset(const InterferometerModel& model) {
    InterferometerModel out = model;
    out.third_grating_phase = solve_ideal_offset(model).third_grating_phase;
    return out;
}

double ifm_efficiency(const GratingSpec& g1, const GratingSpec& g2) { return g1.p_0 * g2.p_plus1; }

}  // namespace ifm
