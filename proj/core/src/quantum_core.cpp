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

#include "ifm/quantum_core.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "ifm/errors.hpp"

namespace ifm {

double wrap_phase(double radians) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(radians, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    // fmod of a tiny negative value can round up to exactly 2*pi.
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

double phase_distance(double a, double b) {
    double d = wrap_phase(a - b);
    if (d > std::numbers::pi) {
        d -= 2.0 * std::numbers::pi;
    }
    return d;
}

ModeState::ModeState(std::initializer_list<std::pair<const std::string, Complex>> amplitudes) {
    for (const auto& [label, value] : amplitudes) {
        check_label(label);
        if (!amplitudes_.emplace(label, value).second) {
            throw StructuralError("duplicate mode label '" + label + "'");
        }
    }
}

ModeState::ModeState(AmplitudeMap amplitudes) : amplitudes_(std::move(amplitudes)) {
    for (const auto& [label, value] : amplitudes_) {
        check_label(label);
    }
}

ModeState ModeState::basis(const std::vector<std::string>& modes, std::string_view occupied) {
    AmplitudeMap amps;
    for (const auto& m : modes) {
        if (!amps.emplace(m, Complex{0.0, 0.0}).second) {
            throw StructuralError("duplicate mode label '" + m + "'");
        }
    }
    auto it = amps.find(occupied);
    if (it == amps.end()) {
        throw StructuralError("occupied mode '" + std::string(occupied) + "' not among modes");
    }
    it->second = 1.0;
    return ModeState(std::move(amps));
}

void ModeState::check_label(std::string_view label) {
    if (label.empty()) {
        throw StructuralError("empty mode label");
    }
    if (label == kAbsorbed) {
        throw StructuralError("mode label 'absorbed' is reserved");
    }
}

bool ModeState::has_mode(std::string_view mode) const { return amplitudes_.contains(mode); }

Complex ModeState::amplitude(std::string_view mode) const {
    auto it = amplitudes_.find(mode);
    if (it == amplitudes_.end()) {
        throw StructuralError("unknown mode '" + std::string(mode) + "'");
    }
    return it->second;
}

double ModeState::norm() const {
    double total = 0.0;
    for (const auto& [label, value] : amplitudes_) {
        total += std::norm(value);
    }
    return total;
}

ModeState ModeState::with_amplitude(std::string_view mode, Complex value) const {
    ModeState out = *this;
    auto it = out.amplitudes_.find(mode);
    if (it == out.amplitudes_.end()) {
        throw StructuralError("unknown mode '" + std::string(mode) + "'");
    }
    it->second = value;
    return out;
}

ModeState ModeState::renamed(std::string_view from, std::string to) const {
    check_label(to);
    ModeState out = *this;
    auto node = out.amplitudes_.extract(out.amplitudes_.find(from));
    if (node.empty()) {
        throw StructuralError("unknown mode '" + std::string(from) + "'");
    }
    if (out.amplitudes_.contains(to)) {
        throw StructuralError("mode '" + to + "' already exists");
    }
    node.key() = std::move(to);
    out.amplitudes_.insert(std::move(node));
    return out;
}

ElementUnitary::ElementUnitary(std::vector<std::string> modes, Eigen::MatrixXcd matrix)
    : modes_(std::move(modes)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw DomainError("element matrix is not square");
    }
    if (static_cast<std::size_t>(matrix_.rows()) != modes_.size()) {
        throw DomainError("element matrix size does not match its mode count");
    }
    std::set<std::string_view> seen;
    for (const auto& m : modes_) {
        if (!seen.insert(m).second) {
            throw StructuralError("duplicate mode '" + m + "' in element");
        }
    }
    if (unitarity_defect() >= kAlgebraTolerance) {
        throw DomainError("element matrix is not unitary");
    }
}

double ElementUnitary::unitarity_defect() const {
    const auto n = matrix_.rows();
    const Eigen::MatrixXcd gram = matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(n, n);
    return n == 0 ? 0.0 : gram.cwiseAbs().maxCoeff();
}

ElementUnitary beam_splitter(double transmission, std::string mode_a, std::string mode_b) {
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw DomainError("beam splitter transmission must lie in [0, 1]");
    }
    const double t = std::sqrt(transmission);
    const double r = std::sqrt(1.0 - transmission);
    Eigen::MatrixXcd m(2, 2);
    m << Complex{t, 0.0}, Complex{0.0, r}, Complex{0.0, r}, Complex{t, 0.0};
    return ElementUnitary({std::move(mode_a), std::move(mode_b)}, std::move(m));
}

ElementUnitary mirror(std::string mode_a, std::string mode_b) {
    return beam_splitter(0.0, std::move(mode_a), std::move(mode_b));
}

ElementUnitary phase_shift(double radians, std::string mode) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = std::polar(1.0, radians);
    return ElementUnitary({std::move(mode)}, std::move(m));
}

ElementUnitary rotation(double angle, std::string mode_a, std::string mode_b) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::MatrixXcd m(2, 2);
    m << c, -s, s, c;
    return ElementUnitary({std::move(mode_a), std::move(mode_b)}, std::move(m));
}

ModeState apply_element(const ModeState& state, const ElementUnitary& element) {
    const auto& modes = element.modes();
    Eigen::VectorXcd in(static_cast<Eigen::Index>(modes.size()));
    for (std::size_t k = 0; k < modes.size(); ++k) {
        in(static_cast<Eigen::Index>(k)) = state.amplitude(modes[k]);
    }
    const Eigen::VectorXcd out = element.matrix() * in;
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < modes.size(); ++k) {
        amps.find(modes[k])->second = out(static_cast<Eigen::Index>(k));
    }
    return ModeState(std::move(amps));
}

AbsorptionResult apply_absorber(const ModeState& state, const Absorber& absorber) {
    const Complex old = state.amplitude(absorber.mode);
    return {state.with_amplitude(absorber.mode, Complex{0.0, 0.0}), std::norm(old)};
}

std::map<std::string, double, std::less<>> detection_probabilities(const ModeState& state) {
    std::map<std::string, double, std::less<>> out;
    for (const auto& [label, value] : state.amplitudes()) {
        out.emplace(label, std::norm(value));
    }
    return out;
}

std::string sample_outcome(const ModeState& state, RngStream& rng) {
    if (state.norm() > 1.0 + 1e-9) {
        throw InvariantViolation("state norm exceeds 1; cannot sample");
    }
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (const auto& [label, value] : state.amplitudes()) {
        cumulative += std::norm(value);
        if (u < cumulative) {
            return label;
        }
    }
    return std::string(kAbsorbed);
}

}  // namespace ifm
