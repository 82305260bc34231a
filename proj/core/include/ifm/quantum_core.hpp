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

#ifndef IFM_QUANTUM_CORE_HPP
#define IFM_QUANTUM_CORE_HPP

// Single-particle amplitude engine: mode-labelled states, unitary optical
// elements, absorbers and projective detection.
//
// Beam-splitter convention: the reflected beam picks up a factor i, so a
// splitter with transmission t is
//
//     [  sqrt(t)      i sqrt(1-t) ]
//     [ i sqrt(1-t)     sqrt(t)   ]
//
// and a mirror is the t = 0 case. With this convention a balanced
// Mach-Zehnder sends everything to one port without extra phase plates.

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ifm/rng.hpp"

namespace ifm {

using Complex = std::complex<double>;

/// Outcome label returned by sample_outcome() for the norm deficit. It is
/// reserved and cannot be used as a mode label.
inline constexpr std::string_view kAbsorbed = "absorbed";

/// Tolerance for algebraic identities (unitarity, norm conservation).
inline constexpr double kAlgebraTolerance = 1e-12;

/// Reduce a phase into [0, 2*pi).
double wrap_phase(double radians);

/// Shortest signed distance between two phases, in (-pi, pi].
double phase_distance(double a, double b);

/// Complex amplitudes over uniquely labelled spatial modes. The squared norm
/// is 1 for a closed system and drops below 1 only after an absorber acted;
/// the deficit is the accumulated absorption probability.
class ModeState {
  public:
    using AmplitudeMap = std::map<std::string, Complex, std::less<>>;

    ModeState() = default;
    ModeState(std::initializer_list<std::pair<const std::string, Complex>> amplitudes);
    explicit ModeState(AmplitudeMap amplitudes);

    /// All `modes` present with amplitude 0, except `occupied` which holds 1.
    static ModeState basis(const std::vector<std::string>& modes, std::string_view occupied);

    bool has_mode(std::string_view mode) const;
    Complex amplitude(std::string_view mode) const;
    const AmplitudeMap& amplitudes() const { return amplitudes_; }
    std::size_t size() const { return amplitudes_.size(); }

    /// Sum of |amplitude|^2.
    double norm() const;

    ModeState with_amplitude(std::string_view mode, Complex value) const;
    ModeState renamed(std::string_view from, std::string to) const;

    bool operator==(const ModeState&) const = default;

  private:
    static void check_label(std::string_view label);

    AmplitudeMap amplitudes_;
};

/// Square unitary acting on an ordered list of modes.
class ElementUnitary {
  public:
    /// Throws DomainError if `matrix` is not square, does not match the mode
    /// count, or is not unitary to kAlgebraTolerance. Throws StructuralError
    /// on duplicate labels.
    ElementUnitary(std::vector<std::string> modes, Eigen::MatrixXcd matrix);

    const std::vector<std::string>& modes() const { return modes_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    /// max |U^dagger U - I| over all entries.
    double unitarity_defect() const;

  private:
    std::vector<std::string> modes_;
    Eigen::MatrixXcd matrix_;
};

/// Perfect absorber (opaque object) placed in one mode.
struct Absorber {
    std::string mode;
};

struct AbsorptionResult {
    ModeState state;
    double probability = 0.0;
};

ElementUnitary beam_splitter(double transmission, std::string mode_a, std::string mode_b);

/// Full reflection: the t = 0 splitter, an i-phase swap.
ElementUnitary mirror(std::string mode_a, std::string mode_b);

/// One-mode phase plate exp(i * radians).
ElementUnitary phase_shift(double radians, std::string mode);

/// Real rotation by `angle`: a -> cos a + sin b, b -> -sin a + cos b.
ElementUnitary rotation(double angle, std::string mode_a, std::string mode_b);

ModeState apply_element(const ModeState& state, const ElementUnitary& element);

/// Zeroes the absorber's mode without renormalising; the returned probability
/// is the removed |amplitude|^2.
AbsorptionResult apply_absorber(const ModeState& state, const Absorber& absorber);

std::map<std::string, double, std::less<>> detection_probabilities(const ModeState& state);

/// Projective detection. Returns a mode label with probability |amplitude|^2
/// or kAbsorbed with the norm deficit. Consumes exactly one draw from `rng`.
std::string sample_outcome(const ModeState& state, RngStream& rng);

}  // namespace ifm

#endif  // IFM_QUANTUM_CORE_HPP
