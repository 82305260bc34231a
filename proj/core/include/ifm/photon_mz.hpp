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

#ifndef IFM_PHOTON_MZ_HPP
#define IFM_PHOTON_MZ_HPP

// Photonic Mach-Zehnder bomb test and its N-cycle Zeno variant.
//
// Layout: the photon enters BS1 in the port that transmits toward mirror M1.
// The two internal arms are "arm_m1" (transmitted, via M1) and "arm_m2"
// (reflected, via M2). After BS2 the port fed by the transmitted part of
// arm_m2 is the light detector LD; the other is the dark detector DD.
// An optional phase plate exp(i * arm_phase) sits in arm_m1.

#include <cstdint>
#include <string>
#include <string_view>

#include "ifm/quantum_core.hpp"
#include "ifm/rng.hpp"

namespace ifm {

inline constexpr std::string_view kArmViaM1 = "arm_m1";
inline constexpr std::string_view kArmViaM2 = "arm_m2";
inline constexpr std::string_view kLightDetector = "LD";
inline constexpr std::string_view kDarkDetector = "DD";

struct EvSetup {
    bool object_present = false;
    /// Arm holding the object; must be kArmViaM1 or kArmViaM2.
    std::string object_arm{kArmViaM2};
    double arm_phase = 0.0;
};

struct EvDistribution {
    double p_light_detector = 0.0;
    double p_dark_detector = 0.0;
    double p_absorbed = 0.0;
};

struct EvCounts {
    std::int64_t light_detector = 0;
    std::int64_t dark_detector = 0;
    std::int64_t absorbed = 0;

    std::int64_t total() const { return light_detector + dark_detector + absorbed; }
};

/// Amplitudes on {LD, DD} after the photon leaves BS2. The norm deficit is
/// the probability that the object absorbed the photon.
ModeState ev_final_state(const EvSetup& setup);

EvDistribution ev_outcome_distribution(const EvSetup& setup);

/// n_trials single-photon runs sampled from ev_final_state(). Throws
/// DomainError for n_trials < 1.
EvCounts run_ev_trials(const EvSetup& setup, std::int64_t n_trials, RngStream& rng);

// Zeno-enhanced interrogation with the N-cycle polarisation scheme: a
// horizontally polarised photon is rotated by pi/(2N) per cycle, and in each cycle the vertical
// component passes the object, which absorbs it. Without the object the
// rotations accumulate to a full flip to vertical.

inline constexpr std::string_view kHorizontal = "H";
inline constexpr std::string_view kVertical = "V";

struct ZenoDistribution {
    /// Photon still horizontal at the end: object inferred without absorption.
    double p_success_detect = 0.0;
    double p_absorbed = 0.0;
    /// Photon ends vertical: no object inferred.
    double p_inconclusive = 0.0;
};

struct ZenoCounts {
    std::int64_t success = 0;
    std::int64_t absorbed = 0;
    std::int64_t inconclusive = 0;
};

ModeState zeno_final_state(int n_cycles, bool object_present);
ZenoDistribution zeno_ifm_distribution(int n_cycles, bool object_present);

/// cos^(2N)(pi / 2N).
double zeno_success_closed_form(int n_cycles);

ZenoCounts run_zeno_trials(int n_cycles, bool object_present, std::int64_t n_trials,
                           RngStream& rng);

}  // namespace ifm

#endif  // IFM_PHOTON_MZ_HPP
