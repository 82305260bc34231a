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

#include "ifm/photon_mz.hpp"

#include <cmath>
#include <numbers>

#include "ifm/errors.hpp"

namespace ifm {

namespace {

const std::string kM1{kArmViaM1};
const std::string kM2{kArmViaM2};

void check_arm(const EvSetup& setup) {
    if (setup.object_arm != kArmViaM1 && setup.object_arm != kArmViaM2) {
        throw StructuralError("object arm must be 'arm_m1' or 'arm_m2', got '" +
                              setup.object_arm + "'");
    }
}

void check_cycles(int n_cycles) {
    if (n_cycles < 1) {
        throw DomainError("Zeno scheme needs at least one cycle");
    }
}

}  // namespace

ModeState ev_final_state(const EvSetup& setup) {
    check_arm(setup);
    ModeState state = ModeState::basis({kM1, kM2}, kM1);
    state = apply_element(state, beam_splitter(0.5, kM1, kM2));
    if (setup.arm_phase != 0.0) {
        state = apply_element(state, phase_shift(setup.arm_phase, kM1));
    }
    if (setup.object_present) {
        state = apply_absorber(state, Absorber{setup.object_arm}).state;
    }
    // M1 and M2 each fold one arm back toward BS2 with a reflection phase.
    state = apply_element(state, phase_shift(std::numbers::pi / 2, kM1));
    state = apply_element(state, phase_shift(std::numbers::pi / 2, kM2));
    state = apply_element(state, beam_splitter(0.5, kM1, kM2));
    return state.renamed(kM1, std::string(kDarkDetector))
        .renamed(kM2, std::string(kLightDetector));
}

EvDistribution ev_outcome_distribution(const EvSetup& setup) {
    const ModeState out = ev_final_state(setup);
    EvDistribution d;
    d.p_light_detector = std::norm(out.amplitude(kLightDetector));
    d.p_dark_detector = std::norm(out.amplitude(kDarkDetector));
    d.p_absorbed = setup.object_present ? std::max(0.0, 1.0 - out.norm()) : 0.0;
    return d;
}

EvCounts run_ev_trials(const EvSetup& setup, std::int64_t n_trials, RngStream& rng) {
    if (n_trials < 1) {
        throw DomainError("run_ev_trials needs n_trials >= 1");
    }
    const ModeState out = ev_final_state(setup);
    EvCounts counts;
    for (std::int64_t i = 0; i < n_trials; ++i) {
        const std::string outcome = sample_outcome(out, rng);
        if (outcome == kLightDetector) {
            ++counts.light_detector;
        } else if (outcome == kDarkDetector) {
            ++counts.dark_detector;
        } else {
            ++counts.absorbed;
        }
    }
    return counts;
}

ModeState zeno_final_state(int n_cycles, bool object_present) {
    check_cycles(n_cycles);
    const std::string h{kHorizontal};
    const std::string v{kVertical};
    const ElementUnitary rotator = rotation(std::numbers::pi / (2.0 * n_cycles), h, v);
    ModeState state = ModeState::basis({h, v}, h);
    for (int cycle = 0; cycle < n_cycles; ++cycle) {
        state = apply_element(state, rotator);
        if (object_present) {
            state = apply_absorber(state, Absorber{v}).state;
        }
    }
    return state;
}

ZenoDistribution zeno_ifm_distribution(int n_cycles, bool object_present) {
    const ModeState out = zeno_final_state(n_cycles, object_present);
    ZenoDistribution d;
    d.p_success_detect = std::norm(out.amplitude(kHorizontal));
    d.p_inconclusive = std::norm(out.amplitude(kVertical));
    d.p_absorbed = object_present ? std::max(0.0, 1.0 - out.norm()) : 0.0;
    return d;
}

double zeno_success_closed_form(int n_cycles) {
    check_cycles(n_cycles);
    return std::pow(std::cos(std::numbers::pi / (2.0 * n_cycles)), 2 * n_cycles);
}

ZenoCounts run_zeno_trials(int n_cycles, bool object_present, std::int64_t n_trials,
                           RngStream& rng) {
    if (n_trials < 1) {
        throw DomainError("run_zeno_trials needs n_trials >= 1");
    }
    const ModeState out = zeno_final_state(n_cycles, object_present);
    ZenoCounts counts;
    for (std::int64_t i = 0; i < n_trials; ++i) {
        const std::string outcome = sample_outcome(out, rng);
        if (outcome == kHorizontal) {
            ++counts.success;
        } else if (outcome == kVertical) {
            ++counts.inconclusive;
        } else {
            ++counts.absorbed;
        }
    }
    return counts;
}

}  // namespace ifm
