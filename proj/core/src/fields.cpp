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

#include "ifm/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "ifm/errors.hpp"

namespace ifm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(const Vec3& v) { return v.allFinite(); }

void check_box(const AxisBox& box) {
    if (!finite(box.lo) || !finite(box.hi) || (box.hi - box.lo).minCoeff() <= 0.0) {
        throw DomainError("field region box must have positive extent");
    }
}

struct PhaseState {
    double t;
    Vec3 r;
    Vec3 v;
};

class ForceModel {
  public:
    ForceModel(const TestParticle& particle, std::span<const FieldSource> sources,
               const IntegrationOptions& options, const PhysicalConstants& constants)
        : particle_(particle), sources_(sources), options_(options), constants_(constants) {}

    Vec3 acceleration(const Vec3& r, const Vec3& v) const {
        Vec3 E = Vec3::Zero();
        Vec3 B = Vec3::Zero();
        for (const auto& s : sources_) {
            if (std::holds_alternative<PointCharge>(s.kind) &&
                (r - s.position).norm() < options_.singularity_cutoff) {
                throw SingularityError("trajectory came within the singularity cutoff of a "
                                       "point charge");
            }
            const FieldValues f = eval_fields(s, r);
            E += f.E;
            B += f.B;
        }
        return lorentz_force(particle_.q, v, E, B, constants_) / particle_.m;
    }

    PhaseState step(const PhaseState& s, double h) const {
        const Vec3 k1r = s.v;
        const Vec3 k1v = acceleration(s.r, s.v);
        const Vec3 k2r = s.v + 0.5 * h * k1v;
        const Vec3 k2v = acceleration(s.r + 0.5 * h * k1r, k2r);
        const Vec3 k3r = s.v + 0.5 * h * k2v;
        const Vec3 k3v = acceleration(s.r + 0.5 * h * k2r, k3r);
        const Vec3 k4r = s.v + h * k3v;
        const Vec3 k4v = acceleration(s.r + h * k3r, k4r);
        return {s.t + h, s.r + (h / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
                s.v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
    }

  private:
    const TestParticle& particle_;
    std::span<const FieldSource> sources_;
    const IntegrationOptions& options_;
    const PhysicalConstants& constants_;
};

// Step length h in (0, dt] whose RK4 step lands on the exit plane. `sign`
// orients x so that the plane lies at positive offset.
PhaseState land_on_plane(const ForceModel& model, const PhaseState& from, double dt,
                         double exit_x, double sign) {
    auto offset = [&](const PhaseState& s) { return sign * (s.r.x() - exit_x); };
    double lo = 0.0;
    double hi = dt;
    double h = dt * offset(from) / (offset(from) - offset(model.step(from, dt)));
    const double scale = std::max(std::abs(exit_x), std::abs(from.r.x())) + 1.0;
    PhaseState trial = model.step(from, h);
    for (int iter = 0; iter < 100; ++iter) {
        const double f = offset(trial);
        if (std::abs(f) <= 4e-16 * scale) {
            break;
        }
        (f < 0.0 ? lo : hi) = h;
        const double vx = sign * trial.v.x();
        double next = vx > 0.0 ? h - f / vx : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        h = next;
        trial = model.step(from, h);
    }
    return trial;
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

bool AxisBox::contains(const Vec3& r) const {
    return (r.array() >= lo.array()).all() && (r.array() <= hi.array()).all();
}

void FieldSource::validate() const {
    if (!finite(position)) {
        throw DomainError("source position must be finite");
    }
    std::visit(overloaded{
                   [](const PointCharge& s) {
                       if (!std::isfinite(s.q)) throw DomainError("charge must be finite");
                   },
                   [](const UniformBRegion& s) {
                       if (!finite(s.B)) throw DomainError("B must be finite");
                       check_box(s.region);
                   },
                   [](const UniformERegion& s) {
                       if (!finite(s.E)) throw DomainError("E must be finite");
                       check_box(s.region);
                   },
                   [](const PointMass& s) {
                       if (!std::isfinite(s.M)) throw DomainError("mass must be finite");
                   },
               },
               kind);
}

FieldValues eval_fields(const FieldSource& source, const Vec3& r) {
    return std::visit(
        overloaded{
            [&](const PointCharge& s) {
                const Vec3 d = r - source.position;
                const double dist = d.norm();
                if (dist == 0.0) {
                    throw DomainError("field of a point charge evaluated at its position");
                }
                return FieldValues{s.q * d / (dist * dist * dist), Vec3::Zero()};
            },
            [&](const UniformBRegion& s) {
                return s.region.shifted(source.position).contains(r)
                           ? FieldValues{Vec3::Zero(), s.B}
                           : FieldValues{};
            },
            [&](const UniformERegion& s) {
                return s.region.shifted(source.position).contains(r)
                           ? FieldValues{s.E, Vec3::Zero()}
                           : FieldValues{};
            },
            [&](const PointMass&) { return FieldValues{}; },
        },
        source.kind);
}

double field_magnitude(const FieldSource& source, const Vec3& r) {
    const FieldValues f = eval_fields(source, r);
    return std::holds_alternative<UniformBRegion>(source.kind) ? f.B.norm() : f.E.norm();
}

double scalar_potential(const FieldSource& source, const Vec3& r) {
    if (const auto* s = std::get_if<PointCharge>(&source.kind)) {
        const double dist = (r - source.position).norm();
        if (dist == 0.0) {
            throw DomainError("potential of a point charge evaluated at its position");
        }
        return s->q / dist;
    }
    return 0.0;
}

Vec3 lorentz_force(double q, const Vec3& v, const Vec3& E, const Vec3& B,
                   const PhysicalConstants& constants) {
    return q * (E + (v.cross(B) - B.cross(v)) / (2.0 * constants.c));
}

void TestParticle::validate(const PhysicalConstants& constants) const {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError("particle mass must be positive");
    }
    if (!std::isfinite(q) || !finite(r0) || !finite(v0)) {
        throw DomainError("particle state must be finite");
    }
    const double speed = v0.norm();
    if (!(speed > 0.0)) {
        throw DomainError("particle must be moving");
    }
    if (speed >= 0.01 * constants.c) {
        throw DomainError("particle speed must stay below 0.01 c");
    }
}

TrajectoryResult integrate_trajectory(const TestParticle& particle,
                                      std::span<const FieldSource> sources, double exit_plane_x,
                                      double dt, const IntegrationOptions& options,
                                      const PhysicalConstants& constants) {
    particle.validate(constants);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("time step must be positive");
    }
    for (const auto& s : sources) {
        s.validate();
    }
    const double sign = exit_plane_x >= particle.r0.x() ? 1.0 : -1.0;
    if (!(sign * (exit_plane_x - particle.r0.x()) > 0.0) || !(sign * particle.v0.x() > 0.0)) {
        throw DomainError("particle must start before the exit plane and move toward it");
    }
    const std::size_t stride = std::max<std::size_t>(1, options.sample_stride);

    const ForceModel model(particle, sources, options, constants);
    TrajectoryResult result;
    PhaseState state{0.0, particle.r0, particle.v0};
    result.samples.push_back({state.t, state.r, state.v});

    bool done = false;
    for (std::size_t n = 1; n <= options.max_steps; ++n) {
        PhaseState next = model.step(state, dt);
        if (sign * (next.r.x() - exit_plane_x) >= 0.0) {
            next = land_on_plane(model, state, dt, exit_plane_x, sign);
            result.samples.push_back({next.t, next.r, next.v});
            done = true;
            break;
        }
        if ((next.r - particle.r0).norm() > options.bounding_radius) {
            result.samples.push_back({next.t, next.r, next.v});
            result.reached_plane = false;
            done = true;
            break;
        }
        state = next;
        if (n % stride == 0) {
            result.samples.push_back({state.t, state.r, state.v});
        }
    }
    if (!done) {
        throw TimeoutError("step cap of " + std::to_string(options.max_steps) +
                           " reached before the exit plane");
    }
    result.deflection_angle = angle_between(particle.v0, result.final().v);
    return result;
}

TrajectoryResult integrate_trajectory(const TestParticle& particle, const FieldSource& source,
                                      double exit_plane_x, double dt,
                                      const IntegrationOptions& options,
                                      const PhysicalConstants& constants) {
    return integrate_trajectory(particle, std::span<const FieldSource>(&source, 1), exit_plane_x,
                                dt, options, constants);
}

double deflection_at_distance(const TestParticle& particle, const FieldSource& source_template,
                              const BeamLine& beam, double distance,
                              const PhysicalConstants& constants) {
    const FieldSource placed = source_template.at(beam.source_position(distance));
    IntegrationOptions options = beam.options;
    // Only the end point matters here.
    options.sample_stride = options.max_steps;
    return integrate_trajectory(particle, placed, beam.exit_plane_x, beam.dt, options, constants)
        .deflection_angle;
}

double critical_distance(const TestParticle& particle, const FieldSource& source_template,
                         const BeamLine& beam, double phi_c, const DistanceBracket& bracket,
                         const PhysicalConstants& constants) {
    if (!(bracket.near > 0.0) || !(bracket.far > bracket.near)) {
        throw DomainError("distance bracket must satisfy 0 < near < far");
    }
    if (!(phi_c > 0.0)) {
        throw DomainError("critical angle must be positive");
    }
    auto deflection = [&](double d) {
        return deflection_at_distance(particle, source_template, beam, d, constants);
    };

    constexpr int kMonotoneProbes = 17;
    const double ratio = std::pow(bracket.far / bracket.near, 1.0 / (kMonotoneProbes - 1));
    std::array<double, kMonotoneProbes> probe{};
    double d = bracket.near;
    for (int i = 0; i < kMonotoneProbes; ++i, d *= ratio) {
        probe[static_cast<std::size_t>(i)] = deflection(i + 1 == kMonotoneProbes ? bracket.far : d);
    }
    for (std::size_t i = 1; i < probe.size(); ++i) {
        if (probe[i] > probe[i - 1] * (1.0 + 1e-9) + 1e-15) {
            throw ProtocolError("deflection is not monotone decreasing in source distance");
        }
    }
    if (!(probe.front() >= phi_c && probe.back() <= phi_c)) {
        throw BracketError("distance bracket does not straddle the critical angle");
    }

    double lo = bracket.near;  // deflection >= phi_c
    double hi = bracket.far;   // deflection <= phi_c
    while ((hi - lo) > 1e-6 * lo) {
        const double mid = std::sqrt(lo * hi);
        (deflection(mid) >= phi_c ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

double light_deflection(double M, double b, const PhysicalConstants& constants) {
    if (!(b > 0.0)) {
        throw DomainError("impact parameter must be positive");
    }
    if (!(M >= 0.0)) {
        throw DomainError("mass must be nonnegative");
    }
    return 4.0 * constants.G * M / (b * constants.c * constants.c);
}

double sphere_radius_for_deflection(double delta_phi, double density,
                                    const PhysicalConstants& constants) {
    if (!(delta_phi > 0.0) || !(density > 0.0)) {
        throw DomainError("deflection and density must be positive");
    }
    return std::sqrt(3.0 * delta_phi * constants.c * constants.c /
                     (16.0 * std::numbers::pi * constants.G * density));
}

double sphere_mass(double radius, double density) {
    return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius * density;
}

}  // namespace ifm
