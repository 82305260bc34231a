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

#ifndef IFM_FIELDS_HPP
#define IFM_FIELDS_HPP

// Classical field sources, the Lorentz force, charged-particle trajectories
// and gravitational light deflection. Gaussian CGS units throughout:
// cm, g, s, statC, statV, gauss.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ifm {

using Vec3 = Eigen::Vector3d;

struct PhysicalConstants {
    double c = 3.00e10;        // cm / s
    double G = 6.67e-8;        // cm^3 g^-1 s^-2
    double hbar = 1.0546e-27;  // erg s
};

/// Axis-aligned box, closed on all faces.
struct AxisBox {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();

    bool contains(const Vec3& r) const;
    AxisBox shifted(const Vec3& offset) const { return {lo + offset, hi + offset}; }
};

struct PointCharge {
    double q = 0.0;  // statC
};

/// Uniform magnetic field inside `region` (relative to the source position).
struct UniformBRegion {
    Vec3 B = Vec3::Zero();  // gauss
    AxisBox region;
};

/// Uniform electric field inside `region` (relative to the source position).
struct UniformERegion {
    Vec3 E = Vec3::Zero();  // statV / cm
    AxisBox region;
};

/// Gravitating mass. Produces no electromagnetic field; see light_deflection().
struct PointMass {
    double M = 0.0;  // g
};

struct FieldSource {
    std::variant<PointCharge, UniformBRegion, UniformERegion, PointMass> kind;
    Vec3 position = Vec3::Zero();

    FieldSource at(const Vec3& new_position) const { return {kind, new_position}; }
    void validate() const;
};

struct FieldValues {
    Vec3 E = Vec3::Zero();  // statV / cm
    Vec3 B = Vec3::Zero();  // gauss
};

/// Throws DomainError at the position of a point charge.
FieldValues eval_fields(const FieldSource& source, const Vec3& r);

/// |E| for electric sources, |B| for magnetic ones.
double field_magnitude(const FieldSource& source, const Vec3& r);

/// Electrostatic potential in statV. Zero for sources without a defined
/// potential (uniform regions are treated as screened outside their box).
double scalar_potential(const FieldSource& source, const Vec3& r);

/// q [E + (v x B - B x v) / (2c)], which equals q [E + (v x B) / c] for
/// commuting classical vectors.
Vec3 lorentz_force(double q, const Vec3& v, const Vec3& E, const Vec3& B,
                   const PhysicalConstants& constants = {});

struct TestParticle {
    double q = 0.0;  // statC
    double m = 0.0;  // g
    Vec3 r0 = Vec3::Zero();
    Vec3 v0 = Vec3::Zero();

    /// Throws DomainError unless m > 0 and 0 < |v0| < 0.01 c.
    void validate(const PhysicalConstants& constants = {}) const;
};

struct TrajectorySample {
    double t = 0.0;
    Vec3 r = Vec3::Zero();
    Vec3 v = Vec3::Zero();
};

struct TrajectoryResult {
    std::vector<TrajectorySample> samples;
    /// Angle between the initial and final velocity, in [0, pi].
    double deflection_angle = 0.0;
    /// false if the particle left the bounding region before the exit plane.
    bool reached_plane = true;

    const TrajectorySample& final() const { return samples.back(); }
};

struct IntegrationOptions {
    std::size_t max_steps = 20'000'000;
    /// The run stops when the particle moves this far from its start (cm).
    double bounding_radius = 1.0e4;
    double singularity_cutoff = 1.0e-6;  // cm
    /// Keep every n-th step in the sample list (first and last always kept).
    std::size_t sample_stride = 1;
};

/// Classical RK4 for dr/dt = v, dv/dt = F/m until the particle crosses the
/// plane x = exit_plane_x. The last step is shortened so the final sample lies
/// on the plane. Throws TimeoutError, SingularityError, DomainError.
TrajectoryResult integrate_trajectory(const TestParticle& particle,
                                      std::span<const FieldSource> sources, double exit_plane_x,
                                      double dt, const IntegrationOptions& options = {},
                                      const PhysicalConstants& constants = {});

TrajectoryResult integrate_trajectory(const TestParticle& particle, const FieldSource& source,
                                      double exit_plane_x, double dt,
                                      const IntegrationOptions& options = {},
                                      const PhysicalConstants& constants = {});

/// Straight reference beam with a source that approaches it along
/// `approach_direction` toward the point `anchor`.
struct BeamLine {
    Vec3 anchor = Vec3::Zero();
    Vec3 approach_direction = Vec3::UnitY();
    double exit_plane_x = 0.0;
    double dt = 0.0;
    IntegrationOptions options;

    Vec3 source_position(double distance) const {
        return anchor + distance * approach_direction.normalized();
    }
};

struct DistanceBracket {
    double near = 0.0;
    double far = 0.0;
};

double deflection_at_distance(const TestParticle& particle, const FieldSource& source_template,
                              const BeamLine& beam, double distance,
                              const PhysicalConstants& constants = {});

/// Source distance at which the deflection equals phi_c, by bisection to
/// relative tolerance 1e-6. Throws BracketError if [near, far] does not
/// straddle phi_c and ProtocolError if the deflection is not monotone
/// decreasing in distance over the bracket.
double critical_distance(const TestParticle& particle, const FieldSource& source_template,
                         const BeamLine& beam, double phi_c, const DistanceBracket& bracket,
                         const PhysicalConstants& constants = {});

/// 4GM / (b c^2).
double light_deflection(double M, double b, const PhysicalConstants& constants = {});

/// Radius of a uniform sphere of `density` whose grazing ray is deflected by
/// delta_phi: R = sqrt(3 delta_phi c^2 / (16 pi G density)).
double sphere_radius_for_deflection(double delta_phi, double density,
                                    const PhysicalConstants& constants = {});

double sphere_mass(double radius, double density);

/// Quoted radius (km) for an Iridium sphere deflecting a grazing ray by 1e-9.
inline constexpr double kQuotedIridiumRadiusKm = 18'900.0;
/// Density of iridium, g/cm^3 (22.56 at room temperature, rounded).
inline constexpr double kIridiumDensity = 22.6;

}  // namespace ifm

#endif  // IFM_FIELDS_HPP
