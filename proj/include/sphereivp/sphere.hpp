#pragma once

#include "sphereivp/linalg.hpp"
#include "sphereivp/quaternion.hpp"
#include "sphereivp/vec3.hpp"

namespace sphereivp {

/// Thrown when a geodesic is requested between (nearly) antipodal endpoints,
/// where the interpolant is not unique.
struct AntipodalError : std::domain_error {
    using std::domain_error::domain_error;
};

namespace sphere_tol {
/// Below this separation angle slerp falls back to linear interpolation.
inline constexpr double parallel = 1e-8;
/// Endpoints with dot ≤ -1 + antipodal are rejected.
inline constexpr double antipodal = 1e-8;
}  // namespace sphere_tol

/// Radial projection v / |v|; throws std::domain_error for the zero vector.
UnitPoint3 project(const Vec3& v);

/// Endpoint of the geodesic leaving p with velocity v, traversed for time h:
/// cos(h|v|) p + sin(h|v|) v/|v|. Well defined for v = 0 and either sign of h.
UnitPoint3 exp_map(const UnitPoint3& p, const Vec3& v, double h);

/// Trigonometric-form spherical interpolation extended to ambient arguments;
/// this is the exact code path whose derivative the midpoint Jacobian matches.
Vec3 slerp_ambient(const Vec3& a, const Vec3& b, double t);

/// Geodesic interpolation between unit points, t in [0, 1].
UnitPoint3 slerp(const UnitPoint3& a, const UnitPoint3& b, double t);

/// Same interpolant computed through the quaternion embedding a ((a)^-1 b)^t;
/// kept as an independent cross-check of slerp.
UnitPoint3 slerp_quat(const UnitPoint3& a, const UnitPoint3& b, double t);

/// Geodesic midpoint of two unit points (slerp at t = 1/2).
UnitPoint3 geodesic_midpoint(const UnitPoint3& a, const UnitPoint3& b);

/// Ambient derivative K of the geodesic midpoint slerp(q_star, q, 1/2) with
/// respect to q, evaluated at unit arguments:
///   K_ij = (1/2) sec(th/2) [ delta_ij - (1/4) q*_j (q*_i + q_i) sec^2(th/2) ]
/// where th is the angle between q_star and q.
SmallMatrix slerp_midpoint_jacobian(const UnitPoint3& q_star, const UnitPoint3& q);

}  // namespace sphereivp
