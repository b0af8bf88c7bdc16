#pragma once

#include "sphereivp/vec3.hpp"

namespace sphereivp {

/// Quaternion a + u, stored as real part a and imaginary (vector) part u.
struct Quaternion {
    double a = 1.0;
    Vec3 u{};

    constexpr Quaternion() = default;
    constexpr Quaternion(double a_, const Vec3& u_) : a(a_), u(u_) {}
    constexpr Quaternion(double a_, double x, double y, double z) : a(a_), u(x, y, z) {}

    /// Embeds a 3-vector as a pure (zero real part) quaternion.
    static constexpr Quaternion pure(const Vec3& v) { return {0.0, v}; }
};

double quat_norm(const Quaternion& q);
Quaternion quat_conjugate(const Quaternion& q);

/// Hamilton product (noncommutative).
Quaternion hamilton(const Quaternion& p, const Quaternion& q);

/// Multiplicative inverse; throws std::domain_error for the zero quaternion.
Quaternion quat_inverse(const Quaternion& q);

/// Quaternion exponential exp(a + u) = e^a (cos|u| + sin(|u|)/|u| u).
Quaternion quat_exp(const Quaternion& q);

/// Principal logarithm; throws std::domain_error for the zero quaternion.
Quaternion quat_log(const Quaternion& q);

/// Real power q^t = exp(t log q).
Quaternion quat_pow(const Quaternion& q, double t);

}  // namespace sphereivp
