#include "sphereivp/sphere.hpp"

#include <algorithm>
#include <limits>

namespace sphereivp {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

double clamped_dot(const Vec3& a, const Vec3& b) { return std::clamp(dot(a, b), -1.0, 1.0); }

void reject_antipodal(double d) {
    if (d <= -1.0 + sphere_tol::antipodal)
        throw AntipodalError("geodesic between (nearly) antipodal points is not unique");
}
}  // namespace

UnitPoint3 project(const Vec3& v) {
    const double n = norm(v);
    if (n < 1e-300) throw std::domain_error("project: cannot normalize the zero vector");
    return UnitPoint3(v.x / n, v.y / n, v.z / n);
}

UnitPoint3 exp_map(const UnitPoint3& p, const Vec3& v, double h) {
    const double nv = norm(v);
    const double a = h * nv;
    // Guarded direction: v = 0 gives sin(0) * 0 and the step stays at p.
    const Vec3 dir = v / std::max(nv, kEps);
    return project(std::cos(a) * p.vec() + std::sin(a) * dir);
}

Vec3 slerp_ambient(const Vec3& a, const Vec3& b, double t) {
    const double d = clamped_dot(a, b);
    const double th = std::acos(d);
    if (th < sphere_tol::parallel) return (1.0 - t) * a + t * b;
    const double s = std::sin(th);
    return (std::sin((1.0 - t) * th) / s) * a + (std::sin(t * th) / s) * b;
}

UnitPoint3 slerp(const UnitPoint3& a, const UnitPoint3& b, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("slerp: t must lie in [0, 1]");
    reject_antipodal(clamped_dot(a.vec(), b.vec()));
    return project(slerp_ambient(a.vec(), b.vec(), t));
}

UnitPoint3 slerp_quat(const UnitPoint3& a, const UnitPoint3& b, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("slerp_quat: t must lie in [0, 1]");
    reject_antipodal(clamped_dot(a.vec(), b.vec()));
    const Quaternion qa = Quaternion::pure(a.vec());
    const Quaternion qb = Quaternion::pure(b.vec());
    const Quaternion r = hamilton(qa, quat_pow(hamilton(quat_inverse(qa), qb), t));
    // The real part of r vanishes identically for unit endpoints; only the
    // vector part carries the interpolant.
    return project(r.u);
}

UnitPoint3 geodesic_midpoint(const UnitPoint3& a, const UnitPoint3& b) { return slerp(a, b, 0.5); }

SmallMatrix slerp_midpoint_jacobian(const UnitPoint3& q_star, const UnitPoint3& q) {
    const double d = clamped_dot(q_star.vec(), q.vec());
    reject_antipodal(d);
    // sec(th/2) via the half-angle identity, th = acos(d).
    const double sec_half = std::sqrt(2.0 / (1.0 + d));
    const double sec2 = sec_half * sec_half;
    SmallMatrix K(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            K(i, j) = 0.5 * sec_half *
                      (delta - 0.25 * q_star[j] * (q_star[i] + q[i]) * sec2);
        }
    return K;
}

}  // namespace sphereivp
