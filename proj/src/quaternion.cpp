#include "sphereivp/quaternion.hpp"

#include <algorithm>
#include <limits>

namespace sphereivp {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

double quat_norm(const Quaternion& q) { return std::sqrt(q.a * q.a + dot(q.u, q.u)); }

Quaternion quat_conjugate(const Quaternion& q) { return {q.a, -q.u}; }

Quaternion hamilton(const Quaternion& p, const Quaternion& q) {
    return {p.a * q.a - dot(p.u, q.u), p.a * q.u + q.a * p.u + cross(p.u, q.u)};
}

Quaternion quat_inverse(const Quaternion& q) {
    const double n2 = q.a * q.a + dot(q.u, q.u);
    if (n2 == 0.0) throw std::domain_error("quat_inverse: zero quaternion");
    return {q.a / n2, -q.u / n2};
}

Quaternion quat_exp(const Quaternion& q) {
    const double un = norm(q.u);
    const double scale = std::exp(q.a);
    // sin(un)/un with a guarded denominator; exact 0 vector part stays 0.
    const double s = std::sin(un) / std::max(un, kEps);
    return {scale * std::cos(un), (scale * s) * q.u};
}

Quaternion quat_log(const Quaternion& q) {
    const double n = quat_norm(q);
    if (n == 0.0) throw std::domain_error("quat_log: zero quaternion");
    const double un = norm(q.u);
    const double angle = std::acos(std::clamp(q.a / n, -1.0, 1.0));
    return {std::log(n), (angle / std::max(un, kEps)) * q.u};
}

Quaternion quat_pow(const Quaternion& q, double t) {
    const Quaternion l = quat_log(q);
    return quat_exp({t * l.a, t * l.u});
}

}  // namespace sphereivp
