#include "sphereivp/field.hpp"

#include <cmath>
#include <limits>

namespace sphereivp {

SmallMatrix jacobian_fd(const VectorFieldSpec& field, const Vec3& p, double t) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double delta = std::cbrt(eps) * std::max(1.0, norm(p));
    SmallMatrix J(3);
    for (int j = 0; j < 3; ++j) {
        Vec3 lo = p, hi = p;
        lo[j] -= delta;
        hi[j] += delta;
        const Vec3 df = field.evaluate(hi, t) - field.evaluate(lo, t);
        for (int i = 0; i < 3; ++i) J(i, j) = df[i] / (2.0 * delta);
    }
    return J;
}

SmallMatrix field_jacobian(const VectorFieldSpec& field, const Vec3& p, double t) {
    if (field.has_jacobian()) return field.analytic_jacobian(p, t);
    return jacobian_fd(field, p, t);
}

}  // namespace sphereivp
