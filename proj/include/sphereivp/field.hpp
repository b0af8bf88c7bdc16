#pragma once

#include <functional>
#include <string>

#include "sphereivp/linalg.hpp"
#include "sphereivp/vec3.hpp"

namespace sphereivp {

/// A tangent vector field on the unit sphere. evaluate(p, t) must return a
/// vector orthogonal to p whenever p is unit; it is defined on a neighborhood
/// of the sphere so finite differences and projection-based schemes can probe
/// off-sphere points. analytic_jacobian and observable are optional; leave
/// them empty when the problem has none.
struct VectorFieldSpec {
    std::string name;
    std::function<Vec3(const Vec3&, double)> evaluate;
    std::function<SmallMatrix(const Vec3&, double)> analytic_jacobian;
    /// Conserved quantity (e.g. an energy) evaluated at a state.
    std::function<double(const Vec3&)> observable;

    bool has_jacobian() const { return static_cast<bool>(analytic_jacobian); }
    bool has_observable() const { return static_cast<bool>(observable); }
};

/// Central finite-difference Jacobian of the field at ambient point p, using
/// per-coordinate offset eps^(1/3) * max(1, |p|).
SmallMatrix jacobian_fd(const VectorFieldSpec& field, const Vec3& p, double t);

/// Field Jacobian at p: the analytic one when present, else jacobian_fd.
SmallMatrix field_jacobian(const VectorFieldSpec& field, const Vec3& p, double t);

}  // namespace sphereivp
