#include "sphereivp/problems.hpp"

#include <cmath>

namespace sphereivp {

namespace {

SmallMatrix skew(const Vec3& c) {
    SmallMatrix S(3);
    S(0, 1) = -c.z;
    S(0, 2) = c.y;
    S(1, 0) = c.z;
    S(1, 2) = -c.x;
    S(2, 0) = -c.y;
    S(2, 1) = c.x;
    return S;
}

constexpr double kVortexSingularity = 1e-12;

}  // namespace

// ============================================================================
// Four-vortex interaction
// ============================================================================

const std::vector<Vec3>& four_vortex_centers() {
    static const std::vector<Vec3> centers = {
        Vec3{1.0, -1.0, 1.0} / std::sqrt(3.0),
        Vec3{1.0, -1.0, -1.0} / std::sqrt(3.0),
        Vec3{-2.0, 1.0, 0.0} / std::sqrt(5.0),
        Vec3{-1.0, -1.0, 0.0} / std::sqrt(2.0),
    };
    return centers;
}

VectorFieldSpec four_vortex_field() {
    VectorFieldSpec spec;
    spec.name = "four-vortex";
    spec.evaluate = [](const Vec3& x, double) {
        Vec3 f{};
        for (const Vec3& c : four_vortex_centers()) {
            const double u = 1.0 - dot(c, x);
            if (u < kVortexSingularity)
                throw std::domain_error("four-vortex field evaluated at a vortex center");
            f += cross(c, x) / (2.0 * u);
        }
        return f;
    };
    spec.analytic_jacobian = [](const Vec3& x, double) {
        SmallMatrix G(3);
        for (const Vec3& c : four_vortex_centers()) {
            const double u = 1.0 - dot(c, x);
            if (u < kVortexSingularity)
                throw std::domain_error("four-vortex field evaluated at a vortex center");
            const SmallMatrix S = skew(c);
            const Vec3 cx = cross(c, x);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    G(i, j) += S(i, j) / (2.0 * u) + cx[i] * c[j] / (2.0 * u * u);
        }
        return G;
    };
    return spec;
}

// ============================================================================
// Stiff attractor
// ============================================================================

VectorFieldSpec stiff_attractor_field() {
    static const Vec3 m{0.5, -0.5, -0.5};  // diagonal of M
    VectorFieldSpec spec;
    spec.name = "stiff-attractor";
    spec.evaluate = [](const Vec3& q, double) {
        const Vec3 Mq{m.x * q.x, m.y * q.y, m.z * q.z};
        return Mq - dot(q, Mq) * q;
    };
    spec.analytic_jacobian = [](const Vec3& q, double) {
        const Vec3 Mq{m.x * q.x, m.y * q.y, m.z * q.z};
        const double qMq = dot(q, Mq);
        SmallMatrix G(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                G(i, j) = -2.0 * q[i] * Mq[j];
                if (i == j) G(i, j) += m[i] - qMq;
            }
        return G;
    };
    return spec;
}

// ============================================================================
// Rigid body and spinning tops
// ============================================================================

VectorFieldSpec rigid_body_field() {
    // Euler coefficients a_i for inertia (2, 1, 2/3): (1/I3 - 1/I2, ...).
    static const Vec3 a{0.5, -1.0, 0.5};
    static const Vec3 inv_inertia{0.5, 1.0, 1.5};
    VectorFieldSpec spec;
    spec.name = "rigid-body";
    spec.evaluate = [](const Vec3& y, double) {
        return Vec3{a.x * y.y * y.z, a.y * y.x * y.z, a.z * y.x * y.y};
    };
    spec.analytic_jacobian = [](const Vec3& y, double) {
        SmallMatrix G(3);
        G(0, 1) = a.x * y.z;
        G(0, 2) = a.x * y.y;
        G(1, 0) = a.y * y.z;
        G(1, 2) = a.y * y.x;
        G(2, 0) = a.z * y.y;
        G(2, 1) = a.z * y.x;
        return G;
    };
    spec.observable = [](const Vec3& y) {
        return 0.5 * (y.x * y.x * inv_inertia.x + y.y * y.y * inv_inertia.y +
                      y.z * y.z * inv_inertia.z);
    };
    return spec;
}

VectorFieldSpec spinning_top_field(const Vec3& inertia, double cubic) {
    if (inertia.x <= 0.0 || inertia.y <= 0.0 || inertia.z <= 0.0)
        throw std::invalid_argument("spinning_top_field: moments of inertia must be positive");
    VectorFieldSpec spec;
    spec.name = "spinning-top";
    auto grad = [inertia, cubic](const Vec3& p) {
        return Vec3{(p.x + 1.5 * cubic * p.x * p.x) / inertia.x,
                    (p.y + 1.5 * cubic * p.y * p.y) / inertia.y,
                    (p.z + 1.5 * cubic * p.z * p.z) / inertia.z};
    };
    spec.evaluate = [grad](const Vec3& p, double) { return cross(p, grad(p)); };
    spec.analytic_jacobian = [inertia, cubic, grad](const Vec3& p, double) {
        const SmallMatrix Sp = skew(p);
        const SmallMatrix Sw = skew(grad(p));
        const Vec3 d{(1.0 + 3.0 * cubic * p.x) / inertia.x, (1.0 + 3.0 * cubic * p.y) / inertia.y,
                     (1.0 + 3.0 * cubic * p.z) / inertia.z};
        SmallMatrix G(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) G(i, j) = -Sw(i, j) + Sp(i, j) * d[j];
        return G;
    };
    spec.observable = [inertia, cubic](const Vec3& p) {
        double H = 0.0;
        for (int j = 0; j < 3; ++j)
            H += 0.5 * (p[j] * p[j] + cubic * p[j] * p[j] * p[j]) / inertia[j];
        return H;
    };
    return spec;
}

VectorFieldSpec perturbed_top_field() {
    VectorFieldSpec spec = spinning_top_field({1.0, 2.0, 4.0}, 2.0 / 3.0);
    spec.name = "perturbed-top";
    return spec;
}

// ============================================================================
// Registry
// ============================================================================

const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = {"four-vortex", "stiff-attractor", "rigid-body",
                                                   "perturbed-top"};
    return names;
}

VectorFieldSpec make_problem(const std::string& key) {
    if (key == "four-vortex") return four_vortex_field();
    if (key == "stiff-attractor") return stiff_attractor_field();
    if (key == "rigid-body") return rigid_body_field();
    if (key == "perturbed-top") return perturbed_top_field();
    std::string names;
    for (const auto& n : problem_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown problem '" + key + "' (expected one of " + names + ")");
}

UnitPoint3 default_start(const std::string& key) {
    if (key == "four-vortex") return {1.0, 0.0, 0.0};
    if (key == "stiff-attractor")
        return project({std::sin(1.2), 0.3 * std::cos(1.2), -0.954 * std::cos(1.2)});
    if (key == "rigid-body" || key == "perturbed-top")
        return {std::cos(1.1), 0.0, std::sin(1.1)};
    make_problem(key);  // throws the canonical unknown-problem error
    return {1.0, 0.0, 0.0};
}

std::vector<double> hamiltonian_trace(const Trajectory& traj, const VectorFieldSpec& field) {
    if (!field.has_observable())
        throw std::invalid_argument("hamiltonian_trace: field has no observable");
    if (traj.states.empty()) throw std::invalid_argument("hamiltonian_trace: empty trajectory");
    const double H0 = field.observable(traj.states.front().vec());
    if (H0 == 0.0) throw std::invalid_argument("hamiltonian_trace: zero reference observable");
    std::vector<double> err;
    err.reserve(traj.states.size());
    for (const auto& p : traj.states) err.push_back(std::abs(field.observable(p.vec()) - H0) / std::abs(H0));
    return err;
}

}  // namespace sphereivp
