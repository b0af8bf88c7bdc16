#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "sphereivp/field.hpp"
#include "sphereivp/problems.hpp"
#include "sphereivp/sphere.hpp"

namespace testsupport {

using namespace sphereivp;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {scale * g(rng), scale * g(rng), scale * g(rng)};
}

inline UnitPoint3 random_unit(std::mt19937_64& rng) {
    for (;;) {
        const Vec3 v = random_vec(rng);
        if (norm(v) > 1e-3) return project(v);
    }
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

/// Rotation of p about the axis omega/|omega| by angle |omega| t.
inline Vec3 rodrigues(const Vec3& p, const Vec3& omega, double t) {
    const double w = norm(omega);
    if (w == 0.0) return p;
    const Vec3 k = omega / w;
    const double a = w * t;
    return std::cos(a) * p + std::sin(a) * cross(k, p) + (1.0 - std::cos(a)) * dot(k, p) * k;
}

inline VectorFieldSpec zero_field() {
    VectorFieldSpec f;
    f.name = "zero";
    f.evaluate = [](const Vec3&, double) { return Vec3{}; };
    return f;
}

inline VectorFieldSpec rotation_field(const Vec3& omega) {
    VectorFieldSpec f;
    f.name = "rotation";
    f.evaluate = [omega](const Vec3& p, double) { return cross(omega, p); };
    f.analytic_jacobian = [omega](const Vec3&, double) {
        SmallMatrix S(3);
        S(0, 1) = -omega.z;
        S(0, 2) = omega.y;
        S(1, 0) = omega.z;
        S(1, 2) = -omega.x;
        S(2, 0) = -omega.y;
        S(2, 1) = omega.x;
        return S;
    };
    return f;
}

/// Nonlinear tangent field f(p) = omega x p + c - (p.c) p, tangent on the
/// sphere for every omega, c; the workhorse for randomized properties.
inline VectorFieldSpec tangent_test_field(const Vec3& omega, const Vec3& c) {
    VectorFieldSpec f;
    f.name = "tangent-test";
    f.evaluate = [omega, c](const Vec3& p, double) {
        return cross(omega, p) + c - dot(p, c) * p;
    };
    f.analytic_jacobian = [omega, c](const Vec3& p, double) {
        SmallMatrix S = rotation_field(omega).analytic_jacobian(p, 0.0);
        const double pc = dot(p, c);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                S(i, j) -= p[i] * c[j];
                if (i == j) S(i, j) -= pc;
            }
        return S;
    };
    return f;
}

/// Central finite-difference Jacobian of a generic R^3 -> R^3 map.
inline SmallMatrix fd_jacobian3(const std::function<Vec3(const Vec3&)>& fn, const Vec3& x) {
    const double delta = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, norm(x));
    SmallMatrix J(3);
    for (int j = 0; j < 3; ++j) {
        Vec3 lo = x, hi = x;
        lo[j] -= delta;
        hi[j] += delta;
        const Vec3 df = fn(hi) - fn(lo);
        for (int i = 0; i < 3; ++i) J(i, j) = df[i] / (2.0 * delta);
    }
    return J;
}

/// max_ij |A_ij - B_ij| / max(1, max_ij |B_ij|).
inline double matrix_rel_err(const SmallMatrix& A, const SmallMatrix& B) {
    double diff = 0.0, scale = 1.0;
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            diff = std::max(diff, std::abs(A(i, j) - B(i, j)));
            scale = std::max(scale, std::abs(B(i, j)));
        }
    return diff / scale;
}

}  // namespace testsupport
