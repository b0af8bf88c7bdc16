#pragma once

#include <cmath>
#include <stdexcept>

namespace sphereivp {

/// Ambient 3-vector with the usual Euclidean operations.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr double operator[](int i) const { return i == 0 ? x : i == 1 ? y : z; }
    constexpr double& operator[](int i) { return i == 0 ? x : i == 1 ? y : z; }

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
    constexpr Vec3 operator/(double a) const { return {x / a, y / a, z / a}; }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double a) { x *= a; y *= a; z *= a; return *this; }
};

constexpr Vec3 operator*(double a, const Vec3& v) { return v * a; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline double inf_norm(const Vec3& v) {
    return std::max(std::abs(v.x), std::max(std::abs(v.y), std::abs(v.z)));
}

/// Point constrained to the unit sphere. Construction rejects vectors whose
/// length differs from 1 by more than unit_tol; use project() to renormalize
/// arbitrary vectors instead.
class UnitPoint3 {
public:
    static constexpr double unit_tol = 1e-9;

    UnitPoint3() : v_(1.0, 0.0, 0.0) {}

    UnitPoint3(double x, double y, double z) : v_(x, y, z) {
        if (std::abs(norm(v_) - 1.0) > unit_tol)
            throw std::invalid_argument("UnitPoint3: coordinates are not unit length");
    }

    explicit UnitPoint3(const Vec3& v) : UnitPoint3(v.x, v.y, v.z) {}

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }
    double operator[](int i) const { return v_[i]; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

private:
    Vec3 v_;
};

inline double distance(const UnitPoint3& a, const UnitPoint3& b) { return norm(a.vec() - b.vec()); }

}  // namespace sphereivp
