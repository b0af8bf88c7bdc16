#include "doctest.h"
#include "sphereivp/quaternion.hpp"
#include "test_support.hpp"

using namespace sphereivp;
using namespace testsupport;

TEST_CASE("vector algebra basics") {
    const Vec3 a{1.0, 2.0, 3.0};
    const Vec3 b{-2.0, 0.5, 4.0};
    CHECK(dot(a, b) == doctest::Approx(11.0));
    CHECK(norm(Vec3{3.0, 4.0, 0.0}) == doctest::Approx(5.0));
    CHECK(inf_norm(b) == doctest::Approx(4.0));

    const Vec3 c = cross(a, b);
    CHECK(std::abs(dot(c, a)) < 1e-13);
    CHECK(std::abs(dot(c, b)) < 1e-13);
    const Vec3 anti = cross(b, a);
    for (int i = 0; i < 3; ++i) CHECK(c[i] == doctest::Approx(-anti[i]));
}

TEST_CASE("unit point construction enforces the unit constraint") {
    CHECK_NOTHROW(UnitPoint3(1.0, 0.0, 0.0));
    CHECK_NOTHROW(UnitPoint3(1.0 + 5e-10, 0.0, 0.0));
    CHECK_THROWS_AS(UnitPoint3(1.1, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(UnitPoint3(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("hamilton product of pure quaternions gives (-dot, cross)") {
    auto rng = make_rng(11);
    for (int k = 0; k < 50; ++k) {
        const Vec3 u = random_vec(rng), v = random_vec(rng);
        const Quaternion h = hamilton(Quaternion::pure(u), Quaternion::pure(v));
        CHECK(h.a == doctest::Approx(-dot(u, v)));
        const Vec3 c = cross(u, v);
        for (int i = 0; i < 3; ++i) CHECK(h.u[i] == doctest::Approx(c[i]));
    }
}

TEST_CASE("hamilton product is associative and multiplicative on norms") {
    auto rng = make_rng(12);
    for (int k = 0; k < 50; ++k) {
        const Quaternion p{uniform(rng, -2, 2), random_vec(rng)};
        const Quaternion q{uniform(rng, -2, 2), random_vec(rng)};
        const Quaternion r{uniform(rng, -2, 2), random_vec(rng)};
        const Quaternion lhs = hamilton(hamilton(p, q), r);
        const Quaternion rhs = hamilton(p, hamilton(q, r));
        CHECK(lhs.a == doctest::Approx(rhs.a).epsilon(1e-12));
        for (int i = 0; i < 3; ++i) CHECK(lhs.u[i] == doctest::Approx(rhs.u[i]).epsilon(1e-12));
        CHECK(quat_norm(hamilton(p, q)) == doctest::Approx(quat_norm(p) * quat_norm(q)));
    }
}

TEST_CASE("quaternion inverse gives the identity") {
    auto rng = make_rng(13);
    for (int k = 0; k < 25; ++k) {
        const Quaternion q{uniform(rng, -2, 2), random_vec(rng)};
        const Quaternion id = hamilton(q, quat_inverse(q));
        CHECK(id.a == doctest::Approx(1.0));
        CHECK(norm(id.u) < 1e-13);
    }
    CHECK_THROWS_AS(quat_inverse(Quaternion{0.0, {0.0, 0.0, 0.0}}), std::domain_error);
}

TEST_CASE("exp and log are mutually inverse away from the real axis") {
    auto rng = make_rng(14);
    for (int k = 0; k < 50; ++k) {
        Quaternion q{uniform(rng, -1.5, 1.5), random_vec(rng)};
        if (norm(q.u) < 1e-3 || quat_norm(q) < 1e-3) continue;
        const Quaternion back = quat_exp(quat_log(q));
        CHECK(back.a == doctest::Approx(q.a).epsilon(1e-12));
        for (int i = 0; i < 3; ++i) CHECK(back.u[i] == doctest::Approx(q.u[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(quat_log(Quaternion{0.0, {0.0, 0.0, 0.0}}), std::domain_error);

    // exp of a pure quaternion lands on the unit sphere of quaternions
    const Quaternion e = quat_exp(Quaternion::pure({0.3, -0.2, 0.4}));
    CHECK(quat_norm(e) == doctest::Approx(1.0));
}

TEST_CASE("fractional power of a rotation halves the angle") {
    // Closed-form oracle: for q = (cos a, sin a * n) with unit n, the power
    // q^t must be (cos(t a), sin(t a) * n).
    const Vec3 n{1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
    const double a = 0.7;
    const Quaternion q{std::cos(a), std::sin(a) * n};

    const Quaternion half = quat_pow(q, 0.5);
    CHECK(half.a == doctest::Approx(std::cos(0.35)).epsilon(1e-13));
    for (int i = 0; i < 3; ++i)
        CHECK(half.u[i] == doctest::Approx(std::sin(0.35) * n[i]).epsilon(1e-13));

    const Quaternion same = quat_pow(q, 1.0);
    CHECK(same.a == doctest::Approx(q.a).epsilon(1e-13));
    const Quaternion one = quat_pow(q, 0.0);
    CHECK(one.a == doctest::Approx(1.0));
    CHECK(norm(one.u) < 1e-14);

    // squaring the half power recovers q
    const Quaternion sq = hamilton(half, half);
    CHECK(sq.a == doctest::Approx(q.a).epsilon(1e-13));
    for (int i = 0; i < 3; ++i) CHECK(sq.u[i] == doctest::Approx(q.u[i]).epsilon(1e-13));
}
