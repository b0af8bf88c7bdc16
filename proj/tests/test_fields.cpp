#include "doctest.h"
#include "sphereivp/problems.hpp"
#include "test_support.hpp"

using namespace sphereivp;
using namespace testsupport;

namespace {

/// Rejects points too close to a vortex center (the field is singular there).
bool vortex_degenerate(const Vec3& x) {
    for (const Vec3& c : four_vortex_centers())
        if (1.0 - dot(c, x) < 0.05) return true;
    return false;
}

}  // namespace

TEST_CASE("all registry fields are tangent to the sphere") {
    auto rng = make_rng(41);
    for (const std::string& key : problem_names()) {
        const VectorFieldSpec f = make_problem(key);
        int tested = 0;
        while (tested < 200) {
            const UnitPoint3 p = random_unit(rng);
            if (key == "four-vortex" && vortex_degenerate(p.vec())) continue;
            const Vec3 v = f.evaluate(p.vec(), 0.0);
            CHECK(std::abs(dot(v, p.vec())) < 1e-12 * std::max(1.0, norm(v)));
            ++tested;
        }
    }
}

TEST_CASE("four-vortex matches independently computed values") {
    const VectorFieldSpec f = four_vortex_field();
    // frozen oracle values (summed term by term outside this code base)
    const Vec3 f1 = f.evaluate({1.0, 0.0, 0.0}, 0.0);
    CHECK(std::abs(f1.x) < 1e-15);
    CHECK(std::abs(f1.y) < 1e-15);
    CHECK(f1.z == doctest::Approx(1.4550981962210916).epsilon(1e-14));

    const Vec3 f2 = f.evaluate({0.6, 0.8, 0.0}, 0.0);
    CHECK(std::abs(f2.x) < 1e-15);
    CHECK(std::abs(f2.y) < 1e-15);
    CHECK(f2.z == doctest::Approx(0.27179654256426083).epsilon(1e-14));

    CHECK(four_vortex_centers().size() == 4);
    for (const Vec3& c : four_vortex_centers()) CHECK(norm(c) == doctest::Approx(1.0));
}

TEST_CASE("four-vortex throws at a vortex center") {
    const VectorFieldSpec f = four_vortex_field();
    CHECK_THROWS_AS(f.evaluate(four_vortex_centers()[0], 0.0), std::domain_error);
    CHECK_THROWS_AS(f.analytic_jacobian(four_vortex_centers()[2], 0.0), std::domain_error);
}

TEST_CASE("analytic field jacobians match finite differences") {
    auto rng = make_rng(42);
    std::vector<VectorFieldSpec> fields;
    for (const std::string& key : problem_names()) fields.push_back(make_problem(key));
    fields.push_back(tangent_test_field(random_vec(rng), random_vec(rng)));
    fields.push_back(spinning_top_field({0.7, 1.3, 3.1}, 0.4));

    for (const VectorFieldSpec& f : fields) {
        int tested = 0;
        while (tested < 25) {
            const UnitPoint3 p = random_unit(rng);
            if (f.name == "four-vortex" && vortex_degenerate(p.vec())) continue;
            const SmallMatrix G = f.analytic_jacobian(p.vec(), 0.0);
            const SmallMatrix Gfd = jacobian_fd(f, p.vec(), 0.0);
            CHECK(matrix_rel_err(G, Gfd) < 1e-6);
            ++tested;
        }
    }
}

TEST_CASE("field_jacobian falls back to finite differences") {
    VectorFieldSpec f = stiff_attractor_field();
    const UnitPoint3 p = project({0.3, -0.8, 0.52});
    const SmallMatrix exact = field_jacobian(f, p.vec(), 0.0);
    f.analytic_jacobian = nullptr;
    CHECK_FALSE(f.has_jacobian());
    const SmallMatrix fallback = field_jacobian(f, p.vec(), 0.0);
    CHECK(matrix_rel_err(fallback, exact) < 1e-6);
}

TEST_CASE("stiff attractor has the advertised equilibria and contraction") {
    const VectorFieldSpec f = stiff_attractor_field();
    for (const Vec3& e : {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
        CHECK(norm(f.evaluate(e, 0.0)) < 1e-15);
    }
    // the linearization at the attractor pair is -I: uniform contraction
    const SmallMatrix G = f.analytic_jacobian({1.0, 0.0, 0.0}, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(G(i, j) == doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("rigid body uses the classic Euler coefficients") {
    const VectorFieldSpec f = rigid_body_field();
    auto rng = make_rng(43);
    for (int k = 0; k < 50; ++k) {
        const Vec3 y = random_vec(rng);
        const Vec3 v = f.evaluate(y, 0.0);
        CHECK(v.x == doctest::Approx(0.5 * y.y * y.z).epsilon(1e-14));
        CHECK(v.y == doctest::Approx(-1.0 * y.x * y.z).epsilon(1e-14));
        CHECK(v.z == doctest::Approx(0.5 * y.x * y.y).epsilon(1e-14));
        // cross-product form with the literal energy gradient (y1/2, y2, 3 y3/2)
        const Vec3 alt = cross(y, Vec3{0.5 * y.x, 1.0 * y.y, 1.5 * y.z});
        CHECK(norm(v - alt) < 1e-14 * std::max(1.0, norm(v)));
        // documented quadratic energy
        const double H = 0.5 * (y.x * y.x / 2.0 + y.y * y.y / 1.0 + y.z * y.z / (2.0 / 3.0));
        CHECK(f.observable(y) == doctest::Approx(H).epsilon(1e-14));
    }
}

TEST_CASE("spinning top reduces to the rigid body at zero cubic coefficient") {
    const VectorFieldSpec top = spinning_top_field({2.0, 1.0, 2.0 / 3.0}, 0.0);
    const VectorFieldSpec rb = rigid_body_field();
    auto rng = make_rng(44);
    for (int k = 0; k < 50; ++k) {
        const UnitPoint3 p = random_unit(rng);
        CHECK(norm(top.evaluate(p.vec(), 0.0) - rb.evaluate(p.vec(), 0.0)) < 1e-13);
        CHECK(matrix_rel_err(top.analytic_jacobian(p.vec(), 0.0),
                             rb.analytic_jacobian(p.vec(), 0.0)) < 1e-13);
        CHECK(top.observable(p.vec()) == doctest::Approx(rb.observable(p.vec())).epsilon(1e-13));
    }
    CHECK_THROWS_AS(spinning_top_field({1.0, -2.0, 4.0}, 0.0), std::invalid_argument);
}

TEST_CASE("perturbed top gradient matches finite differences of its energy") {
    const VectorFieldSpec f = perturbed_top_field();
    auto rng = make_rng(45);
    const Vec3 inertia{1.0, 2.0, 4.0};
    for (int k = 0; k < 50; ++k) {
        const UnitPoint3 p = random_unit(rng);
        // documented gradient (p_j + p_j^2) / I_j, checked against FD of H
        Vec3 grad;
        for (int j = 0; j < 3; ++j) grad[j] = (p[j] + p[j] * p[j]) / inertia[j];
        const double delta = 1e-6;
        for (int j = 0; j < 3; ++j) {
            Vec3 hi = p.vec(), lo = p.vec();
            hi[j] += delta;
            lo[j] -= delta;
            const double fd = (f.observable(hi) - f.observable(lo)) / (2.0 * delta);
            CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-7));
        }
        // and the field is the cross product with that gradient
        CHECK(norm(f.evaluate(p.vec(), 0.0) - cross(p.vec(), grad)) < 1e-13);
    }
}

TEST_CASE("registry lookup and documented start states") {
    CHECK(problem_names() ==
          std::vector<std::string>{"four-vortex", "stiff-attractor", "rigid-body", "perturbed-top"});
    CHECK_THROWS_AS(make_problem("no-such-problem"), std::invalid_argument);
    CHECK_THROWS_AS(default_start("no-such-problem"), std::invalid_argument);

    const UnitPoint3 fv = default_start("four-vortex");
    CHECK(fv.x() == 1.0);
    const UnitPoint3 rb = default_start("rigid-body");
    CHECK(rb.x() == doctest::Approx(std::cos(1.1)).epsilon(1e-15));
    CHECK(rb.z() == doctest::Approx(std::sin(1.1)).epsilon(1e-15));
    for (const std::string& key : problem_names())
        CHECK(std::abs(norm(default_start(key).vec()) - 1.0) < 1e-12);
}

TEST_CASE("hamiltonian_trace demands an observable and starts at zero") {
    const VectorFieldSpec vortex = four_vortex_field();
    Trajectory traj;
    traj.times = {0.0};
    traj.states = {UnitPoint3{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(hamiltonian_trace(traj, vortex), std::invalid_argument);

    const VectorFieldSpec rb = rigid_body_field();
    const Trajectory run = integrate(MethodKind::Scn, rb, default_start("rigid-body"), 0.0, 5.0, 0.5);
    const std::vector<double> tr = hamiltonian_trace(run, rb);
    CHECK(tr.size() == run.size());
    CHECK(tr.front() == 0.0);
    for (double v : tr) CHECK(v >= 0.0);

    CHECK_THROWS_AS(hamiltonian_trace(Trajectory{}, rb), std::invalid_argument);
}
