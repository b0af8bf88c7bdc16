#include "sphereivp/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sphereivp {

// ============================================================================
// Method taxonomy
// ============================================================================

std::string to_string(MethodKind m) {
    switch (m) {
        case MethodKind::Sfe: return "sfe";
        case MethodKind::SbeFixedPoint: return "sbe-fp";
        case MethodKind::SbeNewton: return "sbe";
        case MethodKind::Pbe3: return "pbe3";
        case MethodKind::Pbe6: return "pbe";
        case MethodKind::Scn: return "scn";
        case MethodKind::ScnForward: return "scn-fwd";
    }
    return "?";
}

MethodKind parse_method(const std::string& name) {
    static const std::map<std::string, MethodKind> table = {
        {"sfe", MethodKind::Sfe},
        {"sbe-fp", MethodKind::SbeFixedPoint},
        {"sbe-fixed-point", MethodKind::SbeFixedPoint},
        {"sbe", MethodKind::SbeNewton},
        {"sbe-newton", MethodKind::SbeNewton},
        {"pbe3", MethodKind::Pbe3},
        {"pbe", MethodKind::Pbe6},
        {"pbe6", MethodKind::Pbe6},
        {"scn", MethodKind::Scn},
        {"scn-fwd", MethodKind::ScnForward},
        {"scn-forward", MethodKind::ScnForward},
    };
    const auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown method '" + name +
                                    "' (expected one of sfe, sbe-fp, sbe, pbe3, pbe, scn, scn-fwd)");
    return it->second;
}

bool is_implicit(MethodKind m) { return m != MethodKind::Sfe; }

const std::vector<MethodKind>& all_methods() {
    static const std::vector<MethodKind> ms = {
        MethodKind::Sfe,  MethodKind::SbeFixedPoint, MethodKind::SbeNewton, MethodKind::Pbe3,
        MethodKind::Pbe6, MethodKind::Scn,           MethodKind::ScnForward,
    };
    return ms;
}

IntegrationError::IntegrationError(int step_index_, double time_, const std::string& reason)
    : std::runtime_error("step " + std::to_string(step_index_) + " at t=" +
                         std::to_string(time_) + " failed: " + reason),
      step_index(step_index_),
      time(time_) {}

// ============================================================================
// Residual/Jacobian assembly
// ============================================================================

namespace detail {

namespace {
/// Shared tail of the velocity blocks: derivative w.r.t. s of
/// sign * cos(hh |s|) base - sin(hh |s|) s/nu, with nu = max(|s|, guard).
SmallMatrix trig_velocity_block(const Vec3& s, const Vec3& base, double hh, double guard,
                                double first_sign) {
    const double nv = norm(s);
    const double nu = std::max(nv, guard);
    const double a = hh * nv;
    const double sa = std::sin(a);
    const double ca = std::cos(a);
    SmallMatrix B(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            B(i, j) = first_sign * hh * sa * base[i] * s[j] / nu -
                      hh * ca * s[i] * s[j] / (nu * nu) -
                      sa * (delta / nu - s[i] * s[j] / (nu * nu * nu));
        }
    return B;
}
}  // namespace

SmallMatrix sine_direction_jacobian(const Vec3& s, double h, double guard) {
    const double nv = norm(s);
    const double nu = std::max(nv, guard);
    const double a = h * nv;
    const double sa = std::sin(a);
    const double ca = std::cos(a);
    SmallMatrix B(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            B(i, j) = h * ca * s[i] * s[j] / (nu * nu) + sa * (delta / nu - s[i] * s[j] / (nu * nu * nu));
        }
    return B;
}

SmallMatrix sbe_velocity_block(const Vec3& s, const Vec3& q, double h, double guard) {
    return trig_velocity_block(s, q, h, guard, -1.0);
}

SmallMatrix scn_velocity_block(const Vec3& s, const Vec3& m, double h, double guard, bool forward) {
    return trig_velocity_block(s, m, 0.5 * h, guard, forward ? 1.0 : -1.0);
}

Vec3 sbe_position_residual(const Vec3& q_prev, const Vec3& q, const Vec3& s, double h,
                           double guard) {
    const double nv = norm(s);
    const double a = h * nv;
    return -1.0 * q_prev + std::cos(a) * q - (std::sin(a) / std::max(nv, guard)) * s;
}

Vec3 scn_position_residual(const Vec3& q_prev, const Vec3& q, const Vec3& m, const Vec3& s,
                           double h, double guard, bool forward) {
    const double nv = norm(s);
    const double a = 0.5 * h * nv;
    const Vec3 arc = std::cos(a) * m + (std::sin(a) / std::max(nv, guard)) * s;
    if (forward) return q - arc;  // arc traversed forward from the midpoint lands on q
    const Vec3 back = std::cos(a) * m - (std::sin(a) / std::max(nv, guard)) * s;
    return back - q_prev;  // traversed backward it lands on q_prev
}

SmallMatrix slerp_midpoint_jacobian_misprinted(const UnitPoint3& q_star, const UnitPoint3& q) {
    const double d = std::clamp(dot(q_star.vec(), q.vec()), -1.0, 1.0);
    const double sec_half = std::sqrt(2.0 / (1.0 + d));
    const double sec2 = sec_half * sec_half;
    SmallMatrix K(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            K(i, j) = 0.5 * sec_half * (1.0 - 0.5 * q_star[j] * (q_star[i] + q[i]) * sec2);
    return K;
}

}  // namespace detail

// ============================================================================
// Single steps
// ============================================================================

namespace {

Vec3 vec_part(const SmallVector& x, int offset) { return {x[offset], x[offset + 1], x[offset + 2]}; }

SmallVector pack6(const Vec3& s, const Vec3& q) {
    SmallVector x(6);
    for (int i = 0; i < 3; ++i) {
        x[i] = s[i];
        x[3 + i] = q[i];
    }
    return x;
}

/// Projection hook that renormalizes the embedded point in x[3..5] and records
/// the pre-projection norm defect of each candidate it sees.
ProjectHook q_projection_hook(double* last_defect) {
    return [last_defect](const SmallVector& x) {
        Vec3 q = vec_part(x, 3);
        const double n = norm(q);
        *last_defect = std::abs(n - 1.0);
        if (n < 1e-300) throw std::domain_error("projection hook: zero position iterate");
        return pack6(vec_part(x, 0), q / n);
    };
}

StepResult finish_embedded(const SmallVector& x, NewtonStats stats, double defect) {
    StepResult r{project(vec_part(x, 3)), vec_part(x, 0), std::nullopt, stats, defect};
    return r;
}

constexpr double kQuarterTurnGuard = 1e-8;   // |cos(h |s|)| floor for the implicit Euler inversion
constexpr double kHalfTurnMargin = 1e-6;     // midpoint rule rejects |h||s| >= pi (1 - this)

}  // namespace

StepResult step_sfe(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h) {
    const Vec3 s = f.evaluate(p.vec(), t);
    const double nv = norm(s);
    const double a = h * nv;
    const Vec3 raw = std::cos(a) * p.vec() +
                     (std::sin(a) / std::max(nv, std::numeric_limits<double>::epsilon())) * s;
    StepResult r{project(raw), s, std::nullopt, std::nullopt, std::abs(norm(raw) - 1.0)};
    return r;
}

StepResult step_sbe_fixed_point(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                                const NewtonConfig& cfg) {
    const double guard = cfg.velocity_norm_guard;
    UnitPoint3 q = step_sfe(f, p, t, h).next_state;
    double defect = 0.0;

    // Accept on either a small position residual or a stalled iterate, like
    // the Newton kernel; a slow contraction can leave the step change
    // bouncing around rounding level while the residual is long converged.
    NewtonStats stats;
    bool converged = false;
    for (int k = 0; k <= cfg.max_fixed_point_iters; ++k) {
        const Vec3 s = f.evaluate(q.vec(), t + h);
        const double nv = norm(s);
        const double a = h * nv;
        const double ca = std::cos(a);
        if (std::abs(ca) <= kQuarterTurnGuard)
            throw StepTooLargeError("implicit Euler fixed point: step rotates by a quarter turn");

        stats.final_residual_norm =
            inf_norm(detail::sbe_position_residual(p.vec(), q.vec(), s, h, guard));
        if (stats.final_residual_norm <= cfg.residual_tol) {
            // Refine once with the already-evaluated velocity so the
            // pre-projection defect tracks the accepted residual instead of
            // the sweep before it.
            const Vec3 raw = (p.vec() + (std::sin(a) / std::max(nv, guard)) * s) / ca;
            defect = std::abs(norm(raw) - 1.0);
            q = project(raw);
            converged = true;
            break;
        }
        if (k == cfg.max_fixed_point_iters) break;

        // Freeze |s| and invert the geodesic relation for the endpoint.
        const Vec3 raw = (p.vec() + (std::sin(a) / std::max(nv, guard)) * s) / ca;
        defect = std::abs(norm(raw) - 1.0);
        const UnitPoint3 next = project(raw);
        const double change = inf_norm(next.vec() - q.vec());
        q = next;
        stats.iterations = k + 1;
        if (change <= cfg.step_tol) {
            const Vec3 s1 = f.evaluate(q.vec(), t + h);
            stats.final_residual_norm =
                inf_norm(detail::sbe_position_residual(p.vec(), q.vec(), s1, h, guard));
            converged = true;
            break;
        }
    }

    stats.converged = converged;
    if (!converged) throw NewtonDivergenceError(stats);
    StepResult r{q, f.evaluate(q.vec(), t + h), std::nullopt, stats, defect};
    return r;
}

StepResult step_sbe_newton(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                           const NewtonConfig& cfg) {
    const double guard = cfg.velocity_norm_guard;
    const double t1 = t + h;

    const UnitPoint3 q0 = step_sfe(f, p, t, h).next_state;
    const SmallVector x0 = pack6(f.evaluate(q0.vec(), t1), q0.vec());

    const ResidualFn residual = [&](const SmallVector& x) {
        const Vec3 s = vec_part(x, 0);
        const Vec3 q = vec_part(x, 3);
        const Vec3 r1 = s - f.evaluate(q, t1);
        const Vec3 r2 = detail::sbe_position_residual(p.vec(), q, s, h, guard);
        return pack6(r1, r2);
    };
    const JacobianFn jacobian = [&](const SmallVector& x) {
        const Vec3 s = vec_part(x, 0);
        const Vec3 q = vec_part(x, 3);
        const SmallMatrix G = field_jacobian(f, q, t1);
        const SmallMatrix J = detail::sbe_velocity_block(s, q, h, guard);
        const double ca = std::cos(h * norm(s));
        SmallMatrix D(6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                D(i, j) = (i == j) ? 1.0 : 0.0;
                D(i, 3 + j) = -G(i, j);
                D(3 + i, j) = J(i, j);
                D(3 + i, 3 + j) = (i == j) ? ca : 0.0;
            }
        return D;
    };

    double defect = 0.0;
    auto [x, stats] = newton_solve(residual, jacobian, x0, q_projection_hook(&defect), cfg);
    return finish_embedded(x, stats, defect);
}

StepResult step_pbe(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                    PbeForm form, const NewtonConfig& cfg) {
    const double t1 = t + h;

    if (form == PbeForm::Reduced3) {
        const ResidualFn residual = [&](const SmallVector& x) {
            const Vec3 q = vec_part(x, 0);
            const Vec3 r = -1.0 * p.vec() + q - h * f.evaluate(project(q).vec(), t1);
            SmallVector out(3);
            for (int i = 0; i < 3; ++i) out[i] = r[i];
            return out;
        };
        const JacobianFn jacobian = [&](const SmallVector& x) {
            const Vec3 q = vec_part(x, 0);
            // Field Jacobian at the projected point, with no chain-rule factor
            // for the projection itself: the scheme's documented linearization.
            const SmallMatrix G = field_jacobian(f, project(q).vec(), t1);
            SmallMatrix D(3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) D(i, j) = ((i == j) ? 1.0 : 0.0) - h * G(i, j);
            return D;
        };

        const Vec3 chord = p.vec() + h * f.evaluate(p.vec(), t);
        SmallVector x0(3);
        for (int i = 0; i < 3; ++i) x0[i] = chord[i];

        auto [x, stats] = newton_solve(residual, jacobian, x0, nullptr, cfg);
        const UnitPoint3 next = project(vec_part(x, 0));
        const Vec3 s = f.evaluate(next.vec(), t1);
        // The defining projection is part of the scheme; the defect is
        // measured on its output.
        StepResult r{next, s, std::nullopt, stats, std::abs(norm(next.vec()) - 1.0)};
        return r;
    }

    const ResidualFn residual = [&](const SmallVector& x) {
        const Vec3 s = vec_part(x, 0);
        const Vec3 q = vec_part(x, 3);
        const Vec3 r1 = s - f.evaluate(q, t1);
        const Vec3 r2 = -1.0 * p.vec() + q - h * s;
        return pack6(r1, r2);
    };
    const JacobianFn jacobian = [&](const SmallVector& x) {
        const Vec3 q = vec_part(x, 3);
        const SmallMatrix G = field_jacobian(f, q, t1);
        SmallMatrix D(6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                D(i, j) = (i == j) ? 1.0 : 0.0;
                D(i, 3 + j) = -G(i, j);
                D(3 + i, j) = (i == j) ? -h : 0.0;
                D(3 + i, 3 + j) = (i == j) ? 1.0 : 0.0;
            }
        return D;
    };

    const UnitPoint3 q0 = project(p.vec() + h * f.evaluate(p.vec(), t));
    const SmallVector x0 = pack6(f.evaluate(q0.vec(), t1), q0.vec());

    double defect = 0.0;
    auto [x, stats] = newton_solve(residual, jacobian, x0, q_projection_hook(&defect), cfg);
    // The hook's renormalization is this scheme's defining projection, so the
    // emitted defect is that of the projected point (the chord residual keeps
    // an O(h^2 |s|^2) radial component by construction and never vanishes).
    StepResult r = finish_embedded(x, stats, std::abs(norm(vec_part(x, 3)) - 1.0));
    return r;
}

namespace {

StepResult scn_step_impl(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                         const NewtonConfig& cfg, bool forward) {
    const double guard = cfg.velocity_norm_guard;
    const double tm = t + 0.5 * h;

    // Tripwire on the departure velocity before any predictor runs: a
    // half-turn arc parks the predictor near the antipode, where the
    // midpoint guess below is ill-posed.
    if (std::abs(h) * norm(f.evaluate(p.vec(), t)) >= M_PI * (1.0 - kHalfTurnMargin))
        throw StepTooLargeError("midpoint rule: step rotates by half a turn or more");

    // Predictor: the implicit Euler endpoint when it converges, else the
    // explicit endpoint.
    UnitPoint3 q0 = p;
    try {
        q0 = step_sbe_newton(f, p, t, h, cfg).next_state;
    } catch (const std::exception&) {
        q0 = step_sfe(f, p, t, h).next_state;
    }
    Vec3 m0{};
    try {
        m0 = slerp(p, q0, 0.5).vec();
    } catch (const AntipodalError&) {
        throw StepTooLargeError("midpoint rule: the predictor reached the antipode");
    }
    const Vec3 s0 = f.evaluate(m0, tm);
    if (std::abs(h) * norm(s0) >= M_PI * (1.0 - kHalfTurnMargin))
        throw StepTooLargeError("midpoint rule: step rotates by half a turn or more");

    const ResidualFn residual = [&](const SmallVector& x) {
        const Vec3 s = vec_part(x, 0);
        const Vec3 q = vec_part(x, 3);
        const Vec3 m = slerp_ambient(p.vec(), q, 0.5);
        const Vec3 r1 = s - f.evaluate(m, tm);
        const Vec3 r2 = detail::scn_position_residual(p.vec(), q, m, s, h, guard, forward);
        return pack6(r1, r2);
    };
    const JacobianFn jacobian = [&](const SmallVector& x) {
        const Vec3 s = vec_part(x, 0);
        const UnitPoint3 q(vec_part(x, 3));
        const Vec3 m = slerp_ambient(p.vec(), q.vec(), 0.5);
        const SmallMatrix K = slerp_midpoint_jacobian(p, q);
        const SmallMatrix G = field_jacobian(f, m, tm);
        const SmallMatrix H = detail::scn_velocity_block(s, m, h, guard, forward);
        const double ca = std::cos(0.5 * h * norm(s));
        SmallMatrix D(6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double gk = 0.0;
                for (int l = 0; l < 3; ++l) gk += G(i, l) * K(l, j);
                D(i, j) = (i == j) ? 1.0 : 0.0;
                D(i, 3 + j) = -gk;
                D(3 + i, j) = H(i, j);
                D(3 + i, 3 + j) = forward ? ((i == j) ? 1.0 : 0.0) - ca * K(i, j) : ca * K(i, j);
            }
        return D;
    };

    double defect = 0.0;
    auto [x, stats] = newton_solve(residual, jacobian, pack6(s0, q0.vec()),
                                   q_projection_hook(&defect), cfg);
    StepResult r = finish_embedded(x, stats, defect);
    r.midpoint = project(slerp_ambient(p.vec(), vec_part(x, 3), 0.5));
    return r;
}

}  // namespace

StepResult step_scn(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                    const NewtonConfig& cfg) {
    return scn_step_impl(f, p, t, h, cfg, false);
}

StepResult step_scn_forward(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                            const NewtonConfig& cfg) {
    return scn_step_impl(f, p, t, h, cfg, true);
}

StepResult step(MethodKind m, const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                const NewtonConfig& cfg) {
    switch (m) {
        case MethodKind::Sfe: return step_sfe(f, p, t, h);
        case MethodKind::SbeFixedPoint: return step_sbe_fixed_point(f, p, t, h, cfg);
        case MethodKind::SbeNewton: return step_sbe_newton(f, p, t, h, cfg);
        case MethodKind::Pbe3: return step_pbe(f, p, t, h, PbeForm::Reduced3, cfg);
        case MethodKind::Pbe6: return step_pbe(f, p, t, h, PbeForm::Embedded6, cfg);
        case MethodKind::Scn: return step_scn(f, p, t, h, cfg);
        case MethodKind::ScnForward: return step_scn_forward(f, p, t, h, cfg);
    }
    throw std::logic_error("step: unhandled method");
}

// ============================================================================
// Fixed-step driver
// ============================================================================

Trajectory integrate(MethodKind m, const VectorFieldSpec& f, const UnitPoint3& p0, double t0,
                     double t_final, double h, const NewtonConfig& cfg) {
    if (h <= 0.0) throw std::invalid_argument("integrate: step size must be positive");
    if (t_final < t0) throw std::invalid_argument("integrate: t_final must not precede t0");

    const double span = t_final - t0;
    const auto n_full = static_cast<long long>(std::floor(span / h + 1e-12));
    const double remainder = span - static_cast<double>(n_full) * h;
    const bool partial = remainder > 1e-12 * h;

    Trajectory traj;
    const auto total = static_cast<std::size_t>(n_full) + (partial ? 1 : 0) + 1;
    traj.times.reserve(total);
    traj.states.reserve(total);
    traj.norm_defects.reserve(total);
    traj.newton_iters.reserve(total);
    if (f.has_observable()) traj.observable.reserve(total);

    auto push = [&](double t, const UnitPoint3& p, double defect, int iters) {
        traj.times.push_back(t);
        traj.states.push_back(p);
        traj.norm_defects.push_back(defect);
        traj.newton_iters.push_back(iters);
        if (f.has_observable()) traj.observable.push_back(f.observable(p.vec()));
    };

    UnitPoint3 p = p0;
    push(t0, p, 0.0, 0);
    for (long long k = 0; k < n_full + (partial ? 1 : 0); ++k) {
        const double t = t0 + static_cast<double>(k) * h;
        const double hk = (k < n_full) ? h : remainder;
        const double t_next = (k < n_full) ? t0 + static_cast<double>(k + 1) * h : t_final;
        try {
            const StepResult r = step(m, f, p, t, hk, cfg);
            p = r.next_state;
            push(t_next, p, r.norm_defect, r.newton ? r.newton->iterations : 0);
        } catch (const std::exception& e) {
            throw IntegrationError(static_cast<int>(k), t, e.what());
        }
    }
    return traj;
}

}  // namespace sphereivp
