#include "sphereivp/newton.hpp"

#include <cstdio>

namespace sphereivp {

namespace {
std::string describe(const NewtonStats& s) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "Newton failed to converge: %d iterations, residual %.3e",
                  s.iterations, s.final_residual_norm);
    return buf;
}
}  // namespace

NewtonDivergenceError::NewtonDivergenceError(const NewtonStats& s)
    : std::runtime_error(describe(s)), stats(s) {}

std::pair<SmallVector, NewtonStats> newton_solve(const ResidualFn& residual,
                                                 const JacobianFn& jacobian, SmallVector x0,
                                                 const ProjectHook& project,
                                                 const NewtonConfig& cfg) {
    SmallVector x = std::move(x0);
    SmallVector r = residual(x);
    NewtonStats stats;
    stats.final_residual_norm = inf_norm(r);
    if (stats.final_residual_norm <= cfg.residual_tol) {
        stats.converged = true;
        return {x, stats};
    }

    for (int k = 0; k < cfg.max_iters; ++k) {
        const SmallVector dx = solve_linear(jacobian(x), r);
        SmallVector next(x.dim());
        for (int i = 0; i < x.dim(); ++i) next[i] = x[i] - dx[i];
        if (project) next = project(next);

        // Full change of the (projected) iterate, not the raw Newton increment:
        // projected schemes stall with a nonzero residual yet a frozen iterate.
        SmallVector change(x.dim());
        for (int i = 0; i < x.dim(); ++i) change[i] = next[i] - x[i];

        x = next;
        r = residual(x);
        stats.iterations = k + 1;
        stats.final_residual_norm = inf_norm(r);

        if (stats.final_residual_norm <= cfg.residual_tol || inf_norm(change) <= cfg.step_tol) {
            stats.converged = true;
            return {x, stats};
        }
    }
    throw NewtonDivergenceError(stats);
}

}  // namespace sphereivp
