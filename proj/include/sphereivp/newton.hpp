#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "sphereivp/linalg.hpp"

namespace sphereivp {

/// Solver knobs; the defaults are what the benchmark harness runs with.
struct NewtonConfig {
    /// Stop when the residual infinity-norm drops to this (checked before the
    /// first update too, so an already-solved guess costs zero iterations).
    double residual_tol = 1e-12;
    /// Stop when the infinity-norm of the full (post-projection) iterate
    /// change drops to this.
    double step_tol = 1e-13;
    int max_iters = 25;
    /// Sweep budget for the fixed-point variant, which contracts only
    /// linearly (rate ~ h times the field's Lipschitz constant) and so can
    /// need dozens of sweeps to reach a tight residual.
    int max_fixed_point_iters = 200;
    /// Floor used when normalizing velocity directions inside the schemes.
    double velocity_norm_guard = std::numeric_limits<double>::epsilon();
};

struct NewtonStats {
    int iterations = 0;
    double final_residual_norm = 0.0;
    bool converged = false;
};

/// Thrown when the iteration hits max_iters without meeting either test.
struct NewtonDivergenceError : std::runtime_error {
    explicit NewtonDivergenceError(const NewtonStats& s);
    NewtonStats stats;
};

using ResidualFn = std::function<SmallVector(const SmallVector&)>;
using JacobianFn = std::function<SmallMatrix(const SmallVector&)>;
/// Optional hook applied to the iterate after every update (e.g. renormalizing
/// an embedded point); pass nullptr for plain Newton.
using ProjectHook = std::function<SmallVector(const SmallVector&)>;

/// Undamped Newton iteration x <- project(x - D(x)^-1 r(x)).
std::pair<SmallVector, NewtonStats> newton_solve(const ResidualFn& residual,
                                                 const JacobianFn& jacobian, SmallVector x0,
                                                 const ProjectHook& project = nullptr,
                                                 const NewtonConfig& cfg = {});

}  // namespace sphereivp
