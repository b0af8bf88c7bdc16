#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphereivp/field.hpp"
#include "sphereivp/newton.hpp"
#include "sphereivp/sphere.hpp"

namespace sphereivp {

// ============================================================================
// Method taxonomy
// ============================================================================

enum class MethodKind {
    Sfe,            ///< explicit geodesic Euler step
    SbeFixedPoint,  ///< implicit geodesic Euler, fixed-point solver
    SbeNewton,      ///< implicit geodesic Euler, 6x6 Newton solver
    Pbe3,           ///< projected backward Euler, reduced 3x3 system
    Pbe6,           ///< projected backward Euler, embedded 6x6 system
    Scn,            ///< geodesic midpoint (trapezoidal) rule, backward parametrization
    ScnForward,     ///< same midpoint rule parametrized from the left endpoint
};

/// Canonical CLI spelling: sfe, sbe-fp, sbe, pbe3, pbe, scn, scn-fwd.
std::string to_string(MethodKind m);
/// Parses canonical spellings plus the aliases sbe-newton, sbe-fixed-point,
/// pbe6 and scn-forward; throws std::invalid_argument otherwise.
MethodKind parse_method(const std::string& name);
bool is_implicit(MethodKind m);

const std::vector<MethodKind>& all_methods();

// ============================================================================
// Single steps
// ============================================================================

/// Thrown when |h| times the velocity magnitude exceeds what the scheme's
/// trigonometric inversion can represent (quarter turn for the implicit Euler
/// fixed point, half turn for the midpoint rule).
struct StepTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by integrate() when a step fails; carries the failing step's index
/// and start time, with the underlying reason in what().
struct IntegrationError : std::runtime_error {
    IntegrationError(int step_index_, double time_, const std::string& reason);
    int step_index;
    double time;
};

/// One accepted step of any scheme.
struct StepResult {
    UnitPoint3 next_state;
    /// Converged stage velocity (the field value the step was taken with).
    Vec3 velocity;
    /// Midpoint state for the midpoint rule; empty for the other schemes.
    std::optional<UnitPoint3> midpoint;
    /// Solver statistics; empty for the explicit step.
    std::optional<NewtonStats> newton;
    /// |length - 1| of the scheme's own final candidate, measured before the
    /// defensive renormalization that produces next_state.
    double norm_defect = 0.0;
};

StepResult step_sfe(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h);
StepResult step_sbe_fixed_point(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                                const NewtonConfig& cfg = {});
StepResult step_sbe_newton(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                           const NewtonConfig& cfg = {});

enum class PbeForm { Reduced3, Embedded6 };
StepResult step_pbe(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                    PbeForm form = PbeForm::Embedded6, const NewtonConfig& cfg = {});

StepResult step_scn(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                    const NewtonConfig& cfg = {});
StepResult step_scn_forward(const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                            const NewtonConfig& cfg = {});

/// Dispatch by method kind.
StepResult step(MethodKind m, const VectorFieldSpec& f, const UnitPoint3& p, double t, double h,
                const NewtonConfig& cfg = {});

// ============================================================================
// Fixed-step driver
// ============================================================================

struct Trajectory {
    std::vector<double> times;
    std::vector<UnitPoint3> states;
    /// Per state; 0.0 for the initial state.
    std::vector<double> norm_defects;
    /// Per state; 0 for the initial state and for explicit steps.
    std::vector<int> newton_iters;
    /// Observable value per state; empty when the field has none.
    std::vector<double> observable;

    std::size_t size() const { return states.size(); }
};

/// Steps from t0 to t_final with step h > 0 (times are t0 + k h to avoid
/// accumulation); a final partial step lands exactly on t_final when the span
/// is not a whole multiple of h. Step failures are rethrown as
/// IntegrationError tagged with the step index and time.
Trajectory integrate(MethodKind m, const VectorFieldSpec& f, const UnitPoint3& p0, double t0,
                     double t_final, double h, const NewtonConfig& cfg = {});

// ============================================================================
// Residual/Jacobian assembly, exposed for direct verification
// ============================================================================

namespace detail {

/// d/ds of sin(h nu) s/nu at fixed h (nu = max(|s|, guard)); shared tail of
/// the implicit-Euler and midpoint velocity blocks.
SmallMatrix sine_direction_jacobian(const Vec3& s, double h, double guard);

/// J block: derivative w.r.t. s of the implicit-Euler position residual
/// -q_prev + cos(h nu) q - sin(h nu) s/nu, at fixed q.
SmallMatrix sbe_velocity_block(const Vec3& s, const Vec3& q, double h, double guard);

/// H block: derivative w.r.t. s of the midpoint-rule position residual with
/// midpoint m held fixed; forward = true flips the residual to the
/// left-endpoint parametrization (which flips the first term's sign).
SmallMatrix scn_velocity_block(const Vec3& s, const Vec3& m, double h, double guard, bool forward);

Vec3 sbe_position_residual(const Vec3& q_prev, const Vec3& q, const Vec3& s, double h,
                           double guard);
Vec3 scn_position_residual(const Vec3& q_prev, const Vec3& q, const Vec3& m, const Vec3& s,
                           double h, double guard, bool forward);

/// A plausible-looking but wrong variant of the midpoint Jacobian (scalar 1
/// in place of delta_ij, coefficient 1/2 in place of 1/4) that shows up when
/// the product-rule bookkeeping is rushed. Wrong off the diagonal; kept only
/// so the test suite can demonstrate that finite differences reject it.
SmallMatrix slerp_midpoint_jacobian_misprinted(const UnitPoint3& q_star, const UnitPoint3& q);

}  // namespace detail

}  // namespace sphereivp
