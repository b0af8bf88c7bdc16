#pragma once

#include <cstdint>
#include <optional>

#include "sphereivp/problems.hpp"

namespace sphereivp {

// ============================================================================
// Configuration
// ============================================================================

enum class ExperimentKind { Convergence, Stability, Hamiltonian };

enum class ReferencePolicy {
    /// Reference trajectory from the midpoint rule at h_ref = min(h) / 100,
    /// with a Richardson consistency check against h = 2 h_ref.
    FineScn,
    /// Caller-supplied closed-form solution (exact_solution below).
    ExactRotation,
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Convergence;
    std::vector<MethodKind> methods;
    std::string problem = "four-vortex";
    std::vector<double> h_values;
    /// <= 0 picks the experiment's documented default horizon.
    double t_final = 0.0;
    /// Output stem; empty writes no files. Multi-run experiments expand to
    /// <stem>_<method>_h<value>.csv next to the given path.
    std::string out_path;
    ReferencePolicy reference = ReferencePolicy::FineScn;
    /// Exact solution t -> position, consulted under ReferencePolicy::ExactRotation.
    std::function<Vec3(double)> exact_solution;
    /// Replaces the registry problem (e.g. synthetic fields in tests).
    std::optional<VectorFieldSpec> field_override;
    /// Overrides the problem's documented start state.
    std::optional<Vec3> start;
    /// Stability only: random unit start away from all coordinate equilibria.
    std::optional<std::uint64_t> seed;
    /// Hamiltonian only: run the full benchmark horizon instead of the
    /// shortened default used to keep CI fast.
    bool full_run = false;
    NewtonConfig newton{};
};

const std::vector<double>& convergence_h_defaults();  // 0.2 ... 0.0125
const std::vector<double>& stability_h_defaults();    // 1.99, 2.01
double default_t_final(ExperimentKind kind, const std::string& problem, bool full_run);
UnitPoint3 resolve_start(const ExperimentConfig& cfg);

// ============================================================================
// Results
// ============================================================================

struct SlopeFit {
    double slope = 0.0;
    /// RMS residual of the least-squares line in log-log space.
    double residual = 0.0;
};

/// Least-squares slope of log(error) against log(h). Needs at least two
/// points; rejects nonpositive h or errors.
SlopeFit fit_loglog_slope(const std::vector<double>& h, const std::vector<double>& errors);

struct MethodConvergence {
    MethodKind method = MethodKind::Sfe;
    /// (h, final-state 2-norm error) pairs, in the order of cfg.h_values.
    std::vector<std::pair<double, double>> errors;
    SlopeFit fit;
};

struct ConvergenceReport {
    std::vector<MethodConvergence> per_method;
    /// Distance between the reference runs at h_ref and 2 h_ref; 0 under an
    /// exact reference.
    double reference_gap = 0.0;
    double min_tested_error = 0.0;
};

/// Any step failure aborts the whole study (no retries here: an error curve
/// with substituted points would be a lie).
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

enum class StabilityVerdict { Converged, Diverged };
std::string to_string(StabilityVerdict v);

/// One step retried at a reduced size after a solver failure.
struct RetryEvent {
    int step_index = 0;
    double time = 0.0;
    double h_used = 0.0;
};

struct StabilityRun {
    MethodKind method = MethodKind::Sfe;
    double h = 0.0;
    StabilityVerdict verdict = StabilityVerdict::Diverged;
    std::vector<double> times;
    /// Distance to the nearest attractor (min over the +-e1 pair).
    std::vector<double> dist;
    /// Third state component, tracked for the classic phase plots.
    std::vector<double> third_component;
    bool tainted = false;
    /// True when even the retried substeps failed; the series is truncated.
    bool failed = false;
    std::vector<RetryEvent> retries;
};

/// Converged: over the final fifth of the run the attractor distance stays
/// at or below 1e-3 and never increases by more than 1e-12 between samples.
std::vector<StabilityRun> run_stability(const ExperimentConfig& cfg);

struct HamiltonianRun {
    MethodKind method = MethodKind::Sfe;
    double h = 0.0;
    Trajectory trajectory;
    /// Relative observable error per state.
    std::vector<double> drift;
    double max_drift = 0.0;
    bool tainted = false;
    /// True when even the retried substeps failed; the series is truncated.
    bool failed = false;
    std::vector<RetryEvent> retries;
};

std::vector<HamiltonianRun> run_hamiltonian(const ExperimentConfig& cfg);

// ============================================================================
// CSV emission (deterministic: %.17g everywhere, byte-identical reruns)
// ============================================================================

/// Columns t,x,y,z,norm_defect,newton_iters,energy_rel_err; the energy column
/// is left blank when the trajectory carries no observable.
void emit_csv(const Trajectory& traj, const std::string& path);

/// Per-method blocks: "# method=<name>", a h,e2_error header, one row per
/// step size, then "# slope=<fitted slope>".
void emit_csv(const ConvergenceReport& report, const std::string& path);

/// Columns t,dist,third_component with a trailing "# verdict=..." comment.
void emit_csv(const StabilityRun& run, const std::string& path);

/// Expands a multi-run output stem: base.csv -> base_<method>_h<value>.csv.
std::string expanded_out_path(const std::string& stem, MethodKind m, double h);

}  // namespace sphereivp
