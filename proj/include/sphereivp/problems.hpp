#pragma once

#include <vector>

#include "sphereivp/field.hpp"
#include "sphereivp/integrators.hpp"

namespace sphereivp {

/// Point-vortex interaction field on the sphere with four fixed unit centers;
/// f(x) = sum_i (c_i x x) / (2 (1 - c_i . x)). Singular at the centers: the
/// evaluate callback throws std::domain_error when 1 - c_i . x < 1e-12.
VectorFieldSpec four_vortex_field();
const std::vector<Vec3>& four_vortex_centers();

/// Quadratic field f(q) = M q - (q^T M q) q, M = diag(1/2, -1/2, -1/2), whose
/// flow contracts onto the pair of attractors +-e1 (tangent eigenvalues -1);
/// the benchmark for step-size stability thresholds.
VectorFieldSpec stiff_attractor_field();

/// Free rigid body in body coordinates: y' = y x grad H with the quadratic
/// energy H(y) = (1/2) sum y_j^2 / I_j; defaults to inertia (2, 1, 2/3).
VectorFieldSpec rigid_body_field();

/// Generalized spinning-top field p' = p x grad H for
/// H(p) = (1/2) sum (p_j^2 + cubic p_j^3) / I_j; cubic = 0 reduces to the
/// rigid body with the same inertia.
VectorFieldSpec spinning_top_field(const Vec3& inertia, double cubic);

/// Spinning top with inertia (1, 2, 4) and cubic coefficient 2/3: the energy
/// is no longer quadratic, separating schemes that conserve it from those
/// that only track it.
VectorFieldSpec perturbed_top_field();

/// Registry keys: four-vortex, stiff-attractor, rigid-body, perturbed-top.
const std::vector<std::string>& problem_names();
VectorFieldSpec make_problem(const std::string& key);

/// Documented benchmark start state for each registered problem.
UnitPoint3 default_start(const std::string& key);

/// Per-state relative observable error |H(p_n) - H(p_0)| / |H(p_0)|; throws
/// std::invalid_argument when the field has no observable or the trajectory
/// is empty.
std::vector<double> hamiltonian_trace(const Trajectory& traj, const VectorFieldSpec& field);

}  // namespace sphereivp
