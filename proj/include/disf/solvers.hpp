#ifndef DISF_SOLVERS_HPP
#define DISF_SOLVERS_HPP

#include <Eigen/Core>

#include "disf/quality.hpp"

namespace disf {

// Augmented least-squares system for the rotation stage: one row per
// correspondence pair plus one approach-direction row.
struct LinearSystem {
  Eigen::MatrixXd A;  // (N + 1) x 3
  Eigen::VectorXd b;  // N + 1
};

/// Rows: a_i = (np_i x nq_i)^T, b_i = -(np_i . nq_i + 1); final row
/// a = beta (nz x napp)^T, b = -beta (nz . napp - 1).
LinearSystem assemble_rotation_system(const CorrespondenceSet& c,
                                      const Vec3& nz, const Vec3& napp,
                                      double beta);

/// omega = (A^T A + ridge I)^-1 A^T b. Throws SingularSystem when the normal
/// matrix is rank-deficient at the given ridge.
Vec3 solve_normal_equations(const LinearSystem& sys, double ridge = 0.0);

struct RotOptResult {
  Vec3 omega = Vec3::Zero();   // accepted step (after any backtracking)
  Mat3 rotation = Mat3::Identity();
  int halvings = 0;            // backtracking halvings applied
  bool used_ridge = false;
};

/// Rotation stage: solves the linearized E_na system, maps the step through
/// rodrigues(), backtracks (halving, up to 8 times, falling back to identity)
/// until E_na does not increase, then rotates the posed surface and the
/// matched finger points about the posed-surface centroid and updates
/// state.rotation, finger_axis and z_axis. The surface centroid is the
/// rotation's fixed point, so state.translation is untouched.
RotOptResult rot_opt_step(GripperState& state,
                          CanonicalGripperSurface& posed_surface,
                          CorrespondenceSet& c, const QualityWeights& weights);

/// Translation stage: t_c = centroid(matched object points) -
/// centroid(matched finger points), pooled over both fingers; translates the
/// posed surface and matched finger points and updates state.translation.
/// Returns t_c.
Vec3 trans_refine_step(GripperState& state,
                       CanonicalGripperSurface& posed_surface,
                       CorrespondenceSet& c);

struct FingerOptResult {
  double delta_d = 0.0;     // clamped step actually applied
  double unclamped = 0.0;   // closed-form optimum before clamping
  bool degenerate = false;  // sum a^2 == 0; step forced to zero
};

/// Aperture stage: closed-form clamped minimizer of E_p over the fingertip
/// displacement. Updates state.aperture, the posed surface and the matched
/// finger points. Never moves the aperture outside [d_min, d_max].
FingerOptResult finger_opt_step(GripperState& state,
                                CanonicalGripperSurface& posed_surface,
                                CorrespondenceSet& c, const GripperSpec& spec);

}  // namespace disf

#endif
