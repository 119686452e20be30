#include <Eigen/Dense>
#include <cmath>

#include "disf/errors.hpp"
#include "disf/solvers.hpp"

namespace disf {

LinearSystem assemble_rotation_system(const CorrespondenceSet& c,
                                      const Vec3& nz, const Vec3& napp,
                                      double beta) {
  const std::size_t n = c.total();
  if (n == 0)
    throw Error(ErrorCode::precondition, "empty correspondence set");
  LinearSystem sys;
  sys.A.resize(static_cast<Eigen::Index>(n) + 1, 3);
  sys.b.resize(static_cast<Eigen::Index>(n) + 1);
  Eigen::Index row = 0;
  for (const auto& side : c.finger) {
    for (std::size_t i = 0; i < side.size(); ++i, ++row) {
      sys.A.row(row) = side.np[i].cross(side.nq[i]).transpose();
      sys.b(row) = -(side.np[i].dot(side.nq[i]) + 1.0);
    }
  }
  sys.A.row(row) = beta * nz.cross(napp).transpose();
  sys.b(row) = -beta * (nz.dot(napp) - 1.0);
  return sys;
}

Vec3 solve_normal_equations(const LinearSystem& sys, double ridge) {
  const Mat3 ata =
      sys.A.transpose() * sys.A + ridge * Mat3::Identity();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(ata);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (lmin <= 1e-12 * std::max(lmax, 1e-12))
    throw SingularSystem("normal matrix is rank-deficient");
  const Vec3 atb = sys.A.transpose() * sys.b;
  return ata.ldlt().solve(atb);
}

namespace {
void rotate_about(const Mat3& R, const Vec3& center,
                  CanonicalGripperSurface& surface, CorrespondenceSet& c) {
  const Vec3 t = center - R * center;
  // delta_d = 0: pure rotation about `center` via the gripper transform.
  surface = transform_finger_surface(surface, R, t, 0.0, Vec3::UnitY());
  for (auto& side : c.finger) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      side.p[i] = R * side.p[i] + t;
      side.np[i] = R * side.np[i];
    }
  }
}
}  // namespace

RotOptResult rot_opt_step(GripperState& state,
                          CanonicalGripperSurface& posed_surface,
                          CorrespondenceSet& c,
                          const QualityWeights& weights) {
  const LinearSystem sys =
      assemble_rotation_system(c, state.z_axis, state.approach, weights.beta);
  RotOptResult result;
  Vec3 omega;
  try {
    omega = solve_normal_equations(sys, 0.0);
  } catch (const SingularSystem&) {
    omega = solve_normal_equations(sys, 1e-9);  // rethrows if still singular
    result.used_ridge = true;
  }

  // The linearization is only locally valid; halve the step until the
  // evaluated E_na does not increase, falling back to a null step.
  const double e0 = combined_rotation_error(c, state.z_axis, state.approach,
                                            weights.beta);
  Mat3 R = Mat3::Identity();
  Vec3 accepted = Vec3::Zero();
  Vec3 trial = omega;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    const Mat3 Rt = rodrigues(trial);
    if (combined_rotation_error(c, state.z_axis, state.approach, weights.beta,
                                Rt) <= e0) {
      R = Rt;
      accepted = trial;
      result.halvings = attempt;
      break;
    }
    trial *= 0.5;
    if (attempt == 8) result.halvings = attempt;  // null step accepted
  }

  result.omega = accepted;
  result.rotation = R;

  rotate_about(R, surface_centroid(posed_surface), posed_surface, c);
  state.rotation = R * state.rotation;
  state.finger_axis = (R * state.finger_axis).normalized();
  state.z_axis = (R * state.z_axis).normalized();
  return result;
}

}  // namespace disf
