#include <Eigen/Dense>
#include <chrono>
#include <limits>

#include "disf/baselines.hpp"
#include "disf/errors.hpp"

namespace disf {

namespace {

// Joint linearized system over x = (omega, t, dd) in R^7. Point-to-plane
// rows use the small-rotation approximation of Eq. (2) about the current
// pose; normal rows are the rotation-only rows scaled by alpha so the
// squared residual matches E_p + alpha^2 E_n + beta^2 E_a.
void assemble_joint_system(const CorrespondenceSet& c, const Vec3& v,
                           const Vec3& nz, const Vec3& napp,
                           const QualityWeights& weights, bool drop_approach,
                           Eigen::MatrixXd& A, Eigen::VectorXd& b) {
  const std::size_t n = c.total();
  const Eigen::Index rows =
      2 * static_cast<Eigen::Index>(n) + (drop_approach ? 0 : 1);
  A.setZero(rows, 7);
  b.setZero(rows);
  Eigen::Index row = 0;
  for (int j = 1; j <= 2; ++j) {
    const auto& side = c.finger[j - 1];
    const double sj = (j % 2 == 0) ? 0.5 : -0.5;  // 0.5 (-1)^j
    for (std::size_t i = 0; i < side.size(); ++i, ++row) {
      const Vec3& p = side.p[i];
      const Vec3& q = side.q[i];
      const Vec3& nq = side.nq[i];
      A.block<1, 3>(row, 0) = p.cross(nq).transpose();
      A.block<1, 3>(row, 3) = nq.transpose();
      A(row, 6) = sj * v.dot(nq);
      b(row) = -(p - q).dot(nq);
    }
  }
  const double alpha = weights.alpha;
  for (const auto& side : c.finger) {
    for (std::size_t i = 0; i < side.size(); ++i, ++row) {
      A.block<1, 3>(row, 0) = alpha * side.np[i].cross(side.nq[i]).transpose();
      b(row) = -alpha * (side.np[i].dot(side.nq[i]) + 1.0);
    }
  }
  if (!drop_approach) {
    A.block<1, 3>(row, 0) = weights.beta * nz.cross(napp).transpose();
    b(row) = -weights.beta * (nz.dot(napp) - 1.0);
  }
}

Eigen::VectorXd solve_joint(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            double ridge) {
  const Eigen::MatrixXd ata =
      A.transpose() * A +
      ridge * Eigen::MatrixXd::Identity(A.cols(), A.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ata);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (lmin <= 1e-12 * std::max(lmax, 1e-12))
    throw SingularSystem("joint normal matrix is rank-deficient");
  return ata.ldlt().solve(A.transpose() * b);
}

double loop_error(const CorrespondenceSet& c, const PlanConfig& config) {
  return config.loop_objective == LoopObjective::e_geom
             ? geom_error(c, config.weights)
             : surface_distance_error(c);
}

}  // namespace

PlanResult visf_plan(const OrientedPointCloud& object, const GripperSpec& spec,
                     const PlanConfig& config) {
  config.validate();
  spec.validate();
  if (!object.has_normals())
    throw Error(ErrorCode::precondition, "visf_plan: object normals missing");

  const auto t_start = std::chrono::steady_clock::now();
  PlanResult result;
  result.method = Method::visf;

  const double d0 = config.resolved_d0(spec);
  const Vec3 t0 = config.t0_mode == PlanConfig::T0Mode::explicit_t0
                      ? config.explicit_t0
                      : init_translation_kmeans(object, config.kmeans_k,
                                                config.kmeans_seed,
                                                config.kmeans_pick);

  GripperState state;
  state.rotation = config.r0;
  state.translation = t0;
  state.aperture = d0;
  state.finger_axis = (config.r0 * config.v0).normalized();
  state.z_axis = (config.r0 * config.n_z0).normalized();
  state.approach = config.n_app.normalized();

  CanonicalGripperSurface posed = transform_finger_surface(
      build_canonical_surface(spec, d0), config.r0, t0, 0.0, Vec3::UnitY());

  const KdTree tree(object.points);

  auto finish = [&](Termination term) {
    result.termination = term;
    result.rotation = state.rotation;
    result.translation = state.translation;
    result.final_aperture = state.aperture;
    result.delta_d = state.aperture - d0;
    result.quality.e_com_m = com_error(object, posed);
    try {
      const CorrespondenceSet c = match(posed, object, tree, config.match);
      result.quality = evaluate_quality(object, posed, c, state.z_axis,
                                        state.approach, config.weights);
      result.n1 = static_cast<int>(c.finger[0].size());
      result.n2 = static_cast<int>(c.finger[1].size());
    } catch (const OneSidedCorrespondence&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      result.quality.e_p = result.quality.e_n = result.quality.e_a = nan;
      result.quality.e_na = result.quality.e_geom = nan;
    }
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t_start)
            .count();
    return result;
  };

  double e_prev = std::numeric_limits<double>::infinity();
  double e;
  try {
    e = loop_error(match(posed, object, tree, config.match), config);
  } catch (const OneSidedCorrespondence& ex) {
    result.message = ex.what();
    return finish(Termination::correspondence_failure);
  }

  while (e_prev - e >= config.delta_e && result.iterations < config.max_iters) {
    CorrespondenceSet c;
    try {
      c = match(posed, object, tree, config.match);
    } catch (const OneSidedCorrespondence& ex) {
      result.message = ex.what();
      return finish(Termination::correspondence_failure);
    }
    TraceRow row;
    row.iter = result.iterations + 1;
    row.n1 = static_cast<int>(c.finger[0].size());
    row.n2 = static_cast<int>(c.finger[1].size());
    e_prev = loop_error(c, config);
    row.e_before = e_prev;

    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    assemble_joint_system(c, state.finger_axis, state.z_axis, state.approach,
                          config.weights, config.visf_drop_approach_term, A, b);
    Eigen::VectorXd x;
    try {
      try {
        x = solve_joint(A, b, 0.0);
      } catch (const SingularSystem&) {
        x = solve_joint(A, b, 1e-9);
      }
    } catch (const SingularSystem& ex) {
      result.message = ex.what();
      return finish(Termination::degenerate);
    }

    const Vec3 omega = x.head<3>();
    const Vec3 t = x.segment<3>(3);
    double dd = x(6);
    if (state.aperture + dd < spec.d_min) dd = spec.d_min - state.aperture;
    if (state.aperture + dd > spec.d_max) dd = spec.d_max - state.aperture;

    const Mat3 R = rodrigues(omega);
    // Apply Eq. (2) with the solved parameters (rotation about the origin,
    // exactly the frame the linearization was written in).
    posed = transform_finger_surface(posed, R, t, dd, state.finger_axis);
    for (int j = 1; j <= 2; ++j) {
      auto& side = c.finger[j - 1];
      const double sj = (j % 2 == 0) ? 0.5 : -0.5;
      const Vec3 shift = t + sj * dd * (R * state.finger_axis);
      for (std::size_t i = 0; i < side.size(); ++i) {
        side.p[i] = R * side.p[i] + shift;
        side.np[i] = R * side.np[i];
      }
    }
    state.rotation = R * state.rotation;
    state.translation = R * state.translation + t;
    state.finger_axis = (R * state.finger_axis).normalized();
    state.z_axis = (R * state.z_axis).normalized();
    state.aperture += dd;

    row.omega = omega;
    row.t_c = t;
    row.delta_d = dd;
    e = loop_error(c, config);
    row.e_after = e;
    result.trace.push_back(row);
    result.iterations += 1;
  }

  return finish(result.iterations >= config.max_iters &&
                        e_prev - e >= config.delta_e
                    ? Termination::max_iters
                    : Termination::converged);
}

}  // namespace disf
