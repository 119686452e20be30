#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "disf/baselines.hpp"
#include "disf/errors.hpp"
#include "disf/rng.hpp"

namespace disf {

CmaesRun cmaes_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, double sigma0,
                        const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper, int population,
                        int max_evals, std::uint64_t seed) {
  const int n = static_cast<int>(x0.size());
  const int lambda = population;
  const int mu = lambda / 2;

  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i)
    weights(i) = std::log(mu + 0.5) - std::log(i + 1.0);
  weights /= weights.sum();
  const double mueff = 1.0 / weights.squaredNorm();

  const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
  const double cs = (mueff + 2.0) / (n + mueff + 5.0);
  const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
  const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) /
                                            ((n + 2.0) * (n + 2.0) + mueff));
  const double damps =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
  const double chi_n =
      std::sqrt(static_cast<double>(n)) *
      (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  Eigen::VectorXd mean = x0;
  double sigma = sigma0;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd ps = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pc = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd D = Eigen::VectorXd::Ones(n);

  Rng rng(seed);
  CmaesRun run;
  run.best_x = x0;
  run.best_f = std::numeric_limits<double>::infinity();

  auto draw_normal_vec = [&]() {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = rng.normal();
    return z;
  };

  std::vector<Eigen::VectorXd> xs(lambda), zs(lambda);
  std::vector<double> fs(lambda);

  while (run.evaluations < max_evals) {
    for (int k = 0; k < lambda; ++k) {
      Eigen::VectorXd x;
      Eigen::VectorXd z;
      bool in_bounds = false;
      for (int attempt = 0; attempt < 20 && !in_bounds; ++attempt) {
        z = draw_normal_vec();
        x = mean + sigma * (B * (D.asDiagonal() * z));
        in_bounds = (x.array() >= lower.array()).all() &&
                    (x.array() <= upper.array()).all();
      }
      if (!in_bounds) {
        x = x.cwiseMax(lower).cwiseMin(upper);
        // Back out the step that produced the clamped point so the
        // distribution update stays consistent.
        const Eigen::VectorXd y = (x - mean) / sigma;
        z = D.cwiseInverse().asDiagonal() * (B.transpose() * y);
      }
      xs[k] = x;
      zs[k] = z;
      fs[k] = f(x);
      run.evaluations += 1;
      if (std::isfinite(fs[k])) run.any_finite = true;
      if (fs[k] < run.best_f) {
        run.best_f = fs[k];
        run.best_x = x;
      }
      if (run.evaluations >= max_evals) break;
    }
    const int evaluated = std::min(lambda, run.evaluations -
                                               run.generations * lambda);
    if (evaluated < lambda) break;  // budget exhausted mid-generation

    std::vector<int> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (fs[a] != fs[b]) return fs[a] < fs[b];
      return a < b;
    });

    Eigen::VectorXd z_mean = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd new_mean = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) {
      z_mean += weights(i) * zs[order[i]];
      new_mean += weights(i) * xs[order[i]];
    }

    ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (B * z_mean);
    const int gen = run.generations + 1;
    const double hsig_test =
        ps.norm() / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * gen)) / chi_n;
    const double hsig = hsig_test < 1.4 + 2.0 / (n + 1.0) ? 1.0 : 0.0;
    pc = (1.0 - cc) * pc + hsig * std::sqrt(cc * (2.0 - cc) * mueff) *
                               (new_mean - mean) / sigma;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd y = (xs[order[i]] - mean) / sigma;
      rank_mu += weights(i) * y * y.transpose();
    }
    C = (1.0 - c1 - cmu) * C +
        c1 * (pc * pc.transpose() + (1.0 - hsig) * cc * (2.0 - cc) * C) +
        cmu * rank_mu;

    sigma *= std::exp((cs / damps) * (ps.norm() / chi_n - 1.0));
    mean = new_mean;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (C + C.transpose()));
    B = eig.eigenvectors();
    D = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();

    run.generations += 1;
    run.best_per_generation.push_back(run.best_f);
  }
  return run;
}

PlanResult cmaes_plan(const OrientedPointCloud& object, const GripperSpec& spec,
                      const PlanConfig& config) {
  config.validate();
  spec.validate();
  if (!object.has_normals())
    throw Error(ErrorCode::precondition, "cmaes_plan: object normals missing");

  const auto t_start = std::chrono::steady_clock::now();
  PlanResult result;
  result.method = Method::cmaes;

  const double d0 = config.resolved_d0(spec);
  const Vec3 t0 = config.t0_mode == PlanConfig::T0Mode::explicit_t0
                      ? config.explicit_t0
                      : init_translation_kmeans(object, config.kmeans_k,
                                                config.kmeans_seed,
                                                config.kmeans_pick);
  const KdTree tree(object.points);

  // Candidate encoding: x = (omega, t offset from t0, dd relative to d0).
  // The candidate pose rotates the open gripper about its own origin.
  auto pose_surface = [&](const Eigen::VectorXd& x, Mat3& R_out, Vec3& t_out,
                          double& d_out) {
    const Vec3 omega = x.head<3>();
    const Vec3 dt = x.segment<3>(3);
    R_out = rodrigues(omega) * config.r0;
    t_out = t0 + dt;
    d_out = std::clamp(d0 + x(6), spec.d_min, spec.d_max);
  };

  auto objective = [&](const Eigen::VectorXd& x) {
    Mat3 R;
    Vec3 t;
    double d;
    pose_surface(x, R, t, d);
    const CanonicalGripperSurface posed = transform_finger_surface(
        build_canonical_surface(spec, d), R, t, 0.0, Vec3::UnitY());
    try {
      const CorrespondenceSet c = match(posed, object, tree, config.match);
      return geom_error(c, config.weights);
    } catch (const OneSidedCorrespondence&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(7);
  Eigen::VectorXd lower(7), upper(7);
  for (int i = 0; i < 3; ++i) {
    lower(i) = -config.cma.bound_omega;
    upper(i) = config.cma.bound_omega;
    lower(3 + i) = -config.cma.bound_t;
    upper(3 + i) = config.cma.bound_t;
  }
  lower(6) = spec.d_min - d0;
  upper(6) = spec.d_max - d0;

  const CmaesRun run =
      cmaes_minimize(objective, x0, config.cma.sigma0, lower, upper,
                     config.cma.population, config.cma.max_evals,
                     config.cma.seed);

  result.iterations = run.generations;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < run.best_per_generation.size(); ++g) {
    TraceRow row;
    row.iter = static_cast<int>(g) + 1;
    row.e_before = prev;
    row.e_after = run.best_per_generation[g];
    prev = run.best_per_generation[g];
    result.trace.push_back(row);
  }

  Mat3 R;
  Vec3 t;
  double d;
  if (!run.any_finite) {
    pose_surface(x0, R, t, d);
    result.message = "no candidate produced correspondences on both fingers";
    result.termination = Termination::correspondence_failure;
  } else {
    pose_surface(run.best_x, R, t, d);
    result.termination = Termination::converged;
  }
  result.rotation = R;
  result.translation = t;
  result.final_aperture = d;
  result.delta_d = d - d0;

  const CanonicalGripperSurface posed = transform_finger_surface(
      build_canonical_surface(spec, d), R, t, 0.0, Vec3::UnitY());
  result.quality.e_com_m = com_error(object, posed);
  const Vec3 nz = (R * config.n_z0).normalized();
  try {
    const CorrespondenceSet c = match(posed, object, tree, config.match);
    result.quality = evaluate_quality(object, posed, c, nz,
                                      config.n_app.normalized(),
                                      config.weights);
    result.n1 = static_cast<int>(c.finger[0].size());
    result.n2 = static_cast<int>(c.finger[1].size());
  } catch (const OneSidedCorrespondence&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.quality.e_p = result.quality.e_n = result.quality.e_a = nan;
    result.quality.e_na = result.quality.e_geom = nan;
  }
  result.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
  return result;
}

}  // namespace disf
