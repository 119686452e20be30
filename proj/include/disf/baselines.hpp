#ifndef DISF_BASELINES_HPP
#define DISF_BASELINES_HPP

#include <functional>

#include "disf/planner.hpp"

namespace disf {

/// Joint iterative surface fitting: one linearized least-squares solve over
/// (omega, t, dd) per iteration, minimizing E_p + alpha^2 E_n + beta^2 E_a.
/// Shares the correspondence, clamping and termination machinery with plan();
/// no translation-refinement stage.
PlanResult visf_plan(const OrientedPointCloud& object, const GripperSpec& spec,
                     const PlanConfig& config);

/// Covariance-matrix-adaptation evolution strategy over (omega, t, dd),
/// minimizing E_geom. Bit-reproducible under a fixed seed.
PlanResult cmaes_plan(const OrientedPointCloud& object, const GripperSpec& spec,
                      const PlanConfig& config);

struct CmaesRun {
  Eigen::VectorXd best_x;
  double best_f = 0.0;
  int evaluations = 0;
  int generations = 0;
  bool any_finite = false;
  std::vector<double> best_per_generation;
};

/// Generic bound-constrained CMA-ES minimizer (test hook and cmaes_plan
/// backend). Out-of-bounds samples are resampled a few times, then clamped.
CmaesRun cmaes_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, double sigma0,
                        const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper, int population,
                        int max_evals, std::uint64_t seed);

}  // namespace disf

#endif
