#ifndef DISF_PLANNER_HPP
#define DISF_PLANNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "disf/solvers.hpp"

namespace disf {

enum class Termination { converged, max_iters, correspondence_failure, degenerate };
const char* to_string(Termination t);

enum class LoopObjective { e_geom, e_p };

enum class Method { disf, visf, cmaes };
Method parse_method(const std::string& name);
const char* to_string(Method m);

struct CmaParams {
  int population = 16;
  double sigma0 = 0.02;
  int max_evals = 2000;
  std::uint64_t seed = 0;
  double bound_omega = M_PI / 2.0;  // per-axis bound on the rotation vector
  double bound_t = 0.05;            // per-axis bound on the translation, meters

  void validate() const;
};

struct PlanConfig {
  QualityWeights weights;
  MatchParams match;
  double delta_e = 1e-4;
  int max_iters = 100;
  double d0 = -1.0;  // < 0: use spec.d_max (gripper fully open)
  Vec3 v0 = Vec3(0, 1, 0);
  Vec3 n_z0 = Vec3(0, 0, 1);
  Vec3 n_app = Vec3(0, 0, 1);
  Mat3 r0 = Mat3::Identity();

  enum class T0Mode { kmeans, explicit_t0 };
  T0Mode t0_mode = T0Mode::kmeans;
  int kmeans_k = 5;
  std::uint64_t kmeans_seed = 0;
  int kmeans_pick = -1;  // -1: centroid nearest the full-cloud centroid
  Vec3 explicit_t0 = Vec3::Zero();

  LoopObjective loop_objective = LoopObjective::e_geom;
  bool visf_drop_approach_term = false;
  CmaParams cma;

  void validate() const;
  double resolved_d0(const GripperSpec& spec) const;
};

struct TraceRow {
  int iter = 0;
  double e_before = 0.0;
  double e_after = 0.0;
  Vec3 omega = Vec3::Zero();
  Vec3 t_c = Vec3::Zero();
  double delta_d = 0.0;
  int n1 = 0;
  int n2 = 0;
};

struct PlanResult {
  Method method = Method::disf;
  Mat3 rotation = Mat3::Identity();   // R*: world <- canonical gripper frame
  Vec3 translation = Vec3::Zero();    // t*
  double delta_d = 0.0;               // accumulated fingertip displacement
  double final_aperture = 0.0;
  int iterations = 0;
  std::vector<TraceRow> trace;
  QualityReport quality;
  int n1 = 0, n2 = 0;                 // final correspondence counts
  double wall_time_ms = 0.0;
  Termination termination = Termination::converged;
  std::string message;                // failure detail, if any
};

/// Seeded k-means (k-means++ initialization, Lloyd iterations). Centroids are
/// sorted lexicographically; returns centroid `pick`, or with pick < 0 the
/// centroid nearest the full-cloud centroid.
Vec3 init_translation_kmeans(const OrientedPointCloud& object, int k,
                             std::uint64_t seed, int pick = -1);

/// Disentangled iterative surface fitting: alternates the rotation,
/// translation and aperture stages until the loop objective improves by less
/// than delta_e.
PlanResult plan(const OrientedPointCloud& object, const GripperSpec& spec,
                const PlanConfig& config);

PlanResult plan_with_method(Method method, const OrientedPointCloud& object,
                            const GripperSpec& spec, const PlanConfig& config);

/// Loop objective and correspondence counts at an arbitrary pose; the same
/// code path every planner uses. Throws on correspondence failure.
double objective_at_pose(const OrientedPointCloud& object,
                         const GripperSpec& spec, const PlanConfig& config,
                         const Mat3& R, const Vec3& t, double aperture,
                         int* n1 = nullptr, int* n2 = nullptr);

struct BatchSummary {
  Method method = Method::disf;
  int runs = 0;
  int failures = 0;
  double median_wall_ms = 0.0;
  double mean_wall_ms = 0.0;
  double median_e_geom = 0.0;
  double median_e_com_m = 0.0;
};

/// Runs `repeats` plans per object; repeat r uses kmeans_seed + r and
/// cma.seed + r. Failures are recorded per run and the batch continues.
std::vector<PlanResult> plan_batch(const std::vector<OrientedPointCloud>& objects,
                                   const GripperSpec& spec,
                                   const PlanConfig& config, Method method,
                                   int repeats, BatchSummary* summary = nullptr);

}  // namespace disf

#endif
