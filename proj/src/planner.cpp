#include "disf/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "disf/baselines.hpp"
#include "disf/errors.hpp"
#include "disf/rng.hpp"

namespace disf {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::correspondence_failure: return "correspondence_failure";
    case Termination::degenerate: return "degenerate";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "disf") return Method::disf;
  if (name == "visf") return Method::visf;
  if (name == "cmaes") return Method::cmaes;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + name + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::disf: return "disf";
    case Method::visf: return "visf";
    case Method::cmaes: return "cmaes";
  }
  return "unknown";
}

void CmaParams::validate() const {
  if (population < 4)
    throw Error(ErrorCode::invalid_argument, "cma population must be >= 4");
  if (max_evals < population)
    throw Error(ErrorCode::invalid_argument, "cma max_evals must be >= population");
  if (!(sigma0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "cma sigma0 must be positive");
}

void PlanConfig::validate() const {
  if (!(delta_e > 0.0))
    throw Error(ErrorCode::invalid_argument, "delta_e must be positive");
  if (max_iters < 1)
    throw Error(ErrorCode::invalid_argument, "max_iters must be >= 1");
  if (kmeans_k < 1)
    throw Error(ErrorCode::invalid_argument, "kmeans_k must be >= 1");
  if (!(weights.alpha >= 0.0) || !(weights.beta >= 0.0))
    throw Error(ErrorCode::invalid_argument, "weights must be non-negative");
  match.validate();
  cma.validate();
  if (!is_rotation(r0, 1e-6))
    throw Error(ErrorCode::invalid_argument, "r0 is not a rotation matrix");
}

double PlanConfig::resolved_d0(const GripperSpec& spec) const {
  const double v = d0 < 0.0 ? spec.d_max : d0;
  if (v < spec.d_min || v > spec.d_max)
    throw Error(ErrorCode::invalid_argument, "d0 outside [d_min, d_max]");
  return v;
}

namespace {

struct KmeansRun {
  std::vector<Vec3> centroids;
  bool has_empty = false;
};

KmeansRun run_kmeans(const std::vector<Vec3>& pts, int k, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = pts.size();

  // k-means++ seeding.
  std::vector<Vec3> centers;
  centers.reserve(k);
  centers.push_back(pts[rng.uniform_index(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& c : centers)
        best = std::min(best, (pts[i] - c).squaredNorm());
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // All points coincide with existing centers; duplicate one.
      centers.push_back(centers.back());
      continue;
    }
    double target = rng.uniform() * total;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target <= 0.0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(pts[chosen]);
  }

  // Lloyd iterations.
  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = (pts[i] - centers[0]).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (pts[i] - centers[c]).squaredNorm();
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    std::vector<Vec3> sums(k, Vec3::Zero());
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[assign[i]] += pts[i];
      counts[assign[i]] += 1;
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers[c] = sums[c] / counts[c];
    if (!changed) break;
  }

  KmeansRun out;
  out.centroids = centers;
  std::vector<int> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) counts[assign[i]] += 1;
  for (int c = 0; c < k; ++c)
    if (counts[c] == 0) out.has_empty = true;
  return out;
}

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

}  // namespace

Vec3 init_translation_kmeans(const OrientedPointCloud& object, int k,
                             std::uint64_t seed, int pick) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  if (static_cast<std::size_t>(k) > object.size())
    throw Error(ErrorCode::precondition, "k exceeds point count");

  KmeansRun run = run_kmeans(object.points, k, seed);
  if (run.has_empty) {
    run = run_kmeans(object.points, k, seed ^ 0x9e3779b97f4a7c15ull);
    if (run.has_empty)
      throw Error(ErrorCode::degenerate, "k-means produced an empty cluster");
  }
  std::sort(run.centroids.begin(), run.centroids.end(), lex_less);

  if (pick >= 0) {
    if (pick >= k)
      throw Error(ErrorCode::invalid_argument, "kmeans pick out of range");
    return run.centroids[pick];
  }
  const Vec3 c = centroid(object);
  int best = 0;
  double bd = (run.centroids[0] - c).squaredNorm();
  for (int i = 1; i < k; ++i) {
    const double d = (run.centroids[i] - c).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return run.centroids[best];
}

namespace {

double loop_error(const CorrespondenceSet& c, const PlanConfig& config) {
  return config.loop_objective == LoopObjective::e_geom
             ? geom_error(c, config.weights)
             : surface_distance_error(c);
}

Vec3 initial_translation(const OrientedPointCloud& object,
                         const PlanConfig& config) {
  if (config.t0_mode == PlanConfig::T0Mode::explicit_t0)
    return config.explicit_t0;
  return init_translation_kmeans(object, config.kmeans_k, config.kmeans_seed,
                                 config.kmeans_pick);
}

}  // namespace

double objective_at_pose(const OrientedPointCloud& object,
                         const GripperSpec& spec, const PlanConfig& config,
                         const Mat3& R, const Vec3& t, double aperture,
                         int* n1, int* n2) {
  const CanonicalGripperSurface canonical =
      build_canonical_surface(spec, aperture);
  const CanonicalGripperSurface posed =
      transform_finger_surface(canonical, R, t, 0.0, Vec3::UnitY());
  const CorrespondenceSet c = match(posed, object, config.match);
  if (n1) *n1 = static_cast<int>(c.finger[0].size());
  if (n2) *n2 = static_cast<int>(c.finger[1].size());
  return loop_error(c, config);
}

PlanResult plan(const OrientedPointCloud& object, const GripperSpec& spec,
                const PlanConfig& config) {
  config.validate();
  spec.validate();
  if (!object.has_normals())
    throw Error(ErrorCode::precondition, "plan: object normals missing");

  const auto t_start = std::chrono::steady_clock::now();
  PlanResult result;
  result.method = Method::disf;

  const double d0 = config.resolved_d0(spec);
  const Vec3 t0 = initial_translation(object, config);

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
    // Final report at the final pose with a fresh match when possible.
    result.quality.e_com_m = com_error(object, posed);
    try {
      const CorrespondenceSet c = match(posed, object, tree, config.match);
      result.quality = evaluate_quality(object, posed, c, state.z_axis,
                                        state.approach, config.weights);
      result.n1 = static_cast<int>(c.finger[0].size());
      result.n2 = static_cast<int>(c.finger[1].size());
    } catch (const OneSidedCorrespondence&) {
      result.quality.e_p = std::numeric_limits<double>::quiet_NaN();
      result.quality.e_n = std::numeric_limits<double>::quiet_NaN();
      result.quality.e_a = std::numeric_limits<double>::quiet_NaN();
      result.quality.e_na = std::numeric_limits<double>::quiet_NaN();
      result.quality.e_geom = std::numeric_limits<double>::quiet_NaN();
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
    const CorrespondenceSet c0 = match(posed, object, tree, config.match);
    e = loop_error(c0, config);
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

    try {
      const RotOptResult rot = rot_opt_step(state, posed, c, config.weights);
      row.omega = rot.omega;
    } catch (const SingularSystem& ex) {
      result.message = ex.what();
      return finish(Termination::degenerate);
    }

    row.t_c = trans_refine_step(state, posed, c);

    try {
      const FingerOptResult fo = finger_opt_step(state, posed, c, spec);
      row.delta_d = fo.delta_d;
    } catch (const DegenerateAperture&) {
      row.delta_d = 0.0;  // keep the aperture; the stage is skipped
    }

    e = loop_error(c, config);
    row.e_after = e;
    result.trace.push_back(row);
    result.iterations += 1;
  }

  return finish(result.iterations >= config.max_iters && e_prev - e >= config.delta_e
                    ? Termination::max_iters
                    : Termination::converged);
}

PlanResult plan_with_method(Method method, const OrientedPointCloud& object,
                            const GripperSpec& spec, const PlanConfig& config) {
  switch (method) {
    case Method::disf: return plan(object, spec, config);
    case Method::visf: return visf_plan(object, spec, config);
    case Method::cmaes: return cmaes_plan(object, spec, config);
  }
  throw Error(ErrorCode::internal, "unreachable");
}

namespace {
double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}
}  // namespace

std::vector<PlanResult> plan_batch(const std::vector<OrientedPointCloud>& objects,
                                   const GripperSpec& spec,
                                   const PlanConfig& config, Method method,
                                   int repeats, BatchSummary* summary) {
  if (objects.empty())
    throw Error(ErrorCode::invalid_argument, "plan_batch: empty object list");
  if (repeats < 1)
    throw Error(ErrorCode::invalid_argument, "plan_batch: repeats must be >= 1");
  std::vector<PlanResult> results;
  results.reserve(objects.size() * repeats);
  for (const OrientedPointCloud& object : objects) {
    for (int r = 0; r < repeats; ++r) {
      PlanConfig run_config = config;
      run_config.kmeans_seed = config.kmeans_seed + static_cast<std::uint64_t>(r);
      run_config.cma.seed = config.cma.seed + static_cast<std::uint64_t>(r);
      try {
        results.push_back(plan_with_method(method, object, spec, run_config));
      } catch (const Error& ex) {
        PlanResult failed;
        failed.method = method;
        failed.termination = Termination::degenerate;
        failed.message = ex.what();
        results.push_back(failed);
      }
    }
  }
  if (summary) {
    BatchSummary s;
    s.method = method;
    s.runs = static_cast<int>(results.size());
    std::vector<double> wall, geom, com;
    double wall_sum = 0.0;
    for (const PlanResult& r : results) {
      wall.push_back(r.wall_time_ms);
      wall_sum += r.wall_time_ms;
      if (r.termination == Termination::converged ||
          r.termination == Termination::max_iters) {
        if (std::isfinite(r.quality.e_geom)) geom.push_back(r.quality.e_geom);
        com.push_back(r.quality.e_com_m);
      } else {
        s.failures += 1;
      }
    }
    s.median_wall_ms = median(wall);
    s.mean_wall_ms = s.runs > 0 ? wall_sum / s.runs : 0.0;
    s.median_e_geom = median(geom);
    s.median_e_com_m = median(com);
    *summary = s;
  }
  return results;
}

}  // namespace disf
