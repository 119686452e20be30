#include "disf/gripper.hpp"

#include "disf/errors.hpp"

namespace disf {

void GripperSpec::validate() const {
  if (!(finger_width > 0.0) || !(finger_height > 0.0))
    throw Error(ErrorCode::invalid_argument, "finger pad dimensions must be positive");
  if (!(d_min >= 0.0) || !(d_min < d_max))
    throw Error(ErrorCode::invalid_argument, "aperture range requires 0 <= d_min < d_max");
  if (pad_resolution < 2)
    throw Error(ErrorCode::invalid_argument, "pad_resolution must be >= 2");
}

GripperSpec gripper_preset(const std::string& name) {
  GripperSpec spec;
  spec.name = name;
  if (name == "franka_hand") {
    spec.finger_width = 0.018;
    spec.finger_height = 0.018;
    spec.d_min = 0.011;
    spec.d_max = 0.091;
  } else if (name == "robotiq_hande") {
    spec.finger_width = 0.020;
    spec.finger_height = 0.021;
    spec.d_min = 0.0;
    spec.d_max = 0.050;
  } else if (name == "umi") {
    spec.finger_width = 0.119;
    spec.finger_height = 0.026;
    spec.d_min = 0.0;
    spec.d_max = 0.080;
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown gripper preset '" + name + "'");
  }
  return spec;
}

const std::vector<std::string>& gripper_preset_names() {
  static const std::vector<std::string> names{"franka_hand", "robotiq_hande", "umi"};
  return names;
}

CanonicalGripperSurface build_canonical_surface(const GripperSpec& spec,
                                                double d0) {
  spec.validate();
  if (d0 < spec.d_min || d0 > spec.d_max)
    throw Error(ErrorCode::invalid_argument,
                "d0 outside gripper range [d_min, d_max]");
  const int n = spec.pad_resolution;
  const Vec3 v = canonical_finger_axis();
  CanonicalGripperSurface out;
  out.finger1.points.reserve(static_cast<std::size_t>(n) * n);
  out.finger2.points.reserve(static_cast<std::size_t>(n) * n);
  for (int iw = 0; iw < n; ++iw) {
    const double x = (-0.5 + static_cast<double>(iw) / (n - 1)) * spec.finger_width;
    for (int ih = 0; ih < n; ++ih) {
      const double z = (-0.5 + static_cast<double>(ih) / (n - 1)) * spec.finger_height;
      out.finger1.points.emplace_back(x, -0.5 * d0, z);
      out.finger1.normals.push_back(v);
      out.finger2.points.emplace_back(x, 0.5 * d0, z);
      out.finger2.normals.push_back(-v);
    }
  }
  return out;
}

namespace {
OrientedPointCloud transform_finger(const OrientedPointCloud& finger,
                                    const Mat3& R, const Vec3& t,
                                    double delta_d, const Vec3& v, int j) {
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j for j in {1, 2}
  const Vec3 offset = t + 0.5 * sign * delta_d * (R * v);
  OrientedPointCloud out;
  out.points.reserve(finger.size());
  out.normals.reserve(finger.normals.size());
  for (const Vec3& p : finger.points) out.points.push_back(R * p + offset);
  for (const Vec3& n : finger.normals) out.normals.push_back(R * n);
  out.labels = finger.labels;
  return out;
}
}  // namespace

CanonicalGripperSurface transform_finger_surface(
    const CanonicalGripperSurface& surface, const Mat3& R, const Vec3& t,
    double delta_d, const Vec3& v) {
  CanonicalGripperSurface out;
  out.finger1 = transform_finger(surface.finger1, R, t, delta_d, v, 1);
  out.finger2 = transform_finger(surface.finger2, R, t, delta_d, v, 2);
  return out;
}

Vec3 surface_centroid(const CanonicalGripperSurface& surface) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : surface.finger1.points) sum += p;
  for (const Vec3& p : surface.finger2.points) sum += p;
  const std::size_t n = surface.total_points();
  if (n == 0)
    throw Error(ErrorCode::precondition, "centroid of empty gripper surface");
  return sum / static_cast<double>(n);
}

OrientedPointCloud surface_union(const CanonicalGripperSurface& surface) {
  OrientedPointCloud out = surface.finger1;
  out.points.insert(out.points.end(), surface.finger2.points.begin(),
                    surface.finger2.points.end());
  out.normals.insert(out.normals.end(), surface.finger2.normals.begin(),
                     surface.finger2.normals.end());
  out.labels.clear();
  return out;
}

}  // namespace disf
