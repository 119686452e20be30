#ifndef DISF_GRIPPER_HPP
#define DISF_GRIPPER_HPP

#include <string>
#include <vector>

#include "disf/point_cloud.hpp"

namespace disf {

// Fingertip pad geometry and aperture range of a parallel-jaw gripper.
struct GripperSpec {
  std::string name = "franka_hand";
  double finger_width = 0.018;   // W, meters
  double finger_height = 0.018;  // H, meters
  double d_min = 0.011;
  double d_max = 0.091;
  int pad_resolution = 8;  // points per pad side

  void validate() const;
};

/// Built-in specs: franka_hand, robotiq_hande, umi.
GripperSpec gripper_preset(const std::string& name);
const std::vector<std::string>& gripper_preset_names();

// Two fingertip pad clouds. In the canonical frame the fingers are separated
// along +y (the canonical finger axis), finger 1 on the -y side with normals
// +y and finger 2 on the +y side with normals -y, so the inner pad faces
// point at each other.
struct CanonicalGripperSurface {
  OrientedPointCloud finger1;
  OrientedPointCloud finger2;

  std::size_t total_points() const {
    return finger1.size() + finger2.size();
  }
};

inline Vec3 canonical_finger_axis() { return Vec3(0, 1, 0); }
inline Vec3 canonical_z_axis() { return Vec3(0, 0, 1); }

/// Regular pad_resolution x pad_resolution grids spanning W x H, offset
/// +-d0/2 along the canonical finger axis. Deterministic.
CanonicalGripperSurface build_canonical_surface(const GripperSpec& spec,
                                                double d0);

/// Gripper transformation: finger j maps p -> R p + t + 0.5 (-1)^j R v dd
/// (j = 1, 2) and n -> R n. dd > 0 opens the fingers, dd < 0 closes them.
CanonicalGripperSurface transform_finger_surface(
    const CanonicalGripperSurface& surface, const Mat3& R, const Vec3& t,
    double delta_d, const Vec3& v);

/// Centroid of the union of both pads.
Vec3 surface_centroid(const CanonicalGripperSurface& surface);

OrientedPointCloud surface_union(const CanonicalGripperSurface& surface);

// Full decision-variable set in the world frame.
struct GripperState {
  Mat3 rotation = Mat3::Identity();  // accumulated, world <- canonical
  Vec3 translation = Vec3::Zero();
  double aperture = 0.0;
  Vec3 finger_axis = canonical_finger_axis();  // v (world)
  Vec3 z_axis = canonical_z_axis();            // n_z (world)
  Vec3 approach = canonical_z_axis();          // n_app (fixed input)
};

}  // namespace disf

#endif
