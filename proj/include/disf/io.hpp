#ifndef DISF_IO_HPP
#define DISF_IO_HPP

#include <string>

#include "disf/point_cloud.hpp"

namespace disf {

enum class CloudFormat { ply, xyz };

/// Picks ply for ".ply", xyz for ".xyz"/".txt"; throws otherwise.
CloudFormat format_from_path(const std::string& path);

/// ASCII PLY (element vertex with x y z [nx ny nz]) or whitespace-separated
/// XYZ[+normals]. Units are meters. Normals, when present, are renormalized
/// on load. Parse failures name the offending line.
OrientedPointCloud load_cloud(const std::string& path, CloudFormat format);
OrientedPointCloud load_cloud(const std::string& path);

/// Writes positions (and normals when present) with 9 significant digits,
/// which round-trips through load_cloud bit-exactly.
void save_cloud(const OrientedPointCloud& cloud, const std::string& path,
                CloudFormat format);
void save_cloud(const OrientedPointCloud& cloud, const std::string& path);

}  // namespace disf

#endif
