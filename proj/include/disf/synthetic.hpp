#ifndef DISF_SYNTHETIC_HPP
#define DISF_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "disf/point_cloud.hpp"

namespace disf {

enum class ObjectKind { box, t_block, cylinder, stem_glass, l_block };

ObjectKind parse_object_kind(const std::string& name);
const char* to_string(ObjectKind kind);

/// Dimension conventions (meters):
///   box:        lx ly lz
///   cylinder:   radius height
///   t_block:    stem lx ly lz, bar lx ly lz (bar sits on top of the stem)
///   l_block:    upright lx ly lz, foot lx ly lz (foot extends along +x)
///   stem_glass: base r h, stem r h, bowl r h (stacked along +z)
std::vector<double> default_dims(ObjectKind kind);

/// Area-weighted uniform surface sampling with analytic outward normals,
/// optional Gaussian position noise, deterministic under seed. Compound
/// kinds reject samples landing inside a partner solid, so only the exposed
/// union surface is sampled.
OrientedPointCloud generate_synthetic_object(ObjectKind kind,
                                             const std::vector<double>& dims,
                                             int points, double noise_sigma,
                                             std::uint64_t seed);

}  // namespace disf

#endif
